"""Constructive internally disjoint Steiner path packings for D_{k,n}."""

from __future__ import annotations

from .base import Packing, SteinerTriple
from .complete import pack_complete
from .dim1 import pack_d1


def pi3_formula(k: int, n: int) -> int:
    """floor((2n + 3k) / 4): the 3-path connectivity of D_{k,n} for n >= 6."""
    return (2 * n + 3 * k) // 4


def formula_applies(k: int, n: int) -> bool:
    """Range where the formula is a proven value rather than arithmetic."""
    return k >= 0 and n >= 6


__all__ = [
    "Packing",
    "SteinerTriple",
    "pack",
    "pack_complete",
    "pack_d1",
    "pi3_formula",
    "formula_applies",
    "spare_neighbors",
]


def __getattr__(name):
    # pack and spare_neighbors live in heavier modules; import lazily so the
    # light constructors stay importable on their own
    if name == "pack":
        from .recursive import pack

        return pack
    if name == "spare_neighbors":
        from .sparing import spare_neighbors

        return spare_neighbors
    raise AttributeError(name)

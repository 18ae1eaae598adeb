"""Steiner path packing in complete graphs: the floor(n/2) construction.

Template family over K_n with triple {x, y, z} and spare vertices c_1..c_{n-3}:
    T_1 = x y z
    T_2 = x z c_1 y
    T_j = x c_{2j-4} z c_{2j-3} y        (j = 3 .. floor(n/2))
For odd n one spare vertex is left untouched, which downstream constructions
consume for their extra path.
"""

from __future__ import annotations

from ..errors import RangeError
from ..graphcore import Graph
from .base import Packing, SteinerTriple, certified


def complete_templates(n: int, s: tuple[int, int, int], offset: int = 0) -> list[list[int]]:
    """Path vertex lists for the packing of `s` inside K_n (ids offset..offset+n-1)."""
    if n < 3:
        raise RangeError(f"complete-graph packing needs n >= 3, got {n}")
    base = set(range(offset, offset + n))
    if not set(s) <= base:
        raise RangeError(f"triple {s} outside clique ids [{offset}, {offset + n})")
    x, y, z = sorted(s)
    spares = sorted(base - set(s))
    paths = [[x, y, z]]
    if n >= 4:
        paths.append([x, z, spares[0], y])
    for j in range(3, n // 2 + 1):
        paths.append([x, spares[2 * j - 5], z, spares[2 * j - 4], y])
    return paths


def leftover_spare(n: int, s: tuple[int, int, int], offset: int = 0) -> int | None:
    """The clique vertex unused by complete_templates (odd n >= 5 only)."""
    if n % 2 == 0 or n < 5:
        return None
    spares = sorted(set(range(offset, offset + n)) - set(s))
    return spares[-1]


def pack_complete(nvertices: int, s, g: Graph | None = None) -> Packing:
    """Packing of exactly floor(n/2) internally disjoint S-paths in K_n."""
    triple = SteinerTriple.of(s)
    g = g or Graph.complete(nvertices)
    paths = complete_templates(nvertices, triple.as_tuple())
    return certified(g, triple, paths, "complete-graph")

"""Shared packing types and path-assembly helpers."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ConstructionBugError
from ..graphcore import Graph
from ..verify import check_packing


@dataclass(frozen=True)
class SteinerTriple:
    x: int
    y: int
    z: int

    def __post_init__(self):
        if len({self.x, self.y, self.z}) != 3:
            raise ConstructionBugError("triple", f"members not distinct: {self}")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.z)

    @classmethod
    def of(cls, items) -> "SteinerTriple":
        a, b, c = items
        return cls(a, b, c)


@dataclass
class Packing:
    triple: SteinerTriple
    paths: list[list[int]] = field(default_factory=list)
    case_labels: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.paths)


def certified(g: Graph, triple: SteinerTriple, paths: list[list[int]], label: str, labels: list[str] | None = None) -> Packing:
    """Wrap paths into a Packing after running the independent validator.

    Any validation failure is a construction bug and is raised with the
    active case label, never repaired.
    """
    rep = check_packing(g, triple.as_tuple(), paths)
    if not rep.ok:
        bad = "; ".join(f"{n}: {d}" for n, ok, d in rep.checks if not ok)
        raise ConstructionBugError(label, bad)
    return Packing(triple=triple, paths=paths, case_labels=list(labels or [label]))


def cat(*segments) -> list[int]:
    """Concatenate path segments, collapsing equal vertices at the seams.

    Segments are vertex lists or single ints.  Anchors that degenerate onto
    their neighboring terminal (the prime-modification rules) disappear via
    the seam collapse.
    """
    out: list[int] = []
    for seg in segments:
        items = [seg] if isinstance(seg, int) else list(seg)
        for v in items:
            if not out or out[-1] != v:
                out.append(v)
    return out


def rev(path: list[int]) -> list[int]:
    return list(reversed(path))


def arm(fan_paths: dict[int, list[int]], target: int, to_root: bool = False) -> list[int]:
    """Fan arm to `target`, oriented root->target (or reversed)."""
    path = fan_paths[target]
    return rev(path) if to_root else list(path)

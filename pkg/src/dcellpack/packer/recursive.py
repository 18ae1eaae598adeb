"""Recursive packing of floor((2n+3k)/4) S-paths in D_{k,n} for k >= 2.

The top split of D_{k,n} is t_{k-1}+1 copies of D_{k-1,n}.  Packing
dispatches on how many copies the triple touches: one copy recurses and, on
the parity branch that needs one more path, escapes through four outside
copies; two and three copies use the fan-and-bridge constructions in
claim_two_copies / claim_three_copies.

All constructed packings pass the independent validator before being
returned; an invalid assembly raises with its case label rather than being
repaired.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .. import topology as topo
from ..errors import ConstructionBugError, RangeError
from ..graphcore import Graph, connect
from .base import Packing, SteinerTriple, cat, certified, rev
from .complete import pack_complete
from .dim1 import pack_d1
from .sparing import spare_neighbors


def pi3_formula(k: int, n: int) -> int:
    return (2 * n + 3 * k) // 4


@dataclass(frozen=True)
class Frame:
    """Coordinate helpers for the top-level copy split of D_{k,n}."""

    p: topo.DCellParams
    g: Graph

    @property
    def sub(self) -> int:
        return self.p.t[self.p.k - 1]

    @property
    def ncopies(self) -> int:
        return self.sub + 1

    def copy_of(self, v: int) -> int:
        return v // self.sub

    def local(self, v: int) -> int:
        return v % self.sub

    def lift(self, c: int, local: int) -> int:
        return c * self.sub + local

    def cross(self, v: int) -> int:
        return topo.cross_neighbor_uid(v, self.p.k, self.p)

    def endpoint(self, frm: int, to: int) -> int:
        """Vertex of copy `frm` carrying the unique (frm, to) cross edge."""
        if frm == to:
            raise RangeError("a copy has no edge to itself")
        return self.lift(frm, to - 1 if frm < to else to)

    def copy_range(self, c: int) -> range:
        return range(c * self.sub, (c + 1) * self.sub)

    def region(self, copies) -> set[int]:
        out: set[int] = set()
        for c in copies:
            out.update(self.copy_range(c))
        return out

    def connect_in(self, copies, a: int, b: int) -> list[int]:
        return connect(self.g, a, b, within=self.region(copies))


@functools.lru_cache(maxsize=16)
def _local_graph(k: int, n: int) -> Graph:
    return topo.build_graph(topo.build_params(k, n, vertex_budget=None))


def pack(p: topo.DCellParams, s, g: Graph | None = None) -> Packing:
    """Constructive packing of exactly pi3_formula(k, n) S-paths."""
    if p.n < 6:
        raise RangeError(
            f"constructive packing needs n >= 6, got n={p.n}; use the oracle instead"
        )
    triple = SteinerTriple.of(s)
    for v in triple.as_tuple():
        if not 0 <= v < p.vertex_count:
            raise RangeError(f"vertex {v} outside D_{{{p.k},{p.n}}}")
    if p.k == 0:
        return pack_complete(p.n, s, g)
    if p.k == 1:
        return pack_d1(p.n, s, g)
    g = g or topo.build_graph(p)
    frame = Frame(p=p, g=g)
    touched = {frame.copy_of(v) for v in triple.as_tuple()}
    if len(touched) == 1:
        pk = _claim_same_copy(frame, triple)
    elif len(touched) == 2:
        from .claim3 import claim_two_copies

        pk = claim_two_copies(frame, triple)
    else:
        from .claim2 import claim_three_copies

        pk = claim_three_copies(frame, triple)
    target = pi3_formula(p.k, p.n)
    if len(pk.paths) != target:
        raise ConstructionBugError(
            pk.case_labels[0] if pk.case_labels else "pack",
            f"built {len(pk.paths)} paths, wanted {target}",
        )
    return pk


def pack_inner(frame: Frame, c: int, local_triple, want_spares: int = 0):
    """Recursive packing inside copy c, lifted to global ids.

    With want_spares > 0 the spare-neighbor exchange is run locally first
    and the lifted spare vertices are returned alongside.
    """
    p_sub = topo.build_params(frame.p.k - 1, frame.p.n, vertex_budget=None)
    g_sub = _local_graph(frame.p.k - 1, frame.p.n)
    inner = pack(p_sub, local_triple, g_sub)
    paths_local = inner.paths
    spares_local: list[int] = []
    if want_spares:
        ell = 1 if want_spares == 1 else 3
        paths_local, spares_local = spare_neighbors(
            g_sub, local_triple, paths_local, ell=ell
        )
    lifted = [[frame.lift(c, v) for v in path] for path in paths_local]
    return lifted, [frame.lift(c, v) for v in spares_local]


def plus_one_needed(k: int, n: int) -> bool:
    inner, outer = pi3_formula(k - 1, n), pi3_formula(k, n)
    if outer not in (inner, inner + 1):
        raise ConstructionBugError("parity", f"formula gap {inner} -> {outer}")
    return outer == inner + 1


def _claim_same_copy(frame: Frame, triple: SteinerTriple) -> Packing:
    """All of S inside one copy: recurse; on the +1 parity branch free a
    neighbor of S and route one extra path through four outside copies."""
    p, g = frame.p, frame.g
    c0 = frame.copy_of(triple.x)
    local = tuple(frame.local(v) for v in triple.as_tuple())
    if not plus_one_needed(p.k, p.n):
        paths, _ = pack_inner(frame, c0, local)
        return certified(g, triple, paths, "claim1-passthrough")

    paths, spares = pack_inner(frame, c0, local, want_spares=1)
    u = spares[0]
    members = sorted(triple.as_tuple())
    adjacent = [m for m in members if g.has_edge(u, m)]
    if not adjacent:
        raise ConstructionBugError("claim1", f"spare {u} not adjacent to {members}")
    pivot = adjacent[0]
    others = [m for m in members if m != pivot]
    q, r = others
    pq, uq, qq, rq = (frame.cross(v) for v in (pivot, u, q, r))
    cp, cu, cq, cr = (frame.copy_of(w) for w in (pq, uq, qq, rq))
    if len({cp, cu, cq, cr, c0}) != 5:
        raise ConstructionBugError("claim1", f"cross copies collide: {cp, cu, cq, cr}")
    v = frame.endpoint(cp, cq)
    w = frame.endpoint(cu, cr)
    t1 = frame.connect_in([cp], pq, v)
    t2 = frame.connect_in([cu], uq, w)
    t3 = frame.connect_in([cq], qq, frame.cross(v))
    t4 = frame.connect_in([cr], rq, frame.cross(w))
    extra = cat(r, t4, rev(t2), u, pivot, t1, rev(t3), q)
    return certified(g, triple, paths + [extra], "claim1-plus-one")

"""Exact construction of the recursive data center network D_{k,n}.

Vertices carry two equivalent identities: a (k+1)-digit coordinate tuple
(a_k, ..., a_1, a_0) and a dense integer uid.  The uid of the length-(j+1)
suffix is a_0 + sum(a_l * t[l-1] for l in 1..j), a mixed-radix encoding, so
the vertices of the copy with top digit c occupy the contiguous uid block
[c * t[k-1], (c+1) * t[k-1]).

Level-0 edges form the K_n cliques at the recursion floor; for each level
l >= 1 every vertex gains exactly one cross edge joining its enclosing
level-(l-1) block to a sibling block.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import BudgetExceededError, RangeError
from .graphcore import Graph

DEFAULT_VERTEX_BUDGET = 10**7


@dataclass(frozen=True)
class DCellParams:
    """Validated (k, n) pair plus the size table t[i] = |V(D_{i,n})|."""

    k: int
    n: int
    t: tuple[int, ...]

    @property
    def vertex_count(self) -> int:
        return self.t[self.k]

    @property
    def degree(self) -> int:
        return self.n + self.k - 1


def build_params(k: int, n: int, vertex_budget: int | None = DEFAULT_VERTEX_BUDGET) -> DCellParams:
    """Build the size table t[0..k] with t[0] = n, t[i] = t[i-1] * (t[i-1] + 1).

    Python integers are exact at any size, so the table itself cannot
    overflow; the budget guards against building graphs whose vertex count
    is unusable at desk scale.
    """
    if not isinstance(k, int) or not isinstance(n, int):
        raise RangeError(f"k and n must be integers, got k={k!r} n={n!r}")
    if k < 0:
        raise RangeError(f"dimension k must be >= 0, got {k}")
    if n < 2:
        raise RangeError(f"port count n must be >= 2, got {n}")
    t = [n]
    for _ in range(k):
        t.append(t[-1] * (t[-1] + 1))
        if vertex_budget is not None and t[-1] > vertex_budget:
            raise BudgetExceededError(
                f"D_{{{k},{n}}} needs {t[-1]} or more vertices; budget is {vertex_budget}"
            )
    return DCellParams(k=k, n=n, t=tuple(t))


def _digit_limit(p: DCellParams, i: int) -> int:
    """Exclusive upper bound for digit a_i."""
    return p.n if i == 0 else p.t[i - 1] + 1


def validate_coord(digits: tuple[int, ...], p: DCellParams) -> None:
    if len(digits) != p.k + 1:
        raise RangeError(f"coordinate needs {p.k + 1} digits, got {len(digits)}")
    # digits are stored high-to-low: (a_k, ..., a_0)
    for pos, d in enumerate(digits):
        i = p.k - pos
        if not 0 <= d < _digit_limit(p, i):
            raise RangeError(f"digit a_{i}={d} out of range [0, {_digit_limit(p, i)})")


def uid(digits: tuple[int, ...], j: int, p: DCellParams) -> int:
    """uid of the length-(j+1) suffix (a_j, ..., a_0) of a validated coordinate."""
    validate_coord(digits, p)
    if not 0 <= j <= p.k:
        raise RangeError(f"suffix length index j={j} out of range [0, {p.k}]")
    value = digits[-1]
    for l in range(1, j + 1):
        value += digits[p.k - l] * p.t[l - 1]
    return value


def coord_from_uid(u: int, p: DCellParams) -> tuple[int, ...]:
    """Inverse of the full-length uid: mixed-radix decomposition, high digit first."""
    if not 0 <= u < p.t[p.k]:
        raise RangeError(f"uid {u} out of range [0, {p.t[p.k]})")
    digits = []
    rem = u
    for l in range(p.k, 0, -1):
        digits.append(rem // p.t[l - 1])
        rem %= p.t[l - 1]
    digits.append(rem)
    return tuple(digits)


def cross_neighbor(digits: tuple[int, ...], level: int, p: DCellParams) -> tuple[int, ...]:
    """The unique level-dimensional neighbor of a coordinate.

    Closed form of the pairwise connection rule: with c = a_level and
    u = uid_{level-1}, the partner sits in sibling block u+1 at block-local
    uid c when u >= c, else in block u at block-local uid c-1.  The choice
    makes the operation an involution; see the module tests for the
    exhaustive cross-check against the pairwise definition.
    """
    validate_coord(digits, p)
    if not 1 <= level <= p.k:
        raise RangeError(f"cross edges exist for levels 1..{p.k}, got {level}")
    c = digits[p.k - level]
    u = uid(digits, level - 1, p)
    if u >= c:
        new_top, new_local = u + 1, c
    else:
        new_top, new_local = u, c - 1
    prefix = digits[: p.k - level]
    suffix = coord_from_uid(new_local, build_params(level - 1, p.n, vertex_budget=None))
    return prefix + (new_top,) + suffix


def cross_neighbor_uid(u: int, level: int, p: DCellParams) -> int:
    """cross_neighbor in uid space, working on the level-local block split."""
    if not 0 <= u < p.t[p.k]:
        raise RangeError(f"uid {u} out of range [0, {p.t[p.k]})")
    if not 1 <= level <= p.k:
        raise RangeError(f"cross edges exist for levels 1..{p.k}, got {level}")
    block = p.t[level]  # size of a level-l sub-network
    sub = p.t[level - 1]  # size of its copies
    base = (u // block) * block
    local = u % block
    c, r = divmod(local, sub)
    if r >= c:
        moved = (r + 1) * sub + c
    else:
        moved = r * sub + (c - 1)
    return base + moved


def copy_vertices(p: DCellParams, level: int, prefix: tuple[int, ...]) -> range:
    """Uids of the copy selected by fixing the high digits `prefix` at `level`.

    The copy at level l with a fixed digit prefix (a_k, ..., a_l) is the
    contiguous uid block of length t[l-1] starting at the prefix offset;
    level 0 with an empty check selects single-clique blocks, and the
    degenerate call (level=k, empty prefix) returns the whole vertex set.
    """
    if not 0 <= level <= p.k:
        raise RangeError(f"level {level} out of range [0, {p.k}]")
    if level == 0:
        # degenerate: no split below the clique floor, the "copy" is everything
        if prefix:
            raise RangeError("level-0 selection takes an empty prefix")
        return range(0, p.t[p.k])
    if len(prefix) != p.k - level + 1:
        # a level-l copy is selected by fixing digits a_k .. a_l
        raise RangeError(
            f"prefix of length {len(prefix)} does not select a level-{level} copy of D_{{{p.k},{p.n}}}"
        )
    base = 0
    for pos, d in enumerate(prefix):
        i = p.k - pos
        if not 0 <= d < _digit_limit(p, i):
            raise RangeError(f"prefix digit a_{i}={d} out of range")
        base += d * p.t[i - 1]
    return range(base, base + p.t[level - 1])


def _edges(p: DCellParams) -> list[tuple[int, int]]:
    edges: list[tuple[int, int]] = []
    # level-0 cliques
    for base in range(0, p.t[p.k], p.n):
        for a in range(p.n):
            for b in range(a + 1, p.n):
                edges.append((base + a, base + b))
    # one cross edge per vertex per level; emit each once via the unique
    # inter-copy pairing r < s inside every level-l block
    for level in range(1, p.k + 1):
        block, sub = p.t[level], p.t[level - 1]
        for base in range(0, p.t[p.k], block):
            for r in range(sub + 1):
                for s in range(r + 1, sub + 1):
                    a = base + r * sub + (s - 1)
                    b = base + s * sub + r
                    edges.append((a, b))
    return edges


@functools.lru_cache(maxsize=32)
def _build_graph_cached(k: int, n: int) -> Graph:
    p = build_params(k, n, vertex_budget=None)
    return Graph.from_edges(p.t[k], _edges(p))


def build_graph(p: DCellParams, vertex_budget: int | None = DEFAULT_VERTEX_BUDGET) -> Graph:
    """Materialize D_{k,n} as an immutable graph over uids 0..t[k]-1."""
    if vertex_budget is not None and p.vertex_count > vertex_budget:
        raise BudgetExceededError(
            f"graph has {p.vertex_count} vertices; budget is {vertex_budget}"
        )
    return _build_graph_cached(p.k, p.n)


def edge_list_lines(p: DCellParams, g: Graph | None = None) -> list[str]:
    """Deterministic edge-list export: header, then 'u v' with u < v, sorted."""
    g = g or build_graph(p)
    lines = [f"# dcell k={p.k} n={p.n} vertices={p.vertex_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return lines


def parse_edge_list(lines: list[str]) -> Graph:
    """Parse the edge-list format produced by edge_list_lines.

    Accepts arbitrary user graphs: the header is optional and only the
    vertex count is read from it; otherwise the count is 1 + max uid.
    """
    edges = []
    declared = -1
    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line.split():
                if token.startswith("vertices="):
                    declared = int(token.split("=", 1)[1])
            continue
        a, b = line.split()
        edges.append((int(a), int(b)))
    count = max(declared, 1 + max((max(e) for e in edges), default=-1))
    if count <= 0:
        raise RangeError("edge list describes an empty graph")
    return Graph.from_edges(count, edges)


def dot_lines(p: DCellParams, g: Graph | None = None) -> list[str]:
    """DOT export for visualization; no layout guarantees."""
    g = g or build_graph(p)
    lines = [f'graph dcell_k{p.k}_n{p.n} {{']
    lines.extend(f"  {u} -- {v};" for u, v in g.edges())
    lines.append("}")
    return lines

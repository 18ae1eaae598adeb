"""Exact Steiner-path packing numbers at desk scale.

The search is depth-first over complete S-paths: pick which member of S is
interior, then glue two arcs at it.  Packings are enumerated as strictly
key-increasing path sequences (one canonical key per path), which kills
permutation symmetry.  Two prunes keep it tractable:

  * slot supply: a path consumes four edge-endpoints at S (two at the
    interior member, one at each terminal); a vertex outside S can supply at
    most two of its up-to-three edges into S, and an unused edge inside S
    supplies two.  Remaining paths <= remaining supply // 4.
  * per-member free degree: every additional path uses at least one live
    edge at each member of S.

Budgets make every entry point total: exceeding the node or time budget
yields a bounded result flagged inexact.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .errors import RangeError
from .graphcore import Graph

DEFAULT_NODE_LIMIT = 10**7
DEFAULT_TIME_LIMIT = 60.0


@dataclass(frozen=True)
class OracleBudget:
    node_limit: int = DEFAULT_NODE_LIMIT
    time_limit: float = DEFAULT_TIME_LIMIT

    def __post_init__(self):
        if self.node_limit <= 0 or self.time_limit <= 0:
            raise RangeError("budgets must be positive")


@dataclass
class OracleResult:
    value: int
    exact: bool
    witness: list[list[int]] = field(default_factory=list)
    nodes: int = 0
    detail: str = ""


class _Budget:
    __slots__ = ("node_limit", "deadline", "nodes", "hit")

    def __init__(self, budget: OracleBudget):
        self.node_limit = budget.node_limit
        self.deadline = time.monotonic() + budget.time_limit
        self.nodes = 0
        self.hit = False

    def step(self) -> bool:
        """Account one search node; True while within budget."""
        self.nodes += 1
        if self.nodes >= self.node_limit:
            self.hit = True
        elif self.nodes % 4096 == 0 and time.monotonic() > self.deadline:
            self.hit = True
        return not self.hit


class _Residual:
    """Mutable view of the graph minus consumed interiors and edges."""

    def __init__(self, g: Graph, s: tuple[int, int, int]):
        self.g = g
        self.s = s
        self.sset = frozenset(s)
        self.banned: set[int] = set()
        self.dead_edges: set[tuple[int, int]] = set()

    def edge_live(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) not in self.dead_edges

    def usable(self, v: int) -> bool:
        return v not in self.banned

    def apply(self, path: list[int]) -> None:
        for v in path:
            if v not in self.sset:
                self.banned.add(v)
        for a, b in zip(path, path[1:]):
            self.dead_edges.add((min(a, b), max(a, b)))

    def undo(self, path: list[int]) -> None:
        for v in path:
            if v not in self.sset:
                self.banned.discard(v)
        for a, b in zip(path, path[1:]):
            self.dead_edges.discard((min(a, b), max(a, b)))

    def free_s_degree(self, s: int) -> int:
        return sum(
            1
            for v in self.g.adj[s]
            if self.usable(v) and self.edge_live(s, v)
        )

    def slot_supply(self) -> int:
        total = 0
        seen: set[int] = set()
        for a, b in itertools.combinations(self.s, 2):
            if self.g.has_edge(a, b) and self.edge_live(a, b):
                total += 2
        for s in self.s:
            for v in self.g.adj[s]:
                if v in self.sset or not self.usable(v) or v in seen:
                    continue
                seen.add(v)
                live = sum(
                    1
                    for t in self.s
                    if self.g.has_edge(v, t) and self.edge_live(v, t)
                )
                total += min(2, live)
        return total

    def remaining_bound(self) -> int:
        by_supply = self.slot_supply() // 4
        by_degree = min(self.free_s_degree(s) for s in self.s)
        return min(by_supply, by_degree)


def slot_supply_bound(g: Graph, s: tuple[int, int, int]) -> int:
    """Analytic upper bound on the number of internally disjoint S-paths."""
    return _Residual(g, s).remaining_bound()


def _arcs(
    res: _Residual,
    start: int,
    goal: int,
    extra_banned: set[int],
    budget: _Budget,
    min_edges: int,
    max_edges: int,
):
    """Simple (start, goal)-arcs with edge count in [min_edges, max_edges],
    interiors outside S and unconsumed, in lexicographic order."""
    g = res.g
    blocked = extra_banned
    path = [start]
    onpath = {start}
    iters = [iter(g.adj[start])]
    while iters:
        if not budget.step():
            return
        advanced = False
        for v in iters[-1]:
            if v == goal:
                if len(path) >= min_edges and res.edge_live(path[-1], v):
                    yield path + [v]
                continue
            if (
                len(path) >= max_edges  # no room to extend and still reach goal
                or v in onpath
                or v in res.sset
                or v in blocked
                or not res.usable(v)
                or not res.edge_live(path[-1], v)
            ):
                continue
            path.append(v)
            onpath.add(v)
            iters.append(iter(g.adj[v]))
            advanced = True
            break
        if not advanced:
            iters.pop()
            onpath.discard(path.pop())


def _paths_after(res: _Residual, last_key, budget: _Budget):
    """Candidate S-paths with canonical key strictly greater than last_key.

    Key = (total edge count, interior index, arc to the interior from the
    smaller terminal, arc onward to the larger terminal); shortest paths
    come first, which both speeds up finding and keeps packings canonical.
    """
    s = res.s
    cap = 2 + sum(
        1 for v in range(res.g.n) if v not in res.sset and res.usable(v)
    )
    start_total = 2 if last_key is None else last_key[0]
    for total in range(start_total, cap + 1):
        tight_t = last_key is not None and total == last_key[0]
        for im_idx, mid in enumerate(s):
            if tight_t and im_idx < last_key[1]:
                continue
            tight_m = tight_t and im_idx == last_key[1]
            a, b = sorted(set(s) - {mid})
            for arc1 in _arcs(res, a, mid, {b}, budget, 1, total - 1):
                t1 = tuple(arc1)
                if tight_m and t1 < last_key[2]:
                    continue
                tight_1 = tight_m and t1 == last_key[2]
                need = total - (len(arc1) - 1)
                interior1 = set(arc1[1:-1])
                for arc2 in _arcs(res, mid, b, {a} | interior1, budget, need, need):
                    t2 = tuple(arc2)
                    if tight_1 and t2 <= last_key[3]:
                        continue
                    if (min(arc1[-2], mid), max(arc1[-2], mid)) == (
                        min(mid, arc2[1]),
                        max(mid, arc2[1]),
                    ):
                        continue  # the two arcs may not share the edge at mid
                    yield (total, im_idx, t1, t2), arc1 + arc2[1:]
                if budget.hit:
                    return
            if budget.hit:
                return


def greedy_pack(g: Graph, s: tuple[int, int, int], limit: int | None = None) -> list[list[int]]:
    """Deterministic shortest-first packing used to seed the exact search."""
    from .graphcore import bfs_path  # local import to avoid cycle at module load
    res = _Residual(g, s)
    paths: list[list[int]] = []
    while limit is None or len(paths) < limit:
        best: list[int] | None = None
        for mid in s:
            a, b = sorted(set(s) - {mid})
            arc1 = _shortest_arc(res, a, mid, {b})
            if arc1 is None:
                continue
            res.apply(arc1)
            arc2 = _shortest_arc(res, mid, b, {a})
            res.undo(arc1)
            if arc2 is None:
                continue
            cand = arc1 + arc2[1:]
            if best is None or len(cand) < len(best):
                best = cand
        if best is None:
            break
        res.apply(best)
        paths.append(best)
    return paths


def _shortest_arc(res: _Residual, start: int, goal: int, blocked: set[int]):
    from collections import deque

    parent = {start: -1}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in res.g.adj[u]:
            if v in parent or v in blocked or not res.edge_live(u, v):
                continue
            if v == goal:
                arc = [v, u]
                while arc[-1] != start:
                    arc.append(parent[arc[-1]])
                arc.reverse()
                return arc
            if v in res.sset or not res.usable(v):
                continue
            parent[v] = u
            queue.append(v)
    return None


def exact_pi_S(
    g: Graph,
    s: tuple[int, int, int],
    budget: OracleBudget = OracleBudget(),
) -> OracleResult:
    """Maximum number of internally disjoint S-paths, exact within budget."""
    s = tuple(s)
    if len(set(s)) != 3 or any(not 0 <= v < g.n for v in s):
        raise RangeError(f"need three distinct in-range vertices, got {s}")
    analytic = slot_supply_bound(g, s)
    seed = greedy_pack(g, s)
    best = list(seed)
    if len(best) >= analytic:
        return OracleResult(value=len(best), exact=True, witness=best, detail="greedy met bound")

    tracker = _Budget(budget)
    res = _Residual(g, s)
    best_box = {"paths": list(best)}

    def dfs(count: int, last_key, chosen: list[list[int]]) -> None:
        if count > len(best_box["paths"]):
            best_box["paths"] = [list(p) for p in chosen]
        if tracker.hit:
            return
        if count + res.remaining_bound() <= len(best_box["paths"]):
            return
        for key, path in _paths_after(res, last_key, tracker):
            res.apply(path)
            chosen.append(path)
            dfs(count + 1, key, chosen)
            chosen.pop()
            res.undo(path)
            if tracker.hit:
                return
            if count + res.remaining_bound() <= len(best_box["paths"]):
                return

    dfs(0, None, [])
    found = best_box["paths"]
    exact = not tracker.hit
    return OracleResult(
        value=len(found),
        exact=exact,
        witness=found,
        nodes=tracker.nodes,
        detail="" if exact else "budget exhausted; value is a lower bound",
    )


def find_packing_with_spares(
    g: Graph,
    s: tuple[int, int, int],
    size: int,
    min_spares: int,
    budget: OracleBudget = OracleBudget(),
) -> OracleResult:
    """Search for a packing of exactly `size` S-paths leaving at least
    `min_spares` neighbors of S uncovered.  Independent cross-check for the
    spare-neighbor exchange; value is 1 when found, 0 when refuted."""
    s = tuple(s)
    tracker = _Budget(budget)
    res = _Residual(g, s)
    neighborhood = sorted(
        set().union(*(g.adj[v] for v in s)) - set(s)
    )

    def spares_left() -> int:
        return sum(1 for v in neighborhood if res.usable(v))

    found: dict[str, list[list[int]]] = {}

    def dfs(count: int, last_key, chosen: list[list[int]]) -> bool:
        if count == size:
            if spares_left() >= min_spares:
                found["paths"] = [list(p) for p in chosen]
                return True
            return False
        if tracker.hit:
            return False
        if count + res.remaining_bound() < size or spares_left() < min_spares:
            return False
        for key, path in _paths_after(res, last_key, tracker):
            res.apply(path)
            chosen.append(path)
            if dfs(count + 1, key, chosen):
                return True
            chosen.pop()
            res.undo(path)
            if tracker.hit:
                return False
        return False

    ok = dfs(0, None, [])
    return OracleResult(
        value=1 if ok else 0,
        exact=not tracker.hit or ok,
        witness=found.get("paths", []),
        nodes=tracker.nodes,
        detail="" if (not tracker.hit or ok) else "budget exhausted before refutation",
    )


def exact_pi3(
    g: Graph,
    triples="all",
    budget: OracleBudget = OracleBudget(),
) -> OracleResult:
    """Minimum of exact_pi_S over the requested triples.

    The minimum is certified cheaply: a triple whose greedy packing already
    reaches the current minimum cannot lower it, so only potential new
    minimizers get the full exact search.  The result is exact when the
    minimizing triple was solved exactly and every other triple was proven
    at or above the minimum.
    """
    if triples == "all":
        todo = list(itertools.combinations(range(g.n), 3))
        full = True
    else:
        todo = [tuple(t) for t in triples]
        full = False
    if not todo:
        raise RangeError("no triples requested")
    best: OracleResult | None = None
    best_triple = None
    all_covered = True
    total_nodes = 0
    for trip in todo:
        if best is not None:
            if len(greedy_pack(g, trip, limit=best.value)) >= best.value:
                continue  # certified >= current minimum, cannot lower it
        sub = exact_pi_S(g, trip, budget)
        total_nodes += sub.nodes
        if not sub.exact:
            all_covered = False
        if best is None or sub.value < best.value:
            best = sub
            best_triple = trip
    assert best is not None
    exact = full and all_covered and best.exact
    return OracleResult(
        value=best.value,
        exact=exact,
        witness=best.witness,
        nodes=total_nodes,
        detail=f"minimizing triple {best_triple}",
    )


def max_common_neighbors(g: Graph) -> tuple[int, tuple[int, int, int]]:
    """Exhaustive maximum of |N(a) n N(b) n N(c)| with the first witness."""
    best, witness = -1, None
    for trip in itertools.combinations(range(g.n), 3):
        size = len(
            set(g.neighbors(trip[0]))
            & set(g.neighbors(trip[1]))
            & set(g.neighbors(trip[2]))
        )
        if size > best:
            best, witness = size, trip
    if witness is None:
        raise RangeError("graph has fewer than three vertices")
    return best, witness


def upper_bound_pi3(g: Graph, common_max: int | None = None) -> int:
    """Lemma-style bound floor((3d - r) / 4) for a d-regular graph."""
    d = g.is_regular()
    if d is None:
        raise RangeError("upper bound applies to regular graphs only")
    r = max_common_neighbors(g)[0] if common_max is None else common_max
    return (3 * d - r) // 4

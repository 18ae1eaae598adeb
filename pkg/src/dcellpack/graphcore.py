"""Generic graph machinery: Menger-style disjoint paths, fans, and linkage.

Everything here is deterministic.  Flows use unit vertex capacities realized
by in/out node splitting and BFS (Edmonds-Karp order) augmentation with
lowest-id tie-breaking, so identical inputs always give identical paths.

Operations accept an optional `within` vertex set to run on an induced
subgraph by masking, without copying adjacency.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Collection, Iterable

from .errors import InfeasibleError, RangeError


class Graph:
    """Immutable undirected simple graph with sorted neighbor lists."""

    __slots__ = ("n", "adj", "_edgeset")

    def __init__(self, n: int, adj: tuple[tuple[int, ...], ...]):
        self.n = n
        self.adj = adj
        self._edgeset = frozenset(
            (u, v) for u in range(n) for v in adj[u] if u < v
        )

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        seen: set[tuple[int, int]] = set()
        neigh: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            if a == b:
                raise RangeError(f"loop edge {a}-{b} not allowed")
            if not (0 <= a < n and 0 <= b < n):
                raise RangeError(f"edge {a}-{b} out of vertex range [0, {n})")
            key = (a, b) if a < b else (b, a)
            if key in seen:
                continue
            seen.add(key)
            neigh[a].add(b)
            neigh[b].add(a)
        return cls(n, tuple(tuple(sorted(s)) for s in neigh))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((a, b) for a in range(n) for b in range(a + 1, n)))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edgeset

    def edge_count(self) -> int:
        return len(self._edgeset)

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self._edgeset)

    def is_regular(self) -> int | None:
        degs = {len(a) for a in self.adj}
        return degs.pop() if len(degs) == 1 else None


def is_path_in(g: Graph, vertices: list[int]) -> bool:
    """True when `vertices` is a simple path of g (single vertices count)."""
    if not vertices or len(set(vertices)) != len(vertices):
        return False
    return all(g.has_edge(a, b) for a, b in zip(vertices, vertices[1:]))


def bfs_path(
    g: Graph,
    start: int,
    goals: Collection[int],
    forbidden: Collection[int] = (),
    within: Collection[int] | None = None,
) -> list[int]:
    """Shortest path from start to the nearest goal, lowest-id tie-break.

    `forbidden` vertices are unusable entirely; `within`, when given,
    restricts the walk to an induced subgraph.  Raises InfeasibleError when
    no goal is reachable.
    """
    goalset = set(goals)
    if start in goalset:
        return [start]
    banned = set(forbidden)
    if start in banned:
        raise InfeasibleError(f"start vertex {start} is forbidden")
    ok = (lambda v: v in within) if within is not None else (lambda v: True)
    parent = {start: -1}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in g.adj[u]:
            if v in parent or v in banned or not ok(v):
                continue
            parent[v] = u
            if v in goalset:
                path = [v]
                while path[-1] != start:
                    path.append(parent[path[-1]])
                path.reverse()
                return path
            queue.append(v)
    raise InfeasibleError(f"no path from {start} to {sorted(goalset)} after masking")


def connect(
    g: Graph,
    u: int,
    v: int,
    forbidden: Collection[int] = (),
    within: Collection[int] | None = None,
) -> list[int]:
    """Shortest (u, v)-path avoiding `forbidden`, BFS with lowest-id ties."""
    if u in forbidden or v in forbidden:
        raise InfeasibleError("endpoints may not be forbidden")
    return bfs_path(g, u, [v], forbidden, within)


class _SplitFlow:
    """Unit-vertex-capacity flow network over a masked induced subgraph.

    Node 2v is v_in, 2v+1 is v_out; the in->out arc carries the vertex
    capacity (1, or unbounded for flow endpoints).  Arcs are kept in
    insertion order with neighbors sorted, so BFS augmentation is
    deterministic.
    """

    INF = 1 << 30

    def __init__(self, g: Graph, allowed: Collection[int] | None, uncapped: Collection[int]):
        self.g = g
        self.allowed = None if allowed is None else set(allowed)
        nn = 2 * g.n
        self.head: list[list[int]] = [[] for _ in range(nn + 4)]  # +2 spare super nodes
        self.to: list[int] = []
        self.cap: list[int] = []
        verts = range(g.n) if self.allowed is None else sorted(self.allowed)
        for v in verts:
            self._arc(2 * v, 2 * v + 1, self.INF if v in uncapped else 1)
        for v in verts:
            for w in g.adj[v]:
                if self.allowed is None or w in self.allowed:
                    self._arc(2 * v + 1, 2 * w, 1)

    def _arc(self, a: int, b: int, c: int) -> None:
        self.head[a].append(len(self.to))
        self.to.append(b)
        self.cap.append(c)
        self.head[b].append(len(self.to))
        self.to.append(a)
        self.cap.append(0)

    def super_node(self, idx: int) -> int:
        return 2 * self.g.n + idx

    def add_arc(self, a: int, b: int, c: int) -> None:
        self._arc(a, b, c)

    def max_flow(self, s: int, t: int, limit: int) -> int:
        total = 0
        while total < limit:
            parent_arc = {s: -1}
            queue = deque([s])
            found = False
            while queue and not found:
                u = queue.popleft()
                for aidx in self.head[u]:
                    if self.cap[aidx] <= 0:
                        continue
                    v = self.to[aidx]
                    if v in parent_arc:
                        continue
                    parent_arc[v] = aidx
                    if v == t:
                        found = True
                        break
                    queue.append(v)
            if not found:
                break
            v = t
            while v != s:
                aidx = parent_arc[v]
                self.cap[aidx] -= 1
                self.cap[aidx ^ 1] += 1
                v = self.to[aidx ^ 1]
            total += 1
        return total

    def flow_successors(self) -> dict[int, list[int]]:
        """Map v -> vertices that receive one unit of flow from v, sorted."""
        limit = 2 * self.g.n
        succ: dict[int, list[int]] = {}
        for aidx in range(0, len(self.to), 2):
            if self.cap[aidx ^ 1] <= 0:  # no flow on this arc
                continue
            a_from = self.to[aidx ^ 1]
            a_to = self.to[aidx]
            if a_from >= limit or a_to >= limit:
                continue  # super-source/sink arcs are not path edges
            if a_from % 2 == 1 and a_to % 2 == 0 and a_from // 2 != a_to // 2:
                succ.setdefault(a_from // 2, []).append(a_to // 2)
        for v in succ:
            succ[v].sort()
        return succ


def _trace_paths(
    succ: dict[int, list[int]], source: int, sinks: Collection[int], count: int
) -> list[list[int]]:
    """Decompose unit flow into `count` paths from source to any sink."""
    sinkset = set(sinks)
    paths = []
    for _ in range(count):
        path = [source]
        while path[-1] not in sinkset:
            options = succ.get(path[-1])
            if not options:
                raise InfeasibleError("flow decomposition ran out of arcs")
            path.append(options.pop(0))
        paths.append(path)
    return paths


def disjoint_paths(
    g: Graph,
    u: int,
    v: int,
    want: int,
    within: Collection[int] | None = None,
) -> list[list[int]]:
    """Up to `want` internally disjoint (u, v)-paths via unit-vertex max flow.

    Returns min(want, local connectivity) paths sharing only their endpoints,
    in deterministic order.
    """
    if u == v:
        raise RangeError("endpoints must be distinct")
    if want <= 0:
        return []
    net = _SplitFlow(g, within, uncapped=(u, v))
    value = net.max_flow(2 * u + 1, 2 * v, want)
    paths = _trace_paths(net.flow_successors(), u, [v], value)
    return sorted(paths)


def local_connectivity(
    g: Graph, u: int, v: int, within: Collection[int] | None = None
) -> int:
    """kappa_g(u, v): neighbors-count for adjacent pairs counts the edge too."""
    if u == v:
        raise RangeError("endpoints must be distinct")
    net = _SplitFlow(g, within, uncapped=(u, v))
    return net.max_flow(2 * u + 1, 2 * v, _SplitFlow.INF)


def connectivity(g: Graph, samples: Iterable[tuple[int, int]] | str = "all") -> int:
    """Min local connectivity over sampled pairs (exact when samples='all').

    For 'all', uses the standard reduction: kappa = min over one vertex
    against all non-neighbors plus pairs among its neighborhood.
    """
    if samples == "all":
        if g.n < 2:
            raise RangeError("connectivity needs at least two vertices")
        pivot = 0
        pairs = [(pivot, v) for v in range(g.n) if v != pivot and not g.has_edge(pivot, v)]
        nb = g.neighbors(pivot)
        pairs += [
            (a, b)
            for i, a in enumerate(nb)
            for b in nb[i + 1 :]
            if not g.has_edge(a, b)
        ]
        if not pairs:  # complete graph
            return g.n - 1
    else:
        pairs = list(samples)
    return min(local_connectivity(g, a, b) for a, b in pairs)


def fan(
    g: Graph,
    x: int,
    targets: Collection[int],
    want: int | None = None,
    within: Collection[int] | None = None,
    forbidden: Collection[int] = (),
) -> dict[int, list[int]]:
    """A fan from x to `targets`: internally disjoint (x, Y)-paths.

    Returns {target: path from x to target}; paths share only x, internal
    vertices avoid the target set entirely, and `forbidden` vertices are
    masked out.  Raises InfeasibleError when the requested width is not
    achievable (a caller-side precondition bug).
    """
    targets = sorted(set(targets))
    want = len(targets) if want is None else want
    if x in targets:
        raise RangeError("fan root cannot be a target")
    if want > len(targets):
        raise RangeError(f"want {want} paths but only {len(targets)} targets")
    if want == 0:
        return {}
    allowed = None
    if within is not None or forbidden:
        base = set(within) if within is not None else set(range(g.n))
        allowed = base - set(forbidden)
        if x not in allowed or any(t not in allowed for t in targets):
            raise InfeasibleError("fan endpoints excluded by masking")
    net = _SplitFlow(g, allowed, uncapped=(x,))
    sink = net.super_node(0)
    for t in targets:
        # fan paths terminate at targets: only the arc to the super sink
        # leaves t_out, so no path may route through a target
        net.head[2 * t + 1] = [a for a in net.head[2 * t + 1] if net.to[a] == 2 * t]
        net.add_arc(2 * t + 1, sink, 1)
    value = net.max_flow(2 * x + 1, sink, want)
    if value < want:
        raise InfeasibleError(f"fan infeasible: got {value} of {want} paths from {x}")
    succ = net.flow_successors()
    paths = _trace_paths(succ, x, targets, value)
    out: dict[int, list[int]] = {}
    for path in paths:
        out[path[-1]] = path
    return out


def link_pair_exact(
    g: Graph,
    pair1: tuple[int, int],
    pair2: tuple[int, int],
    within: Collection[int] | None = None,
) -> tuple[list[int], list[int]]:
    """Two vertex-disjoint paths with a FIXED pairing (a1-b1 and a2-b2).

    Unlike link_two, the endpoint matching is prescribed.  Solved greedily:
    route one pair shortest, then the other through the remainder, trying
    both orders.  Raises InfeasibleError when neither order closes.
    """
    for first in (0, 1):
        one, two = (pair1, pair2) if first == 0 else (pair2, pair1)
        try:
            p1 = connect(g, one[0], one[1], within=within)
            p2 = connect(g, two[0], two[1], forbidden=set(p1), within=within)
            return (p1, p2) if first == 0 else (p2, p1)
        except InfeasibleError:
            continue
    raise InfeasibleError(f"no disjoint paths pairing {pair1} with {pair2}")


def link_two(
    g: Graph,
    apair: tuple[int, int],
    bpair: tuple[int, int],
    within: Collection[int] | None = None,
) -> tuple[list[int], list[int]]:
    """Two fully vertex-disjoint paths joining {a1,a2} to {b1,b2}.

    The realized pairing is whatever the flow decomposition yields; the
    returned paths start at a1 and a2 respectively, each ending at a
    distinct b vertex, so callers can branch on path[-1].
    """
    a1, a2 = apair
    b1, b2 = bpair
    if len({a1, a2, b1, b2}) != 4:
        raise RangeError("link_two needs four distinct vertices")
    net = _SplitFlow(g, within if within is None else set(within) | {a1, a2, b1, b2}, uncapped=())
    s, t = net.super_node(0), net.super_node(1)
    net.add_arc(s, 2 * a1, 1)
    net.add_arc(s, 2 * a2, 1)
    net.add_arc(2 * b1 + 1, t, 1)
    net.add_arc(2 * b2 + 1, t, 1)
    if net.max_flow(s, t, 2) < 2:
        raise InfeasibleError(f"no two disjoint paths between {apair} and {bpair}")
    succ = net.flow_successors()
    first = _trace_paths(succ, a1, [b1, b2], 1)[0]
    second = _trace_paths(succ, a2, [b1, b2], 1)[0]
    if first[-1] == second[-1]:
        raise InfeasibleError("flow decomposition produced a shared endpoint")
    return first, second

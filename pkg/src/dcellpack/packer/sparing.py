"""Exchange procedure that frees spare neighbors of a packed triple.

Given a maximum packing of {x, y, z} in a regular graph whose degree
arithmetic leaves headroom (3d - 4|T| >= r + ell, r = common neighborhood),
there is an equal-size packing leaving one (ell = 1) or two (ell = 3)
vertices of N(x) u N(y) u N(z) untouched.  The procedure realizes the
extremal argument directly: repeatedly rewrite one or two paths with a move
from a fixed catalog so that the potential

    (-( number of triangle edges of S used ), |A intersect V(T)|)

strictly decreases lexicographically, until enough spares appear.  Every
candidate rewrite is validated with the independent packing checker before
being applied; the iteration count is bounded by the potential, so failure
to find an applicable move is a theory violation and raises.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import LemmaViolationError, RangeError
from ..graphcore import Graph
from ..verify import check_packing
from .base import cat, rev


@dataclass(frozen=True)
class SparenessRequest:
    ell: int
    triple: tuple[int, int, int]
    common_size: int

    def __post_init__(self):
        if self.ell not in (1, 3):
            raise RangeError(f"ell must be 1 or 3, got {self.ell}")


def _neighborhood(g: Graph, s) -> set[int]:
    out: set[int] = set()
    for v in s:
        out.update(g.adj[v])
    return out - set(s)


def _triangle_edges(g: Graph, s) -> set[tuple[int, int]]:
    return {
        (min(a, b), max(a, b))
        for a, b in itertools.combinations(s, 2)
        if g.has_edge(a, b)
    }


def _edges_of(paths) -> set[tuple[int, int]]:
    out = set()
    for path in paths:
        out.update((min(a, b), max(a, b)) for a, b in zip(path, path[1:]))
    return out


def _potential(g: Graph, s, paths, hood) -> tuple[int, int]:
    tri_used = len(_triangle_edges(g, s) & _edges_of(paths))
    covered = len(hood & set().union(*map(set, paths)))
    return (-tri_used, covered)


def _oriented(path, first):
    """The path as a list starting at terminal `first`."""
    if path[0] == first:
        return list(path)
    if path[-1] == first:
        return rev(path)
    raise ValueError(f"{first} is not a terminal of {path}")


def spare_neighbors(
    g: Graph,
    s,
    seed_paths: list[list[int]],
    ell: int,
) -> tuple[list[list[int]], list[int]]:
    """Equal-size repacking of `s` leaving >= 1 (ell=1) or >= 2 (ell=3)
    neighbors of S uncovered; returns (paths, spare vertices)."""
    s = tuple(s)
    if ell not in (1, 3):
        raise RangeError(f"ell must be 1 or 3, got {ell}")
    need = 1 if ell == 1 else 2
    deg = g.is_regular()
    hood = _neighborhood(g, s)
    common = set(g.adj[s[0]]) & set(g.adj[s[1]]) & set(g.adj[s[2]])
    if deg is not None and 3 * deg - 4 * len(seed_paths) < len(common) + ell:
        raise RangeError(
            f"hypothesis fails: 3*{deg} - 4*{len(seed_paths)} < {len(common)} + {ell}"
        )
    paths = [list(p) for p in seed_paths]
    bound = len(_triangle_edges(g, s)) + len(hood) + 2
    for _ in range(bound):
        spares = sorted(hood - set().union(*map(set, paths)) if paths else hood)
        if len(spares) >= need:
            return paths, spares[:need]
        replacement = _find_move(g, s, paths, hood)
        if replacement is None:
            raise LemmaViolationError(
                f"no applicable exchange move for s={s}; packing {paths}"
            )
        paths = replacement
    raise LemmaViolationError(f"exchange did not converge for s={s}")


def _find_move(g, s, paths, hood):
    """First catalog rewrite that keeps a valid packing and lowers the
    potential; None when the catalog is exhausted (a theory violation)."""
    phi = _potential(g, s, paths, hood)
    for candidate in _candidate_rewrites(g, s, paths):
        if _potential(g, s, candidate, hood) >= phi:
            continue
        if check_packing(g, s, candidate).ok:
            return candidate
    return None


def _candidate_rewrites(g, s, paths):
    sset = set(s)
    used_edges = _edges_of(paths)
    tri_missing = sorted(_triangle_edges(g, s) - used_edges)

    def meta(path):
        ends = (path[0], path[-1])
        mid = next(v for v in path[1:-1] if v in sset)
        return ends, mid

    # triangle absorption: route an unused S-S edge into an existing path
    for a, b in tri_missing:
        for idx, path in enumerate(paths):
            if len(path) < 4:
                continue
            ends, mid = meta(path)
            third = next(v for v in s if v not in (a, b))
            pos = {v: i for i, v in enumerate(path)}
            rest = [q for j, q in enumerate(paths) if j != idx]
            if mid == third:
                # edge ab + the arc from b (or a) to the interior member
                for head, tail in ((a, b), (b, a)):
                    fragment = (
                        path[: pos[third] + 1]
                        if pos[tail] < pos[third]
                        else rev(path[pos[third] :])
                    )
                    if fragment[0] == tail:
                        yield rest + [cat(head, fragment)]
            elif mid in (a, b):
                other = b if mid == a else a
                far = next(t for t in ends if t != other)
                fragment = (
                    path[pos[mid] :] if pos[far] > pos[mid] else rev(path[: pos[mid] + 1])
                )
                yield rest + [cat(other, fragment)]

    # unused S-incident edges whose far end sits on a path
    loc = {}
    for idx, path in enumerate(paths):
        for v in path:
            if v not in sset:
                loc[v] = idx
    unused = []
    for a in s:
        for w in g.adj[a]:
            if w in sset or (min(a, w), max(a, w)) in used_edges:
                continue
            if w in loc:
                unused.append((a, w))
    unused.sort()

    for alpha, w in unused:
        idx = loc[w]
        path = paths[idx]
        ends, mid = meta(path)
        pos = {v: i for i, v in enumerate(path)}
        rest = [q for j, q in enumerate(paths) if j != idx]

        if alpha == mid:
            # reroute the interior member through the unused edge
            if pos[w] < pos[mid]:
                yield rest + [cat(path[: pos[w] + 1], mid, path[pos[mid] :])]
            else:
                yield rest + [cat(path[: pos[mid] + 1], path[pos[w] :])]
            continue

        o = _oriented(path, alpha)
        opos = {v: i for i, v in enumerate(o)}
        far = o[-1]
        if opos[w] < opos[mid]:
            # shortcut from the terminal into its own arc
            yield rest + [cat(alpha, o[opos[w] :])]
        else:
            # terminal becomes interior: fold its arc back and jump to w
            yield rest + [cat(rev(o[: opos[mid] + 1]), w, o[opos[w] :])]

        # w adjacent to two members: single-path replacement through both
        for gamma in s:
            if gamma in (alpha, mid) or not g.has_edge(gamma, w):
                continue
            if (min(gamma, w), max(gamma, w)) in used_edges:
                continue
            yield rest + [cat(gamma, w, o[: opos[mid] + 1])]

        # moves that also rewire a second path
        if opos[w] == opos[mid] + 1:
            # w is the interior member's far-side path neighbor
            for jdx, q in enumerate(paths):
                if jdx == idx:
                    continue
                qends, qmid = meta(q)
                rest2 = [r for j, r in enumerate(paths) if j not in (idx, jdx)]
                if qmid == far:
                    # pair rewrite gluing the second path's arcs at its interior
                    oq = _oriented(q, alpha)
                    qpos = {v: i for i, v in enumerate(oq)}
                    new1 = cat(rev(o[: opos[mid] + 1]), oq[: qpos[far] + 1][1:])
                    new2 = cat(alpha, w, rev(oq[qpos[far] :]))
                    yield rest2 + [new1, new2]
            # second unused edge from the far terminal into this path's near arc
            for nu in o[1 : opos[mid]]:
                if g.has_edge(far, nu) and (min(far, nu), max(far, nu)) not in used_edges:
                    yield rest + [cat(far, rev(o[: opos[nu] + 1]), w, mid)]
            # second unused edge from the far terminal into another path's span
            for jdx, q in enumerate(paths):
                if jdx == idx:
                    continue
                qends, qmid = meta(q)
                rest2 = [r for j, r in enumerate(paths) if j not in (idx, jdx)]
                span = _span_between(q, alpha, mid)
                for nu in span:
                    if nu in sset or not g.has_edge(far, nu):
                        continue
                    if (min(far, nu), max(far, nu)) in used_edges:
                        continue
                    frag = _subpath(q, nu, mid)
                    if frag is None:
                        continue
                    new1 = cat(far, frag, w, alpha)
                    if qmid == mid:
                        new2 = cat(o[: opos[mid] + 1], _subpath(q, mid, far))
                    elif qmid == alpha:
                        new2 = cat(rev(o[: opos[mid] + 1]), _subpath(q, alpha, far))
                    else:
                        continue
                    yield rest2 + [new1, new2]


def _subpath(path, a, b):
    if a not in path or b not in path:
        return None
    i, j = path.index(a), path.index(b)
    return path[i : j + 1] if i <= j else rev(path[j : i + 1])


def _span_between(path, a, b):
    """Vertices strictly between a and b along the path (empty if absent)."""
    if a not in path or b not in path:
        return []
    i, j = sorted((path.index(a), path.index(b)))
    return path[i + 1 : j]

"""Independent certification of packings and structural audits.

The packing validator re-implements the disjointness predicate from the
definitions with plain set arithmetic; it deliberately shares no code with
the path-assembly machinery so that a bug there cannot hide here.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import topology as topo
from .errors import RangeError
from .graphcore import Graph, local_connectivity

DEFAULT_SEED = 0xDCE11


@dataclass
class Report:
    """Structured pass/fail output: one (name, ok, detail) row per check."""

    subject: str
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def lines(self) -> list[str]:
        out = []
        for name, ok, detail in self.checks:
            status = "PASS" if ok else "FAIL"
            out.append(f"CHECK {name} {status} {detail}".rstrip())
        out.append(f"REPORT {self.subject} {'PASS' if self.ok else 'FAIL'}")
        return out

    def render(self) -> str:
        return "\n".join(self.lines())


def _path_edges(path: list[int]) -> set[tuple[int, int]]:
    return {(min(a, b), max(a, b)) for a, b in zip(path, path[1:])}


def check_packing(g: Graph, s: tuple[int, int, int], paths: list[list[int]]) -> Report:
    """Validate a family of paths as internally disjoint S-paths.

    Per path: simple, edges exist in g, contains all of S, exactly two
    S-members are endpoints and one is interior.  Pairwise: vertex sets meet
    exactly in S and edge sets are disjoint.
    """
    rep = Report(subject=f"packing s={s} count={len(paths)}")
    sset = set(s)
    if len(sset) != 3 or any(not 0 <= v < g.n for v in sset):
        rep.add("triple-valid", False, f"bad triple {s}")
        return rep
    rep.add("triple-valid", True)
    shape_ok = True
    for i, path in enumerate(paths):
        label = f"path[{i}]"
        if len(path) < 3 or len(set(path)) != len(path):
            rep.add(f"{label}-simple", False, f"{path}")
            shape_ok = False
            continue
        if any(not 0 <= v < g.n for v in path):
            rep.add(f"{label}-range", False, f"{path}")
            shape_ok = False
            continue
        missing_edges = [
            (a, b) for a, b in zip(path, path[1:]) if not g.has_edge(a, b)
        ]
        if missing_edges:
            rep.add(f"{label}-edges", False, f"absent edges {missing_edges}")
            shape_ok = False
            continue
        if not sset <= set(path):
            rep.add(f"{label}-covers-s", False, f"misses {sorted(sset - set(path))}")
            shape_ok = False
            continue
        ends = {path[0], path[-1]}
        interior_s = sset & set(path[1:-1])
        if not (ends <= sset and len(ends) == 2 and len(interior_s) == 1):
            rep.add(
                f"{label}-s-roles",
                False,
                f"terminals {sorted(ends)} interior-s {sorted(interior_s)}",
            )
            shape_ok = False
            continue
        rep.add(f"{label}-wellformed", True)
    if shape_ok:
        for i, j in itertools.combinations(range(len(paths)), 2):
            shared_v = set(paths[i]) & set(paths[j])
            if shared_v != sset:
                rep.add(
                    f"pair[{i},{j}]-vertices",
                    False,
                    f"shared {sorted(shared_v - sset)} beyond S"
                    if shared_v > sset
                    else f"shared {sorted(shared_v)} != S",
                )
                continue
            shared_e = _path_edges(paths[i]) & _path_edges(paths[j])
            if shared_e:
                rep.add(f"pair[{i},{j}]-edges", False, f"shared edges {sorted(shared_e)}")
            else:
                rep.add(f"pair[{i},{j}]-disjoint", True)
    return rep


def audit_lemma1(
    p: topo.DCellParams,
    seed: int = DEFAULT_SEED,
    sample_size: int = 200,
) -> Report:
    """Audit the four structural properties of D_{k,n} on a concrete build.

    (1) regularity n+k-1; (2) exactly one top-level cross neighbor per
    vertex; (3) unique edge between top-level copies and distinct-copy
    landing of same-copy cross neighbors; (4) common-neighborhood maximum
    n-3 attained by clique triples (exhaustively for small graphs), with
    the witnesses-only-cliques check applying for n >= 5.
    """
    g = topo.build_graph(p)
    rep = Report(subject=f"lemma1 k={p.k} n={p.n}")
    rng = random.Random(seed)
    deg = p.degree
    bad = [v for v in range(g.n) if g.degree(v) != deg]
    rep.add("regular", not bad, f"degree {deg}" if not bad else f"bad vertices {bad[:5]}")

    if p.k == 0:
        rep.add("clique", g.edge_count() == p.n * (p.n - 1) // 2)
        return rep

    sub = p.t[p.k - 1]
    ncopies = sub + 1

    # (2) one cross neighbor per vertex, matching the closed-form rule
    bad2 = []
    for v in range(g.n):
        outside = [w for w in g.neighbors(v) if w // sub != v // sub]
        if len(outside) != 1 or outside[0] != topo.cross_neighbor_uid(v, p.k, p):
            bad2.append(v)
    rep.add("one-cross-neighbor", not bad2, f"bad vertices {bad2[:5]}")

    # (3) unique edge between each pair of copies
    pair_count: dict[tuple[int, int], int] = {}
    for a, b in g.edges():
        ca, cb = a // sub, b // sub
        if ca != cb:
            pair_count[(min(ca, cb), max(ca, cb))] = pair_count.get((min(ca, cb), max(ca, cb)), 0) + 1
    expected_pairs = ncopies * (ncopies - 1) // 2
    uniq = len(pair_count) == expected_pairs and all(c == 1 for c in pair_count.values())
    rep.add("unique-copy-edge", uniq, f"{len(pair_count)} joined pairs, expected {expected_pairs}")

    # (3) same-copy vertices cross into distinct copies; exhaustive when small
    if g.n <= 2000:
        copies = range(ncopies)
        exhaustive = True
    else:
        copies = [rng.randrange(ncopies) for _ in range(8)]
        exhaustive = False
    bad3 = []
    for c in copies:
        landed = [topo.cross_neighbor_uid(c * sub + i, p.k, p) // sub for i in range(sub)]
        if len(set(landed)) != sub or c in landed:
            bad3.append(c)
    rep.add(
        "cross-lands-distinct",
        not bad3,
        ("exhaustive" if exhaustive else "sampled") + (f", bad copies {bad3[:5]}" if bad3 else ""),
    )

    # (4) only meaningful for n >= 4
    if p.n < 4:
        rep.add("common-neighborhood", True, "skipped: needs n >= 4")
        return rep
    if g.n <= 100:
        best, witnesses = _max_common_neighbors_exhaustive(g)
        clique_wit = [w for w in witnesses if _in_one_clique(w, p.n)]
        rep.add("common-max", best == p.n - 3, f"max {best}, expected {p.n - 3}")
        rep.add("common-clique-witness", bool(clique_wit), f"{len(clique_wit)} clique witnesses")
        if p.n >= 5:
            off = [w for w in witnesses if not _in_one_clique(w, p.n)]
            rep.add("common-clique-only", not off, f"off-clique witnesses {off[:3]}")
        else:
            # n = 4 also admits off-clique witnesses (two clique vertices plus
            # the cross neighbor of their shared clique-mate), so the
            # exclusivity check carries no content there
            rep.add("common-clique-only", True, "skipped: vacuous for n = 4")
    else:
        # clique triples always reach n-3; sampled triples must stay below it
        base = rng.randrange(g.n // p.n) * p.n
        trip = (base, base + 1, base + 2)
        got = len(_common_neighbors(g, trip))
        rep.add("common-clique-witness", got == p.n - 3, f"clique triple {trip} -> {got}")
        worst = 0
        for _ in range(sample_size):
            trip = tuple(rng.sample(range(g.n), 3))
            if _in_one_clique(trip, p.n):
                continue
            worst = max(worst, len(_common_neighbors(g, trip)))
        rep.add("common-max", worst <= p.n - 3, f"sampled off-clique max {worst}")
    return rep


def _common_neighbors(g: Graph, trip) -> set[int]:
    a, b, c = trip
    return set(g.neighbors(a)) & set(g.neighbors(b)) & set(g.neighbors(c))


def _in_one_clique(trip, n: int) -> bool:
    return trip[0] // n == trip[1] // n == trip[2] // n


def _max_common_neighbors_exhaustive(g: Graph) -> tuple[int, list[tuple[int, int, int]]]:
    best, witnesses = -1, []
    for trip in itertools.combinations(range(g.n), 3):
        size = len(_common_neighbors(g, trip))
        if size > best:
            best, witnesses = size, [trip]
        elif size == best:
            witnesses.append(trip)
    return best, witnesses


def audit_kappa(
    p: topo.DCellParams,
    copy_subsets: list[list[int]] | None = None,
    pair_samples: int = 50,
    seed: int = DEFAULT_SEED,
) -> Report:
    """Connectivity audits: kappa(H) >= 2 on >=3-copy unions, and local
    connectivity n+k-1 on sampled full-graph pairs."""
    if p.k < 1:
        raise RangeError("kappa audit needs k >= 1 (copies exist)")
    g = topo.build_graph(p)
    rep = Report(subject=f"kappa k={p.k} n={p.n}")
    rng = random.Random(seed)
    sub = p.t[p.k - 1]
    ncopies = sub + 1

    subsets = copy_subsets
    if subsets is None:
        subsets = [list(range(3)), list(range(min(4, ncopies))), [0, ncopies // 2, ncopies - 1]]
    for subset in subsets:
        if len(set(subset)) < 3:
            rep.add(f"H{subset}", False, "refused: union must span at least 3 copies")
            continue
        within = set()
        for c in subset:
            within.update(range(c * sub, (c + 1) * sub))
        verts = sorted(within)
        pairs = (
            list(itertools.combinations(verts, 2))
            if len(verts) <= 14
            else [tuple(rng.sample(verts, 2)) for _ in range(pair_samples)]
        )
        worst = min(local_connectivity(g, a, b, within=within) for a, b in pairs)
        rep.add(f"H{subset}-kappa>=2", worst >= 2, f"min sampled local connectivity {worst}")

    pairs = [tuple(rng.sample(range(g.n), 2)) for _ in range(pair_samples)]
    values = {local_connectivity(g, a, b) for a, b in pairs}
    rep.add(
        "full-local-connectivity",
        values == {p.degree},
        f"sampled values {sorted(values)}, expected {{{p.degree}}}",
    )
    return rep

import itertools

import pytest

from dcellpack.errors import BudgetExceededError, RangeError
from dcellpack import topology as topo


def test_build_params_table():
    assert topo.build_params(0, 6).t == (6,)
    assert topo.build_params(1, 6).t == (6, 42)
    assert topo.build_params(2, 6).t == (6, 42, 1806)
    assert topo.build_params(1, 2).t == (2, 6)
    assert topo.build_params(2, 3).t == (3, 12, 156)


def test_build_params_rejects_bad_input():
    with pytest.raises(RangeError):
        topo.build_params(-1, 6)
    with pytest.raises(RangeError):
        topo.build_params(1, 1)
    with pytest.raises(BudgetExceededError):
        topo.build_params(3, 6, vertex_budget=10**6)


def test_params_table_monotone():
    for k, n in [(0, 2), (1, 2), (2, 2), (2, 6), (3, 2)]:
        p = topo.build_params(k, n, vertex_budget=None)
        assert p.t[0] == n
        for i in range(1, k + 1):
            assert p.t[i] == p.t[i - 1] * (p.t[i - 1] + 1)
            assert p.t[i] > p.t[i - 1] > 0


def test_uid_examples():
    p = topo.build_params(1, 2)
    assert topo.uid((0, 0), 1, p) == 0
    assert topo.uid((2, 1), 0, p) == 1
    p2 = topo.build_params(2, 2)
    # suffix (a_1, a_0) = (1, 0): 0 + 1 * t[0] = 2
    assert topo.uid((0, 1, 0), 1, p2) == 2


def test_uid_coord_round_trip():
    for k, n in [(0, 4), (1, 2), (1, 6), (2, 3)]:
        p = topo.build_params(k, n)
        for u in range(p.vertex_count):
            digits = topo.coord_from_uid(u, p)
            assert topo.uid(digits, k, p) == u
    p = topo.build_params(1, 6)
    assert topo.coord_from_uid(41, p) == (6, 5)
    p = topo.build_params(1, 2)
    assert topo.coord_from_uid(3, p) == (1, 1)
    with pytest.raises(RangeError):
        topo.coord_from_uid(42, topo.build_params(1, 6))


def _pairwise_cross_edges(p: topo.DCellParams, level: int) -> set[tuple[int, int]]:
    """Level-`level` edges straight from the pairwise connection rule."""
    edges = set()
    block, sub = p.t[level], p.t[level - 1]
    for base in range(0, p.vertex_count, block):
        for r, s in itertools.combinations(range(sub + 1), 2):
            a = base + r * sub + (s - 1)  # in copy r with local uid s-1
            b = base + s * sub + r  # in copy s with local uid r
            edges.add((a, b))
    return edges


@pytest.mark.parametrize("k,n", [(1, 2), (1, 3), (1, 6), (2, 3)])
def test_cross_neighbor_matches_pairwise_definition(k, n):
    p = topo.build_params(k, n)
    for level in range(1, k + 1):
        expected = _pairwise_cross_edges(p, level)
        derived = set()
        for u in range(p.vertex_count):
            v = topo.cross_neighbor_uid(u, level, p)
            assert topo.cross_neighbor_uid(v, level, p) == u  # involution
            derived.add((min(u, v), max(u, v)))
        assert derived == expected


def test_cross_neighbor_coord_form():
    p = topo.build_params(1, 2)
    assert topo.cross_neighbor((0, 0), 1, p) == (1, 0)
    assert topo.cross_neighbor((2, 1), 1, p) == (1, 1)
    p6 = topo.build_params(1, 6)
    assert topo.cross_neighbor((0, 0), 1, p6) == (1, 0)
    with pytest.raises(RangeError):
        topo.cross_neighbor((0, 0), 0, p)


def test_cross_neighbor_uid_agrees_with_coord_form():
    for k, n in [(1, 2), (1, 6), (2, 3)]:
        p = topo.build_params(k, n)
        for u in range(p.vertex_count):
            digits = topo.coord_from_uid(u, p)
            for level in range(1, k + 1):
                via_coord = topo.uid(topo.cross_neighbor(digits, level, p), k, p)
                assert via_coord == topo.cross_neighbor_uid(u, level, p)


def test_build_graph_smallest():
    p = topo.build_params(1, 2)
    g = topo.build_graph(p)
    assert g.n == 6
    assert g.edge_count() == 6
    # cliques {(r,0),(r,1)} plus cross edges (0,0)-(1,0), (0,1)-(2,0), (1,1)-(2,1)
    expected = {(0, 1), (2, 3), (4, 5), (0, 2), (1, 4), (3, 5)}
    assert set(g.edges()) == expected


def test_build_graph_regularity():
    for k, n in [(0, 6), (1, 6), (2, 3)]:
        p = topo.build_params(k, n)
        g = topo.build_graph(p)
        assert g.n == p.vertex_count
        assert g.is_regular() == n + k - 1
    assert topo.build_graph(topo.build_params(0, 6)).edge_count() == 15


def test_graph_budget():
    with pytest.raises(BudgetExceededError):
        topo.build_graph(topo.build_params(2, 6), vertex_budget=1000)


def test_unique_edge_between_copies():
    p = topo.build_params(1, 6)
    g = topo.build_graph(p)
    sub = p.t[0]
    for r, s in itertools.combinations(range(sub + 1), 2):
        joining = [
            (a, b)
            for a, b in g.edges()
            if {a // sub, b // sub} == {r, s}
        ]
        assert len(joining) == 1


def test_same_copy_neighbors_in_distinct_copies():
    # k-dimensional neighbors of same-copy vertices land in distinct copies
    for n in range(2, 9):
        p = topo.build_params(1, n)
        sub = p.t[0]
        for c in range(sub + 1):
            seen = set()
            for local in range(sub):
                nb = topo.cross_neighbor_uid(c * sub + local, 1, p)
                seen.add(nb // sub)
            assert len(seen) == sub
            assert c not in seen


def test_copy_vertices():
    p = topo.build_params(1, 2)
    assert list(topo.copy_vertices(p, 1, (0,))) == [0, 1]
    p6 = topo.build_params(1, 6)
    assert list(topo.copy_vertices(p6, 1, (6,))) == list(range(36, 42))
    p0 = topo.build_params(0, 5)
    assert list(topo.copy_vertices(p0, 0, ())) == list(range(5))
    with pytest.raises(RangeError):
        topo.copy_vertices(p6, 1, (7,))
    # disjoint partition over all prefixes
    blocks = [set(topo.copy_vertices(p6, 1, (c,))) for c in range(7)]
    assert sorted(v for b in blocks for v in b) == list(range(42))


def _common_neighborhood_witnesses(n: int):
    p = topo.build_params(1, n)
    g = topo.build_graph(p)
    best = -1
    witnesses = []
    for trip in itertools.combinations(range(g.n), 3):
        common = set(g.neighbors(trip[0]))
        common &= set(g.neighbors(trip[1]))
        common &= set(g.neighbors(trip[2]))
        if len(common) > best:
            best, witnesses = len(common), [trip]
        elif len(common) == best:
            witnesses.append(trip)
    return best, witnesses


def test_common_neighborhood_max_and_clique_witness():
    for n in (4, 5, 6):
        best, witnesses = _common_neighborhood_witnesses(n)
        assert best == n - 3
        assert any(a // n == b // n == c // n for a, b, c in witnesses)


def test_common_neighborhood_witnesses_clique_only_for_n_at_least_5():
    # For n >= 5 only clique triples reach n-3 common neighbors: a vertex in
    # another block contributes at most one edge toward any fixed block.
    for n in (5, 6):
        _, witnesses = _common_neighborhood_witnesses(n)
        assert all(a // n == b // n == c // n for a, b, c in witnesses)


def test_common_neighborhood_n4_off_clique_witness():
    # n == 4 is special: n-3 = 1 is also reached by cross-block triples, e.g.
    # two clique vertices plus the cross-neighbor of their shared clique-mate.
    _, witnesses = _common_neighborhood_witnesses(4)
    assert any(not (a // 4 == b // 4 == c // 4) for a, b, c in witnesses)


def test_edge_list_round_trip(tmp_path):
    p = topo.build_params(1, 3)
    lines = topo.edge_list_lines(p)
    assert lines[0] == "# dcell k=1 n=3 vertices=12"
    g = topo.parse_edge_list(lines)
    assert g.edges() == topo.build_graph(p).edges()
    # deterministic: sorted by endpoints
    body = [tuple(map(int, ln.split())) for ln in lines[1:]]
    assert body == sorted(body)
    assert all(u < v for u, v in body)


def test_dot_export():
    p = topo.build_params(0, 3)
    lines = topo.dot_lines(p)
    assert lines[0].startswith("graph")
    assert lines[-1] == "}"
    assert "  0 -- 1;" in lines

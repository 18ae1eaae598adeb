import itertools

import pytest

from dcellpack import graphcore as gc
from dcellpack import topology as topo
from dcellpack.errors import InfeasibleError, RangeError


def cycle(n):
    return gc.Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def test_graph_basics():
    g = gc.Graph.from_edges(4, [(0, 1), (1, 0), (2, 3)])
    assert g.neighbors(0) == (1,)
    assert g.edge_count() == 2
    assert g.has_edge(3, 2)
    assert not g.has_edge(0, 2)
    with pytest.raises(RangeError):
        gc.Graph.from_edges(2, [(0, 0)])
    with pytest.raises(RangeError):
        gc.Graph.from_edges(2, [(0, 5)])


def test_is_path_in():
    g = gc.Graph.complete(4)
    assert gc.is_path_in(g, [0, 1, 2])
    assert gc.is_path_in(g, [2])
    assert not gc.is_path_in(g, [0, 1, 0])
    assert not gc.is_path_in(g, [])
    assert not gc.is_path_in(cycle(5), [0, 2])


def test_connect_examples():
    k4 = gc.Graph.complete(4)
    assert gc.connect(k4, 0, 0) == [0]
    assert gc.connect(k4, 0, 1) == [0, 1]
    d12 = topo.build_graph(topo.build_params(1, 2))
    # (0,0) to (2,1): length 3, lexicographically smallest shortest path
    assert gc.connect(d12, 0, 5) == [0, 1, 4, 5]
    with pytest.raises(InfeasibleError):
        gc.connect(cycle(6), 0, 3, forbidden=[1, 5])


def test_connect_within_mask():
    g = cycle(6)
    assert gc.connect(g, 0, 2, within=[0, 1, 2]) == [0, 1, 2]
    with pytest.raises(InfeasibleError):
        gc.connect(g, 0, 3, within=[0, 1, 3])


def _assert_internally_disjoint(paths, endpoints):
    for p, q in itertools.combinations(paths, 2):
        assert set(p) & set(q) <= set(endpoints)


def test_disjoint_paths_complete():
    k4 = gc.Graph.complete(4)
    paths = gc.disjoint_paths(k4, 0, 1, 3)
    assert paths == [[0, 1], [0, 2, 1], [0, 3, 1]]
    assert gc.disjoint_paths(k4, 0, 1, 0) == []
    with pytest.raises(RangeError):
        gc.disjoint_paths(k4, 2, 2, 1)


def test_disjoint_paths_dcell():
    g = topo.build_graph(topo.build_params(1, 6))
    for u, v in [(0, 1), (0, 41), (7, 30)]:
        paths = gc.disjoint_paths(g, u, v, 6)
        assert len(paths) == 6
        _assert_internally_disjoint(paths, (u, v))
        for p in paths:
            assert gc.is_path_in(g, p) and p[0] == u and p[-1] == v


def test_disjoint_paths_respects_true_connectivity():
    g = cycle(8)
    assert len(gc.disjoint_paths(g, 0, 4, 5)) == 2


def test_local_connectivity_and_connectivity():
    assert gc.connectivity(gc.Graph.complete(5)) == 4
    assert gc.connectivity(cycle(7)) == 2
    d16 = topo.build_graph(topo.build_params(1, 6))
    assert gc.connectivity(d16) == 6
    assert gc.connectivity(d16, samples=[(0, 41), (3, 17)]) == 6


def test_determinism():
    g = topo.build_graph(topo.build_params(1, 6))
    a = gc.disjoint_paths(g, 2, 37, 6)
    b = gc.disjoint_paths(g, 2, 37, 6)
    assert a == b


def test_fan_complete():
    k4 = gc.Graph.complete(4)
    arms = gc.fan(k4, 0, [1, 2, 3])
    assert arms == {1: [0, 1], 2: [0, 2], 3: [0, 3]}


def test_fan_path_graph():
    g = gc.Graph.from_edges(3, [(0, 1), (1, 2)])
    assert gc.fan(g, 0, [2]) == {2: [0, 1, 2]}


def test_fan_properties_dcell():
    g = topo.build_graph(topo.build_params(1, 6))
    targets = [6, 12, 18, 24, 30, 36]  # spread across copies
    arms = gc.fan(g, 0, targets)
    assert sorted(arms) == targets
    paths = list(arms.values())
    _assert_internally_disjoint(paths, (0,))
    for t, p in arms.items():
        assert p[0] == 0 and p[-1] == t
        assert gc.is_path_in(g, p)
        # internal vertices avoid the whole target set
        assert not set(p[1:-1]) & set(targets)


def test_fan_infeasible_reports():
    g = gc.Graph.from_edges(4, [(0, 1), (1, 2), (1, 3)])
    with pytest.raises(InfeasibleError):
        gc.fan(g, 0, [2, 3])  # cut vertex 1 limits the fan to one path


def test_fan_within_copy():
    p = topo.build_params(1, 6)
    g = topo.build_graph(p)
    copy0 = set(topo.copy_vertices(p, 1, (0,)))
    arms = gc.fan(g, 0, [1, 2, 3], within=copy0)
    for path in arms.values():
        assert set(path) <= copy0


def test_link_two_square():
    g = cycle(4)
    p1, p2 = gc.link_two(g, (0, 2), (1, 3))
    assert p1[0] == 0 and p2[0] == 2
    assert {p1[-1], p2[-1]} == {1, 3}
    assert not set(p1) & set(p2)


def test_link_two_complete_and_infeasible():
    k4 = gc.Graph.complete(4)
    p1, p2 = gc.link_two(k4, (0, 1), (2, 3))
    assert not set(p1) & set(p2)
    star = gc.Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
    with pytest.raises(InfeasibleError):
        gc.link_two(star, (1, 2), (3, 4))  # both routes need the hub


def test_link_two_across_dcell_copies():
    p = topo.build_params(1, 3)
    g = topo.build_graph(p)
    within = set(range(12))  # copies 0..3 of D_{0,3} inside D_{1,3}
    a = (0, 4)
    b = (8, 11)
    p1, p2 = gc.link_two(g, a, b, within=within)
    assert not set(p1) & set(p2)
    assert {p1[0], p2[0]} == set(a) and {p1[-1], p2[-1]} == set(b)
    assert set(p1) <= within and set(p2) <= within

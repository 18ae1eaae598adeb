"""Constructive packing of floor((2n+3)/4) S-paths in the one-dimensional
network D_{1,n} for n >= 6.

D_{1,n} is n+1 cliques K_n joined by a perfect pairing of cross edges (one
per clique pair).  The construction dispatches on how many cliques the
triple touches and routes through helper cliques using, per helper clique,
the unique cross edges from the triple's cliques.

Anchor collisions (an escort vertex coinciding with a member of S whose
cross edge it carries) are handled by dropping the escort; the seam-collapse
in cat() realizes exactly those drop rules.
"""

from __future__ import annotations

from .. import topology as topo
from ..errors import RangeError
from ..graphcore import Graph, connect
from .base import Packing, SteinerTriple, cat, certified
from .complete import complete_templates, leftover_spare


def _endpoint(p: topo.DCellParams, frm: int, to: int) -> int:
    """The vertex of copy `frm` carrying the unique (frm, to) cross edge."""
    sub = p.t[p.k - 1]
    if frm < to:
        return frm * sub + (to - 1)
    return frm * sub + to


def _cross(p: topo.DCellParams, v: int) -> int:
    return topo.cross_neighbor_uid(v, p.k, p)


def pack_d1(n: int, s, g: Graph | None = None) -> Packing:
    """Theorem-grade constructor for D_{1,n}; refuses n < 6."""
    if n < 6:
        raise RangeError(
            f"constructive packing needs n >= 6, got n={n}; use the oracle instead"
        )
    p = topo.build_params(1, n)
    g = g or topo.build_graph(p)
    triple = SteinerTriple.of(s)
    for v in triple.as_tuple():
        if not 0 <= v < p.vertex_count:
            raise RangeError(f"vertex {v} outside D_{{1,{n}}}")
    copies = sorted({v // n for v in triple.as_tuple()})
    if len(copies) == 1:
        paths, label = _case_same_clique(p, g, triple)
    elif len(copies) == 2:
        paths, label = _case_two_cliques(p, g, triple)
    else:
        paths, label = _case_three_cliques(p, g, triple)
    target = (2 * n + 3) // 4
    if len(paths) != target:
        raise RangeError(f"internal: built {len(paths)} paths, wanted {target}")
    return certified(g, triple, paths, label)


def _case_same_clique(p, g, triple):
    """All of S in one clique: clique templates, plus for odd n one extra
    path through two neighboring copies via the leftover clique vertex."""
    n = p.n
    x, y, z = sorted(triple.as_tuple())
    c0 = x // n
    paths = complete_templates(n, (x, y, z), offset=c0 * n)
    if n % 2 == 1:
        u = leftover_spare(n, (x, y, z), offset=c0 * n)
        yq, zq = _cross(p, y), _cross(p, z)
        within = set(topo.copy_vertices(p, 1, (yq // n,)))
        within |= set(topo.copy_vertices(p, 1, (zq // n,)))
        t_path = connect(g, yq, zq, within=within)
        paths.append(cat(x, u, y, t_path, z))
    return paths, "d1-case1"


def _case_two_cliques(p, g, triple):
    n = p.n
    members = sorted(triple.as_tuple())
    c_of = [v // n for v in members]
    # z is the lone member; x, y share a clique
    lone = [v for v in members if c_of.count(v // n) == 1][0]
    pair = [v for v in members if v != lone]
    z = lone
    c1 = z // n
    # y must have its cross edge outside z's copy; at most one of the pair
    # can cross into it, and that one is forced to play x
    crossing = [v for v in pair if _cross(p, v) // n == c1]
    if crossing:
        x = crossing[0]
        y = [v for v in pair if v != x][0]
    else:
        y, x = sorted(pair)
    c0 = x // n
    c2 = _cross(p, y) // n
    # label the helper copies 3..n; x's cross copy takes an even label
    helpers = [c for c in range(n + 1) if c not in (c0, c1, c2)]
    labels: dict[int, int] = {}
    cx = _cross(p, x) // n
    free = list(range(3, n + 1))
    if cx != c1:
        evens = [i for i in free if i % 2 == 0]
        labels[cx] = evens[0]
        free.remove(evens[0])
        helpers.remove(cx)
    for c, i in zip(helpers, free):
        labels[c] = i
    bylabel = {i: c for c, i in labels.items()}

    def u(i: int) -> int:
        return _endpoint(p, c0, bylabel[i]) if i >= 3 else None

    def v(i: int) -> int:
        return _endpoint(p, c1, bylabel[i]) if i >= 3 else None

    u2 = _endpoint(p, c0, c1)
    v2 = _endpoint(p, c1, c0)
    v1 = _endpoint(p, c1, c2)
    assert _endpoint(p, c0, c2) == y, "naming: y must carry the (c0, c2) edge"
    paths = [cat(y, x, u2, v2, z)]
    for i in range(3, n, 2):
        ui, vi, uj, vj = u(i), v(i), u(i + 1), v(i + 1)
        paths.append(
            cat(
                y, ui, _cross(p, ui), _cross(p, vi), vi, z,
                vj, _cross(p, vj), _cross(p, uj), uj, x,
            )
        )
    if n % 2 == 1:
        un = u(n)
        paths.append(cat(x, un, y, _cross(p, y), _cross(p, v1), v1, z))
    return paths, "d1-case2"


def _case_three_cliques(p, g, triple):
    n = p.n
    x, y, z = sorted(triple.as_tuple())
    c0, c1, c2 = x // n, y // n, z // n
    helpers = [c for c in range(n + 1) if c not in (c0, c1, c2)]
    bylabel = {i: c for i, c in zip(range(3, n + 1), helpers)}

    def ep(frm: int, i: int) -> int:
        return _endpoint(p, frm, bylabel[i])

    u1, v1 = _endpoint(p, c0, c1), _endpoint(p, c1, c0)
    u2, w1 = _endpoint(p, c0, c2), _endpoint(p, c2, c0)
    v2, w2 = _endpoint(p, c1, c2), _endpoint(p, c2, c1)
    paths = [cat(x, u1, v1, y, v2, w2, z)]
    u3, v3 = ep(c0, 3), ep(c1, 3)
    paths.append(cat(z, w1, u2, x, u3, _cross(p, u3), _cross(p, v3), v3, y))
    for i in range(4, n, 2):
        wi, ui, uj, vj = ep(c2, i), ep(c0, i), ep(c0, i + 1), ep(c1, i + 1)
        paths.append(
            cat(
                z, wi, _cross(p, wi), _cross(p, ui), ui, x,
                uj, _cross(p, uj), _cross(p, vj), vj, y,
            )
        )
    return paths, "d1-case3"

"""Three-copies construction: S spread over three top-level copies.

An auxiliary triple {x, u, v} packed inside x's copy fixes how many paths
take each of the three shapes; three fans (one per member, inside its own
copy) and one bridge copy per fan-to-fan hop realize the paths:

    shape 1:  x -> [bridge] -> y -> [bridge] -> z      (y interior)
    shape 2:  x -> [bridge] -> z -> [bridge] -> y      (z interior)
    shape 3:  y -> [bridge] -> x -> [bridge] -> z      (x interior)

On the +1 parity branch one extra path is routed through the reserve region
H (the copies left untouched), dispatching on where the cross neighbors of
x, y, z land.  Each sub-case is a small variant: extra or dropped fan
targets, one or two linking paths through H, and an assembly recipe.
Variants are tried in a fixed order; the first one whose preconditions and
flows succeed is validated and returned; a packing that assembles but fails
validation raises with its case label.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import topology as topo
from ..errors import ConstructionBugError, InfeasibleError
from ..graphcore import fan, link_two
from .base import Packing, SteinerTriple, cat, certified, rev
from .recursive import Frame, _local_graph, pack_inner, plus_one_needed


class _Skip(Exception):
    """Variant precondition not met; try the next one."""


@dataclass
class _Ctx:
    frame: Frame
    orig: SteinerTriple
    x: int
    y: int
    z: int
    counts: tuple[int, int, int] = (0, 0, 0)  # shape-1 / shape-2 / shape-3
    bridge: dict = field(default_factory=dict)  # (kind, idx) -> copy
    esc: dict = field(default_factory=dict)  # (name, idx) -> escort vertex
    h_copies: list = field(default_factory=list)

    @property
    def cx(self):
        return self.frame.copy_of(self.x)

    @property
    def cy(self):
        return self.frame.copy_of(self.y)

    @property
    def cz(self):
        return self.frame.copy_of(self.z)

    def cross(self, v):
        return self.frame.cross(v)

    @property
    def budget(self):
        return self.frame.p.n + self.frame.p.k - 2

    def base_targets(self):
        r, s, t = self.counts
        fx = [self.esc["1x", i] for i in range(r)]
        fx += [self.esc["3x", j] for j in range(s)]
        fx += [self.esc["5x", l] for l in range(t)]
        fx += [self.esc["6x", l] for l in range(t)]
        fy = [self.esc["1y", i] for i in range(r)]
        fy += [self.esc["2y", i] for i in range(r)]
        fy += [self.esc["4y", j] for j in range(s)]
        fy += [self.esc["5y", l] for l in range(t)]
        fz = [self.esc["2z", i] for i in range(r)]
        fz += [self.esc["3z", j] for j in range(s)]
        fz += [self.esc["4z", j] for j in range(s)]
        fz += [self.esc["6z", l] for l in range(t)]
        return fx, fy, fz

    def make_fans(self, add=(), drop=()):
        """Fans per side with extra/dropped targets; skips when over budget."""
        fx, fy, fz = map(set, self.base_targets())
        sets = {"x": fx, "y": fy, "z": fz}
        roots = {"x": self.x, "y": self.y, "z": self.z}
        copies = {"x": self.cx, "y": self.cy, "z": self.cz}
        for side, v in drop:
            sets[side].discard(v)
        for side, v in add:
            if v == roots[side]:
                raise _Skip(f"fan target equals root on side {side}")
            sets[side].add(v)
        fans = {}
        for side in "xyz":
            if len(sets[side]) > self.budget:
                raise _Skip(f"{side}-fan over budget ({len(sets[side])})")
            fans[side] = fan(
                self.frame.g,
                roots[side],
                sets[side],
                within=self.frame.copy_range(copies[side]),
            )
        return fans

    def bridge_path(self, kind, idx, a, b):
        return self.frame.connect_in([self.bridge[kind, idx]], a, b)

    def assemble(self, fans, skip=frozenset()):
        """Base paths of shapes 1..3, omitting (shape, index) pairs in skip."""
        r, s, t = self.counts
        ax, ay, az = fans["x"], fans["y"], fans["z"]
        e, q = self.esc, self.cross
        out = []
        for i in range(r):
            if ("1", i) in skip:
                continue
            u1 = self.bridge_path("1", i, q(e["1x", i]), q(e["1y", i]))
            u2 = self.bridge_path("2", i, q(e["2y", i]), q(e["2z", i]))
            out.append(
                cat(ax[e["1x", i]], u1, rev(ay[e["1y", i]]), ay[e["2y", i]], u2, rev(az[e["2z", i]]))
            )
        for j in range(s):
            if ("2", j) in skip:
                continue
            u3 = self.bridge_path("3", j, q(e["3x", j]), q(e["3z", j]))
            u4 = self.bridge_path("4", j, q(e["4z", j]), q(e["4y", j]))
            out.append(
                cat(ax[e["3x", j]], u3, rev(az[e["3z", j]]), az[e["4z", j]], u4, rev(ay[e["4y", j]]))
            )
        for l in range(t):
            if ("3", l) in skip:
                continue
            u5 = self.bridge_path("5", l, q(e["5y", l]), q(e["5x", l]))
            u6 = self.bridge_path("6", l, q(e["6x", l]), q(e["6z", l]))
            out.append(
                cat(ay[e["5y", l]], u5, rev(ax[e["5x", l]]), ax[e["6x", l]], u6, rev(az[e["6z", l]]))
            )
        return out

    def fresh_to(self, source_copy, used, pool=None):
        """Smallest-copy fresh escort of source_copy crossing into the pool."""
        allowed = self.h_copies if pool is None else pool
        for c in sorted(allowed):
            w = self.frame.endpoint(source_copy, c)
            if w not in used:
                return w
        raise _Skip(f"no fresh escort from copy {source_copy}")

    def used_vertices(self):
        used = {self.x, self.y, self.z}
        used.update(self.esc.values())
        return used

    def region_h(self, extra_copies=()):
        return self.frame.region(list(self.h_copies) + list(extra_copies))

    def link_h(self, a, b, extra_copies=()):
        return self.frame.connect_in(list(self.h_copies) + list(extra_copies), a, b)


def claim_three_copies(frame: Frame, triple: SteinerTriple) -> Packing:
    p = frame.p
    plus = plus_one_needed(p.k, p.n)
    members = sorted(triple.as_tuple())
    # role normalization: when some member's cross neighbor lands in another
    # member's copy, that member plays y and the target copy's owner plays x
    copy_owner = {frame.copy_of(m): m for m in members}
    stray = [
        (m, copy_owner[frame.copy_of(frame.cross(m))])
        for m in members
        if frame.copy_of(frame.cross(m)) in copy_owner
    ]
    if stray:
        yv, xv = stray[0]
        zv = next(m for m in members if m not in (yv, xv))
    else:
        xv, yv, zv = members
    ctx = _Ctx(frame=frame, orig=triple, x=xv, y=yv, z=zv)

    # auxiliary triple {x, u, v} inside x's copy: u shares x's floor clique,
    # v is the within-copy cross neighbor of their smallest common neighbor,
    # making the three-way common neighborhood exactly that one vertex
    n = p.n
    x_loc = frame.local(xv)
    clique = range((x_loc // n) * n, (x_loc // n) * n + n)
    u_loc = min(w for w in clique if w != x_loc)
    vq_loc = min(w for w in clique if w not in (x_loc, u_loc))
    p_sub = topo.build_params(p.k - 1, n, vertex_budget=None)
    v_loc = topo.cross_neighbor_uid(vq_loc, p.k - 1, p_sub)
    g_sub = _local_graph(p.k - 1, n)
    gamma = set(g_sub.adj[x_loc]) & set(g_sub.adj[u_loc]) & set(g_sub.adj[v_loc])
    if gamma != {vq_loc}:
        raise ConstructionBugError("claim2-aux", f"common neighborhood {sorted(gamma)}")

    inner, _ = pack_inner(frame, ctx.cx, (x_loc, u_loc, v_loc), want_spares=2 if plus else 0)
    x_g, u_g, v_g = (frame.lift(ctx.cx, w) for w in (x_loc, u_loc, v_loc))
    r = sum(1 for path in inner if u_g not in (path[0], path[-1]))
    s = sum(1 for path in inner if v_g not in (path[0], path[-1]))
    t = sum(1 for path in inner if x_g not in (path[0], path[-1]))
    if r + s + t != len(inner):
        raise ConstructionBugError("claim2-counts", f"{r}+{s}+{t} != {len(inner)}")
    ctx.counts = (r, s, t)
    if max(r + s + 2 * t, 2 * r + s + t, r + 2 * s + t) > ctx.budget:
        raise ConstructionBugError("claim2-budget", f"counts {ctx.counts} exceed degree")

    # bridge copies: lowest free copies, skipping the member copies and the
    # copies receiving the members' own cross edges; this keeps escorts
    # distinct from S and leaves the cross neighbors available in H
    banned = {ctx.cx, ctx.cy, ctx.cz}
    banned |= {frame.copy_of(frame.cross(v)) for v in (xv, yv, zv)}
    pool = [c for c in range(frame.ncopies) if c not in banned]
    need = 2 * (r + s + t)
    if len(pool) < need + 3:
        raise ConstructionBugError("claim2-copies", "not enough copies for bridges")
    kinds = (
        [("1", i) for i in range(r)]
        + [("2", i) for i in range(r)]
        + [("3", j) for j in range(s)]
        + [("4", j) for j in range(s)]
        + [("5", l) for l in range(t)]
        + [("6", l) for l in range(t)]
    )
    for (kind, idx), c in zip(kinds, pool):
        ctx.bridge[kind, idx] = c
    used_bridges = set(pool[:need])
    ctx.h_copies = [
        c
        for c in range(frame.ncopies)
        if c not in {ctx.cx, ctx.cy, ctx.cz} and c not in used_bridges
    ]
    ep = frame.endpoint
    for i in range(r):
        ctx.esc["1x", i] = ep(ctx.cx, ctx.bridge["1", i])
        ctx.esc["1y", i] = ep(ctx.cy, ctx.bridge["1", i])
        ctx.esc["2y", i] = ep(ctx.cy, ctx.bridge["2", i])
        ctx.esc["2z", i] = ep(ctx.cz, ctx.bridge["2", i])
    for j in range(s):
        ctx.esc["3x", j] = ep(ctx.cx, ctx.bridge["3", j])
        ctx.esc["3z", j] = ep(ctx.cz, ctx.bridge["3", j])
        ctx.esc["4y", j] = ep(ctx.cy, ctx.bridge["4", j])
        ctx.esc["4z", j] = ep(ctx.cz, ctx.bridge["4", j])
    for l in range(t):
        ctx.esc["5x", l] = ep(ctx.cx, ctx.bridge["5", l])
        ctx.esc["5y", l] = ep(ctx.cy, ctx.bridge["5", l])
        ctx.esc["6x", l] = ep(ctx.cx, ctx.bridge["6", l])
        ctx.esc["6z", l] = ep(ctx.cz, ctx.bridge["6", l])
    if {xv, yv, zv} & set(ctx.esc.values()):
        raise ConstructionBugError("claim2-escorts", "escort collides with S")

    if not plus:
        fans = ctx.make_fans()
        return certified(frame.g, triple, ctx.assemble(fans), "claim2-passthrough")

    label, variants = _case_plan(ctx)
    failures = []
    for name, builder in variants:
        try:
            paths = builder(ctx)
        except (_Skip, InfeasibleError) as exc:
            failures.append(f"{name}: {exc}")
            continue
        return certified(frame.g, triple, paths, f"{label}/{name}")
    raise ConstructionBugError(label, " | ".join(failures) or "no variant applied")


def _case_plan(ctx: _Ctx):
    f = ctx.frame
    xq, yq, zq = ctx.cross(ctx.x), ctx.cross(ctx.y), ctx.cross(ctx.z)
    cxq, cyq, czq = f.copy_of(xq), f.copy_of(yq), f.copy_of(zq)
    scopies = {ctx.cx, ctx.cy, ctx.cz}
    if not ({cxq, cyq, czq} & scopies):
        return "claim2-case1", [
            ("pivot-x", _v_case1_pivot("x")),
            ("pivot-y", _v_case1_pivot("y")),
            ("pivot-z", _v_case1_pivot("z")),
        ]
    if cyq != ctx.cx:
        raise ConstructionBugError(
            "claim2-normalize", f"stray cross not canonical: {cxq}, {cyq}, {czq}"
        )
    if cxq == ctx.cz:
        if czq == ctx.cx:
            return "claim2-case4b", [("xfan", _v_case4b_xfan), ("yz", _v_case4b_yz)]
        if czq == ctx.cy:
            return "claim2-case4c", [
                ("pair-xy", _v_pair_xy),
                ("pair-yz", _v_pair_yz_zq_in_cy),
                ("pair-xz", _v_pair_xz_xq_in_cz),
                ("destroy", _v_case4c_destroy),
            ]
        return "claim2-case4a", [
            ("pair-xz", _v_pair_xz_xq_in_cz),
            ("pair-xy", _v_case4a_pair_xy),
            ("pair-yz", _v_case4a_pair_yz),
        ]
    if czq == ctx.cx:
        if yq == ctx.x:
            return "claim2-case3.1", [
                ("xfan", _v_case31_xfan),
                ("yslack", _v_case31_yslack),
                ("zslack", _v_case31_zslack),
            ]
        return "claim2-case3.2", [
            ("xfan2", _v_case32_xfan2),
            ("yslack", _v_case32_yslack),
            ("zslack", _v_case32_zslack),
            ("xslack", _v_case32_xslack),
        ]
    if czq == ctx.cy:
        if yq == ctx.x:
            return "claim2-case3.1b", [("yfan", _v_case31b_yfan), ("xz", _v_case31b_xz)]
        return "claim2-case3.3", [
            ("pair-xy", _v_pair_xy),
            ("pair-xz", _v_case33_pair_xz),
            ("pair-yz", _v_case33_pair_yz),
            ("destroy-x", _v_case33_destroy_x),
            ("destroy-y", _v_case33_destroy_y),
            ("destroy-z", _v_case33_destroy_z),
        ]
    if yq == ctx.x:
        return "claim2-case2.1", [
            ("xslack", _v_case21_xslack),
            ("yslack", _v_case21_yslack),
            ("zslack", _v_case21_zslack),
        ]
    return "claim2-case2.2", [
        ("xslack", _v_case22_xslack),
        ("yslack", _v_case22_yslack),
        ("zslack", _v_case22_zslack),
    ]


# ---------------------------------------------------------------------------
# variants: each returns the complete path list (base minus rebuilt + extras)


def _v_case1_pivot(side):
    """All three cross neighbors in H: pivot one member through a fresh
    escort and pair the other two cross neighbors via two disjoint H-paths."""

    def build(ctx: _Ctx):
        f = ctx.frame
        roots = {"x": ctx.x, "y": ctx.y, "z": ctx.z}
        copies = {"x": ctx.cx, "y": ctx.cy, "z": ctx.cz}
        pr = roots[side]
        qr, rr = [roots[sd] for sd in "xyz" if sd != side]
        e = ctx.fresh_to(copies[side], ctx.used_vertices())
        fans = ctx.make_fans(add=[(side, e)])
        d1, d2 = link_two(
            f.g, (f.cross(qr), f.cross(rr)), (f.cross(e), f.cross(pr)), within=ctx.region_h()
        )
        armp = fans[side]
        if d1[-1] == f.cross(e):
            extra = cat(qr, d1, rev(armp[e]), f.cross(pr), rev(d2), rr)
        else:
            extra = cat(qr, d1, armp[e], rev(d2), rr)
        return ctx.assemble(fans) + [extra]

    return build


def _v_case21_xslack(ctx: _Ctx):
    # y' = x, z' in H: extra = y x ..fan.. x1 x1' ..H.. z' z
    f = ctx.frame
    x1 = ctx.fresh_to(ctx.cx, ctx.used_vertices())
    fans = ctx.make_fans(add=[("x", x1)])
    link = ctx.link_h(f.cross(x1), f.cross(ctx.z))
    extra = cat(ctx.y, fans["x"][x1], link, ctx.z)
    return ctx.assemble(fans) + [extra]


def _v_case21_yslack(ctx: _Ctx):
    f = ctx.frame
    y1 = ctx.fresh_to(ctx.cy, ctx.used_vertices())
    fans = ctx.make_fans(add=[("y", y1)])
    link = ctx.link_h(f.cross(y1), f.cross(ctx.z))
    extra = cat(ctx.x, fans["y"][y1], link, ctx.z)
    return ctx.assemble(fans) + [extra]


def _v_case21_zslack(ctx: _Ctx):
    f = ctx.frame
    r, s, t = ctx.counts
    if t < 1:
        raise _Skip("needs a shape-3 path to rebuild")
    lt = t - 1
    e = ctx.esc
    c5 = ctx.bridge["5", lt]
    z1 = f.endpoint(ctx.cz, c5)
    if z1 in ctx.used_vertices():
        raise _Skip("forced escort already used")
    fans = ctx.make_fans(add=[("z", z1)])
    d1, d2 = link_two(
        f.g,
        (f.cross(e["5y", lt]), f.cross(e["5x", lt])),
        (f.cross(ctx.z), f.cross(z1)),
        within=ctx.region_h([c5]),
    )
    u6 = ctx.bridge_path("6", lt, f.cross(e["6x", lt]), f.cross(e["6z", lt]))
    p1 = cat(ctx.y, fans["x"][e["6x", lt]], u6, rev(fans["z"][e["6z", lt]]))
    if d1[-1] == f.cross(ctx.z):
        p2 = cat(fans["y"][e["5y", lt]], d1, ctx.z, fans["z"][z1], rev(d2), rev(fans["x"][e["5x", lt]]))
    else:
        p2 = cat(fans["y"][e["5y", lt]], d1, rev(fans["z"][z1]), f.cross(ctx.z), rev(d2), rev(fans["x"][e["5x", lt]]))
    return ctx.assemble(fans, skip={("3", lt)}) + [p1, p2]


def _v_case22_xslack(ctx: _Ctx):
    f = ctx.frame
    yq = f.cross(ctx.y)
    fans = ctx.make_fans(add=[("x", yq)])
    link = ctx.link_h(f.cross(ctx.x), f.cross(ctx.z))
    extra = cat(ctx.y, rev(fans["x"][yq]), link, ctx.z)
    return ctx.assemble(fans) + [extra]


def _v_case22_yslack(ctx: _Ctx):
    f = ctx.frame
    r, s, t = ctx.counts
    if t < 1:
        raise _Skip("needs a shape-3 path to rebuild")
    lt = t - 1
    e = ctx.esc
    c6 = ctx.bridge["6", lt]
    y1 = f.endpoint(ctx.cy, c6)
    if y1 in ctx.used_vertices():
        raise _Skip("forced escort already used")
    yq = f.cross(ctx.y)
    fans = ctx.make_fans(add=[("x", yq), ("y", y1)], drop=[("x", e["6x", lt])])
    u5 = ctx.bridge_path("5", lt, f.cross(e["5x", lt]), f.cross(e["5y", lt]))
    link6 = f.connect_in([c6], f.cross(y1), f.cross(e["6z", lt]))
    p1 = cat(
        fans["x"][e["5x", lt]], u5, rev(fans["y"][e["5y", lt]]),
        fans["y"][y1], link6, rev(fans["z"][e["6z", lt]]),
    )
    p2 = cat(ctx.y, rev(fans["x"][yq]), ctx.link_h(f.cross(ctx.x), f.cross(ctx.z)), ctx.z)
    return ctx.assemble(fans, skip={("3", lt)}) + [p1, p2]


def _v_case22_zslack(ctx: _Ctx):
    f = ctx.frame
    r, s, t = ctx.counts
    if t < 1:
        raise _Skip("needs a shape-3 path to rebuild")
    lt = t - 1
    e = ctx.esc
    c5 = ctx.bridge["5", lt]
    z1 = f.endpoint(ctx.cz, c5)
    if z1 in ctx.used_vertices():
        raise _Skip("forced escort already used")
    yq = f.cross(ctx.y)
    fans = ctx.make_fans(add=[("x", yq), ("z", z1)], drop=[("x", e["5x", lt])])
    u6 = ctx.bridge_path("6", lt, f.cross(e["6x", lt]), f.cross(e["6z", lt]))
    link5 = f.connect_in([c5], f.cross(z1), f.cross(e["5y", lt]))
    p1 = cat(
        fans["x"][e["6x", lt]], u6, rev(fans["z"][e["6z", lt]]),
        fans["z"][z1], link5, rev(fans["y"][e["5y", lt]]),
    )
    p2 = cat(ctx.y, rev(fans["x"][yq]), ctx.link_h(f.cross(ctx.x), f.cross(ctx.z)), ctx.z)
    return ctx.assemble(fans, skip={("3", lt)}) + [p1, p2]


def _v_case31_xfan(ctx: _Ctx):
    # y' = x and z' in x's copy: extra = y x ..fan.. z' z
    f = ctx.frame
    zq = f.cross(ctx.z)
    fans = ctx.make_fans(add=[("x", zq)])
    extra = cat(ctx.y, fans["x"][zq], ctx.z)
    return ctx.assemble(fans) + [extra]


def _v_case31_yslack(ctx: _Ctx):
    f = ctx.frame
    r, s, t = ctx.counts
    if t < 1:
        raise _Skip("needs a shape-3 path to rebuild")
    lt = t - 1
    e = ctx.esc
    c6 = ctx.bridge["6", lt]
    y1 = f.endpoint(ctx.cy, c6)
    if y1 in ctx.used_vertices():
        raise _Skip("forced escort already used")
    zq = f.cross(ctx.z)
    fans = ctx.make_fans(add=[("x", zq), ("y", y1)], drop=[("x", e["6x", lt])])
    u5 = ctx.bridge_path("5", lt, f.cross(e["5x", lt]), f.cross(e["5y", lt]))
    link6 = f.connect_in([c6], f.cross(y1), f.cross(e["6z", lt]))
    p1 = cat(
        fans["x"][e["5x", lt]], u5, rev(fans["y"][e["5y", lt]]),
        fans["y"][y1], link6, rev(fans["z"][e["6z", lt]]),
    )
    p2 = cat(ctx.y, fans["x"][zq], ctx.z)
    return ctx.assemble(fans, skip={("3", lt)}) + [p1, p2]


def _v_case31_zslack(ctx: _Ctx):
    f = ctx.frame
    r, s, t = ctx.counts
    if t < 1:
        raise _Skip("needs a shape-3 path to rebuild")
    lt = t - 1
    e = ctx.esc
    c5 = ctx.bridge["5", lt]
    z1 = f.endpoint(ctx.cz, c5)
    if z1 in ctx.used_vertices():
        raise _Skip("forced escort already used")
    zq = f.cross(ctx.z)
    fans = ctx.make_fans(add=[("x", zq), ("z", z1)], drop=[("x", e["5x", lt])])
    u6 = ctx.bridge_path("6", lt, f.cross(e["6x", lt]), f.cross(e["6z", lt]))
    link5 = f.connect_in([c5], f.cross(z1), f.cross(e["5y", lt]))
    p1 = cat(
        fans["x"][e["6x", lt]], u6, rev(fans["z"][e["6z", lt]]),
        fans["z"][z1], link5, rev(fans["y"][e["5y", lt]]),
    )
    p2 = cat(ctx.y, fans["x"][zq], ctx.z)
    return ctx.assemble(fans, skip={("3", lt)}) + [p1, p2]


def _v_case31b_yfan(ctx: _Ctx):
    # y' = x and z' in y's copy: extra = x y ..fan.. z' z
    f = ctx.frame
    zq = f.cross(ctx.z)
    fans = ctx.make_fans(add=[("y", zq)])
    extra = cat(ctx.x, fans["y"][zq], ctx.z)
    return ctx.assemble(fans) + [extra]


def _v_case31b_xz(ctx: _Ctx):
    f = ctx.frame
    used = ctx.used_vertices()
    x1 = ctx.fresh_to(ctx.cx, used)
    z1 = ctx.fresh_to(ctx.cz, used | {x1})
    fans = ctx.make_fans(add=[("x", x1), ("z", z1)])
    link = ctx.link_h(f.cross(x1), f.cross(z1))
    extra = cat(ctx.y, fans["x"][x1], link, rev(fans["z"][z1]))
    return ctx.assemble(fans) + [extra]


def _v_case32_xfan2(ctx: _Ctx):
    # both y' and z' sit in x's copy: glue two x-arms at x
    f = ctx.frame
    yq, zq = f.cross(ctx.y), f.cross(ctx.z)
    fans = ctx.make_fans(add=[("x", yq), ("x", zq)])
    extra = cat(ctx.y, rev(fans["x"][yq]), fans["x"][zq], ctx.z)
    return ctx.assemble(fans) + [extra]


def _v_case32_yslack(ctx: _Ctx):
    f = ctx.frame
    r, s, t = ctx.counts
    if t < 1:
        raise _Skip("needs a shape-3 path to rebuild")
    lt = t - 1
    e = ctx.esc
    yq, zq = f.cross(ctx.y), f.cross(ctx.z)
    y1 = ctx.fresh_to(ctx.cy, ctx.used_vertices())
    fans = ctx.make_fans(
        add=[("x", yq), ("x", zq), ("y", y1)],
        drop=[("x", e["5x", lt]), ("x", e["6x", lt])],
    )
    p1 = cat(ctx.y, rev(fans["x"][yq]), fans["x"][zq], ctx.z)
    region = ctx.region_h([ctx.bridge["5", lt], ctx.bridge["6", lt]])
    d1, d2 = link_two(
        f.g, (f.cross(ctx.x), f.cross(e["6z", lt])), (f.cross(e["5y", lt]), f.cross(y1)),
        within=region,
    )
    if d1[-1] == f.cross(e["5y", lt]):
        p2 = cat(ctx.x, d1, rev(fans["y"][e["5y", lt]]), fans["y"][y1], rev(d2), rev(fans["z"][e["6z", lt]]))
    else:
        p2 = cat(ctx.x, d1, rev(fans["y"][y1]), fans["y"][e["5y", lt]], rev(d2), rev(fans["z"][e["6z", lt]]))
    return ctx.assemble(fans, skip={("3", lt)}) + [p1, p2]


def _v_case32_zslack(ctx: _Ctx):
    f = ctx.frame
    r, s, t = ctx.counts
    if t < 1:
        raise _Skip("needs a shape-3 path to rebuild")
    lt = t - 1
    e = ctx.esc
    yq, zq = f.cross(ctx.y), f.cross(ctx.z)
    z1 = ctx.fresh_to(ctx.cz, ctx.used_vertices())
    fans = ctx.make_fans(
        add=[("x", yq), ("x", zq), ("z", z1)],
        drop=[("x", e["5x", lt]), ("x", e["6x", lt])],
    )
    p1 = cat(ctx.z, rev(fans["x"][zq]), fans["x"][yq], ctx.y)
    region = ctx.region_h([ctx.bridge["5", lt], ctx.bridge["6", lt]])
    d1, d2 = link_two(
        f.g, (f.cross(ctx.x), f.cross(e["5y", lt])), (f.cross(e["6z", lt]), f.cross(z1)),
        within=region,
    )
    if d1[-1] == f.cross(e["6z", lt]):
        p2 = cat(ctx.x, d1, rev(fans["z"][e["6z", lt]]), fans["z"][z1], rev(d2), rev(fans["y"][e["5y", lt]]))
    else:
        p2 = cat(ctx.x, d1, rev(fans["z"][z1]), fans["z"][e["6z", lt]], rev(d2), rev(fans["y"][e["5y", lt]]))
    return ctx.assemble(fans, skip={("3", lt)}) + [p1, p2]


def _v_case32_xslack(ctx: _Ctx):
    f = ctx.frame
    r, s, t = ctx.counts
    if t < 1:
        raise _Skip("needs a shape-3 path to rebuild")
    lt = t - 1
    e = ctx.esc
    yq, zq = f.cross(ctx.y), f.cross(ctx.z)
    fans = ctx.make_fans(add=[("x", yq), ("x", zq)], drop=[("x", e["6x", lt])])
    u5 = ctx.bridge_path("5", lt, f.cross(e["5y", lt]), f.cross(e["5x", lt]))
    link = ctx.link_h(f.cross(ctx.x), f.cross(e["6z", lt]), [ctx.bridge["6", lt]])
    p1 = cat(
        fans["y"][e["5y", lt]], u5, rev(fans["x"][e["5x", lt]]),
        link, rev(fans["z"][e["6z", lt]]),
    )
    p2 = cat(ctx.y, rev(fans["x"][yq]), fans["x"][zq], ctx.z)
    return ctx.assemble(fans, skip={("3", lt)}) + [p1, p2]


def _v_pair_xy(ctx: _Ctx):
    """Extra path x ..fan.. y' y ..fan.. z' z (needs y' in x's copy and
    z' in y's copy)."""
    f = ctx.frame
    yq, zq = f.cross(ctx.y), f.cross(ctx.z)
    if f.copy_of(yq) != ctx.cx or f.copy_of(zq) != ctx.cy:
        raise _Skip("needs y' in x's copy and z' in y's copy")
    fans = ctx.make_fans(add=[("x", yq), ("y", zq)])
    extra = cat(fans["x"][yq], fans["y"][zq], ctx.z)
    return ctx.assemble(fans) + [extra]


def _v_case33_pair_xz(ctx: _Ctx):
    f = ctx.frame
    yq = f.cross(ctx.y)
    z1 = ctx.fresh_to(ctx.cz, ctx.used_vertices())
    fans = ctx.make_fans(add=[("x", yq), ("z", z1)])
    link = ctx.link_h(f.cross(ctx.x), f.cross(z1))
    extra = cat(ctx.y, rev(fans["x"][yq]), link, rev(fans["z"][z1]))
    return ctx.assemble(fans) + [extra]


def _v_case33_pair_yz(ctx: _Ctx):
    f = ctx.frame
    zq = f.cross(ctx.z)
    z1 = ctx.fresh_to(ctx.cz, ctx.used_vertices())
    fans = ctx.make_fans(add=[("y", zq), ("z", z1)])
    link = ctx.link_h(f.cross(ctx.x), f.cross(z1))
    extra = cat(ctx.x, link, rev(fans["z"][z1]), rev(fans["y"][zq]))
    return ctx.assemble(fans) + [extra]


def _v_case33_destroy_x(ctx: _Ctx):
    f = ctx.frame
    r, s, t = ctx.counts
    if s < 1:
        raise _Skip("needs a shape-2 path to rebuild")
    js = s - 1
    e = ctx.esc
    yq, zq = f.cross(ctx.y), f.cross(ctx.z)
    c4 = ctx.bridge["4", js]
    x1 = f.endpoint(ctx.cx, c4)
    if x1 in ctx.used_vertices():
        raise _Skip("forced escort already used")
    fans = ctx.make_fans(
        add=[("x", yq), ("x", x1), ("y", zq)],
        drop=[("x", e["3x", js]), ("y", e["4y", js])],
    )
    link3 = ctx.link_h(f.cross(ctx.x), f.cross(e["3z", js]), [ctx.bridge["3", js]])
    p1 = cat(ctx.y, rev(fans["x"][yq]), link3, rev(fans["z"][e["3z", js]]))
    link4 = f.connect_in([c4], f.cross(x1), f.cross(e["4z", js]))
    p2 = cat(fans["x"][x1], link4, rev(fans["z"][e["4z", js]]), rev(fans["y"][zq]))
    return ctx.assemble(fans, skip={("2", js)}) + [p1, p2]


def _v_case33_destroy_y(ctx: _Ctx):
    f = ctx.frame
    r, s, t = ctx.counts
    if t < 1:
        raise _Skip("needs a shape-3 path to rebuild")
    lt = t - 1
    e = ctx.esc
    yq, zq = f.cross(ctx.y), f.cross(ctx.z)
    used = ctx.used_vertices()
    w = ctx.fresh_to(ctx.cx, used | {yq})
    y1 = ctx.fresh_to(ctx.cy, used | {w})
    fans = ctx.make_fans(
        add=[("x", yq), ("x", w), ("y", y1), ("y", zq)],
        drop=[("x", e["5x", lt]), ("x", e["6x", lt]), ("y", e["5y", lt])],
    )
    region = ctx.region_h([ctx.bridge["6", lt]])
    d1, d2 = link_two(
        f.g, (f.cross(ctx.x), f.cross(w)), (f.cross(e["6z", lt]), f.cross(y1)), within=region
    )
    if d1[-1] == f.cross(e["6z", lt]):
        p1 = cat(ctx.y, rev(fans["x"][yq]), d1, rev(fans["z"][e["6z", lt]]))
        p2 = cat(fans["x"][w], d2, rev(fans["y"][y1]), fans["y"][zq], ctx.z)
    else:
        p1 = cat(ctx.y, rev(fans["x"][yq]), fans["x"][w], d2, rev(fans["z"][e["6z", lt]]))
        p2 = cat(ctx.x, d1, rev(fans["y"][y1]), fans["y"][zq], ctx.z)
    return ctx.assemble(fans, skip={("3", lt)}) + [p1, p2]


def _v_case33_destroy_z(ctx: _Ctx):
    f = ctx.frame
    r, s, t = ctx.counts
    if r < 1:
        raise _Skip("needs a shape-1 path to rebuild")
    ir = r - 1
    e = ctx.esc
    yq, zq = f.cross(ctx.y), f.cross(ctx.z)
    z1 = ctx.fresh_to(ctx.cz, ctx.used_vertices())
    fans = ctx.make_fans(
        add=[("x", yq), ("y", zq), ("z", z1)],
        drop=[("y", e["2y", ir]), ("z", e["2z", ir])],
    )
    link = ctx.link_h(f.cross(ctx.x), f.cross(z1))
    p1 = cat(ctx.y, rev(fans["x"][yq]), link, rev(fans["z"][z1]))
    u1 = ctx.bridge_path("1", ir, f.cross(e["1x", ir]), f.cross(e["1y", ir]))
    p2 = cat(fans["x"][e["1x", ir]], u1, rev(fans["y"][e["1y", ir]]), fans["y"][zq], ctx.z)
    return ctx.assemble(fans, skip={("1", ir)}) + [p1, p2]


def _v_case4b_xfan(ctx: _Ctx):
    # x' = z and z' = x: the xz cross edge closes the extra path directly
    f = ctx.frame
    yq = f.cross(ctx.y)
    fans = ctx.make_fans(add=[("x", yq)])
    extra = cat(ctx.y, rev(fans["x"][yq]), ctx.z)
    return ctx.assemble(fans) + [extra]


def _v_case4b_yz(ctx: _Ctx):
    f = ctx.frame
    used = ctx.used_vertices()
    z1 = ctx.fresh_to(ctx.cz, used)
    y1 = ctx.fresh_to(ctx.cy, used | {z1})
    fans = ctx.make_fans(add=[("z", z1), ("y", y1)])
    link = ctx.link_h(f.cross(z1), f.cross(y1))
    extra = cat(ctx.x, fans["z"][z1], link, rev(fans["y"][y1]))
    return ctx.assemble(fans) + [extra]


def _v_pair_xz_xq_in_cz(ctx: _Ctx):
    # x' in z's copy: extra = y y' ..xfan.. x x' ..zfan.. z
    f = ctx.frame
    yq, xq = f.cross(ctx.y), f.cross(ctx.x)
    if f.copy_of(xq) != ctx.cz:
        raise _Skip("needs x' in z's copy")
    fans = ctx.make_fans(add=[("x", yq), ("z", xq)])
    extra = cat(ctx.y, rev(fans["x"][yq]), rev(fans["z"][xq]))
    return ctx.assemble(fans) + [extra]


def _v_pair_yz_zq_in_cy(ctx: _Ctx):
    # x' in z's copy and z' in y's copy: extra = x x' ..zfan.. z z' ..yfan.. y
    f = ctx.frame
    xq, zq = f.cross(ctx.x), f.cross(ctx.z)
    if f.copy_of(xq) != ctx.cz or f.copy_of(zq) != ctx.cy:
        raise _Skip("needs x' in z's copy and z' in y's copy")
    fans = ctx.make_fans(add=[("z", xq), ("y", zq)])
    extra = cat(ctx.x, rev(fans["z"][xq]), rev(fans["y"][zq]))
    return ctx.assemble(fans) + [extra]


def _v_case4a_pair_xy(ctx: _Ctx):
    f = ctx.frame
    yq = f.cross(ctx.y)
    y1 = ctx.fresh_to(ctx.cy, ctx.used_vertices() | {yq})
    fans = ctx.make_fans(add=[("x", yq), ("y", y1)])
    link = ctx.link_h(f.cross(y1), f.cross(ctx.z))
    extra = cat(fans["x"][yq], fans["y"][y1], link, ctx.z)
    return ctx.assemble(fans) + [extra]


def _v_case4a_pair_yz(ctx: _Ctx):
    f = ctx.frame
    xq = f.cross(ctx.x)
    if f.copy_of(xq) != ctx.cz:
        raise _Skip("needs x' in z's copy")
    y1 = ctx.fresh_to(ctx.cy, ctx.used_vertices())
    fans = ctx.make_fans(add=[("z", xq), ("y", y1)])
    link = ctx.link_h(f.cross(ctx.z), f.cross(y1))
    extra = cat(ctx.x, rev(fans["z"][xq]), link, rev(fans["y"][y1]))
    return ctx.assemble(fans) + [extra]


def _v_case4c_destroy(ctx: _Ctx):
    f = ctx.frame
    r, s, t = ctx.counts
    if s < 1:
        raise _Skip("needs a shape-2 path to rebuild")
    js = s - 1
    e = ctx.esc
    yq, zq, xq = f.cross(ctx.y), f.cross(ctx.z), f.cross(ctx.x)
    fans = ctx.make_fans(
        add=[("x", yq), ("y", zq), ("z", xq)],
        drop=[("y", e["4y", js]), ("z", e["4z", js])],
    )
    u3 = ctx.bridge_path("3", js, f.cross(e["3x", js]), f.cross(e["3z", js]))
    p1 = cat(ctx.y, rev(fans["x"][yq]), fans["x"][e["3x", js]], u3, rev(fans["z"][e["3z", js]]))
    p2 = cat(ctx.x, rev(fans["z"][xq]), rev(fans["y"][zq]))
    return ctx.assemble(fans, skip={("2", js)}) + [p1, p2]

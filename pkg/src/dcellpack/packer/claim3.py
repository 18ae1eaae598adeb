"""Two-copies construction: x and y share a top-level copy, z sits in
another.

A helper vertex u (non-adjacent to x and y) stands in for z: the triple
{x, y, u} is packed recursively inside the shared copy, and each inner path
is rerouted at u's path edges: the hop u-w becomes w -> w' -> [bridge copy]
-> escort -> [fan arm] -> z, deleting u.  Paths where u was interior become
x..z..y paths; paths where u was a terminal keep their other two members
and end at z.

The +1 parity branch consumes the spare neighbors left by the exchange
lemma and dispatches on where the cross neighbors of x, y, z land.  Each
sub-case is a variant over shared machinery: extra or dropped fan targets,
one or two linking paths through the reserve region H, possibly one
destroyed-and-rebuilt base path.

Degenerate escorts fold in uniformly: a u-neighbor whose cross edge already
lands in z's copy feeds the fan directly, a cross edge landing on z itself
closes the path with no fan arm, and when z is a forced escort its "arm" is
the single vertex z.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ConstructionBugError, InfeasibleError
from ..graphcore import fan, link_pair_exact, link_two
from .base import Packing, SteinerTriple, cat, certified, rev
from .recursive import Frame, _local_graph, pack_inner, plus_one_needed


class _Skip(Exception):
    pass


@dataclass
class _Inner:
    """One inner path with u stripped and its reroute bookkeeping."""

    kind: str  # "term" (u was a terminal) or "mid" (u was interior)
    body: list[int]  # the path without u; mid bodies are oriented x first
    hops: list[int]  # u's former path neighbors, in body order


@dataclass
class _C3:
    frame: Frame
    orig: SteinerTriple
    x: int
    y: int
    z: int
    u: int
    spares: list[int] = field(default_factory=list)
    inners: list[_Inner] = field(default_factory=list)
    escort_of: dict = field(default_factory=dict)  # hop w -> fan target (or z)
    bridge_of: dict = field(default_factory=dict)  # hop w -> bridge copy or None
    h_copies: list = field(default_factory=list)

    @property
    def c0(self):
        return self.frame.copy_of(self.x)

    @property
    def c1(self):
        return self.frame.copy_of(self.z)

    def cross(self, v):
        return self.frame.cross(v)

    @property
    def budget(self):
        return self.frame.p.n + self.frame.p.k - 2

    @property
    def z_in_targets(self):
        return any(e == self.z for e in self.escort_of.values())

    def base_targets(self):
        return {e for e in self.escort_of.values() if e != self.z}

    def make_fan(self, add=(), drop=()):
        targets = self.base_targets()
        targets -= set(drop)
        for v in add:
            if v == self.z:
                raise _Skip("fan target equals root z")
            targets.add(v)
        if len(targets) > self.budget:
            raise _Skip(f"z-fan over budget ({len(targets)})")
        return fan(self.frame.g, self.z, targets, within=self.frame.copy_range(self.c1))

    def tail(self, w, zfan):
        """Route from hop w onward to z: cross edge, bridge, escort, arm."""
        wq = self.cross(w)
        if wq == self.z:
            return [self.z]
        esc = self.escort_of[w]
        if self.bridge_of[w] is None:  # cross edge lands in z's copy
            return rev(zfan[esc])
        ride = self.frame.connect_in([self.bridge_of[w]], wq, self.cross(esc))
        if esc == self.z:
            return ride + [self.z]
        return cat(ride, rev(zfan[esc]))

    def assemble(self, zfan, skip=frozenset()):
        out = []
        for idx, inner in enumerate(self.inners):
            if idx in skip:
                continue
            if inner.kind == "term":
                out.append(cat(inner.body, self.tail(inner.hops[0], zfan)))
            else:
                w1 = inner.hops[0]
                cut = inner.body.index(w1)
                out.append(
                    cat(
                        inner.body[: cut + 1],
                        self.tail(w1, zfan),
                        rev(self.tail(inner.hops[1], zfan)),
                        inner.body[cut + 1 :],
                    )
                )
        return out

    def fresh_to(self, used, pool=None):
        allowed = self.h_copies if pool is None else pool
        for c in sorted(allowed):
            w = self.frame.endpoint(self.c1, c)
            if w not in used:
                return w
        raise _Skip("no fresh escort in z's copy")

    def used_vertices(self):
        used = {self.x, self.y, self.z, self.u}
        used.update(self.escort_of.values())
        for inner in self.inners:
            used.update(inner.body)
        return used

    def c0_used(self):
        used = set()
        for inner in self.inners:
            used.update(inner.body)
        return used

    def link_h(self, a, b, extra_copies=()):
        return self.frame.connect_in(list(self.h_copies) + list(extra_copies), a, b)

    def region_h(self, extra_copies=()):
        return self.frame.region(list(self.h_copies) + list(extra_copies))

    def spare_adj(self, member, cross_in=None):
        for sp in self.spares:
            if not self.frame.g.has_edge(sp, member):
                continue
            if cross_in is not None and self.frame.copy_of(self.cross(sp)) not in cross_in:
                continue
            return sp
        raise _Skip("no spare adjacent to the required member")

    def zq_free_in_c0(self):
        zq = self.cross(self.z)
        return self.frame.copy_of(zq) == self.c0 and zq not in self.c0_used()


def claim_two_copies(frame: Frame, triple: SteinerTriple) -> Packing:
    p = frame.p
    plus = plus_one_needed(p.k, p.n)
    members = sorted(triple.as_tuple())
    copies = [frame.copy_of(m) for m in members]
    lone = next(m for m in members if copies.count(frame.copy_of(m)) == 1)
    pair = [m for m in members if m != lone]
    zv = lone
    c1 = frame.copy_of(zv)
    crossing = [m for m in pair if frame.copy_of(frame.cross(m)) == c1]
    if crossing:
        xv = crossing[0]
        yv = next(m for m in pair if m != xv)
    else:
        xv, yv = pair
    ctx = _C3(frame=frame, orig=triple, x=xv, y=yv, z=zv, u=-1)

    # helper u: in the shared copy, outside both closed neighborhoods, with
    # at least two of {x, y, u} in distinct second-level blocks
    g_sub = _local_graph(p.k - 1, p.n)
    sub2 = p.t[p.k - 2]
    x_loc, y_loc = frame.local(xv), frame.local(yv)
    blocked = set(g_sub.adj[x_loc]) | set(g_sub.adj[y_loc]) | {x_loc, y_loc}
    u_loc = None
    for cand in range(g_sub.n):
        if cand in blocked:
            continue
        if len({x_loc // sub2, y_loc // sub2, cand // sub2}) >= 2:
            u_loc = cand
            break
    if u_loc is None:
        raise ConstructionBugError("claim3-helper", "no helper vertex found")
    ctx.u = frame.lift(ctx.c0, u_loc)

    inner_paths, spares = pack_inner(
        frame, ctx.c0, (x_loc, y_loc, u_loc), want_spares=2 if plus else 0
    )
    ctx.spares = spares

    # strip u from every inner path, recording its hop neighbors
    for path in inner_paths:
        pos = path.index(ctx.u)
        if pos in (0, len(path) - 1):
            body = path[1:] if pos == 0 else path[:-1]
            hop = path[1] if pos == 0 else path[-2]
            if body[-1] != hop:
                body = rev(body)
            ctx.inners.append(_Inner(kind="term", body=body, hops=[hop]))
        else:
            oriented = path if path[0] == xv else rev(path)
            pos = oriented.index(ctx.u)
            body = oriented[:pos] + oriented[pos + 1 :]
            ctx.inners.append(
                _Inner(kind="mid", body=body, hops=[oriented[pos - 1], oriented[pos + 1]])
            )
    ctx.inners.sort(key=lambda i: (i.kind != "term", i.body))

    # bridge copies are forced: each hop's cross edge decides where it lands
    bridge_copies = set()
    for inner in ctx.inners:
        for w in inner.hops:
            wq = frame.cross(w)
            cw = frame.copy_of(wq)
            if wq == zv:
                ctx.escort_of[w] = zv
                ctx.bridge_of[w] = None
            elif cw == ctx.c1:
                ctx.escort_of[w] = wq
                ctx.bridge_of[w] = None
            else:
                if cw in bridge_copies:
                    raise ConstructionBugError("claim3-bridges", f"copy {cw} reused")
                bridge_copies.add(cw)
                ctx.escort_of[w] = frame.endpoint(ctx.c1, cw)
                ctx.bridge_of[w] = cw
    ctx.h_copies = [
        c
        for c in range(frame.ncopies)
        if c not in {ctx.c0, ctx.c1} and c not in bridge_copies
    ]
    if len(ctx.base_targets()) > ctx.budget:
        raise ConstructionBugError("claim3-budget", "fan demand exceeds degree")

    if not plus:
        zfan = ctx.make_fan()
        return certified(frame.g, triple, ctx.assemble(zfan), "claim3-passthrough")

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


def _case_plan(ctx: _C3):
    if ctx.frame.copy_of(ctx.cross(ctx.x)) == ctx.c1:
        return "claim3-case1", [
            ("direct-edge", _v1_direct_edge),
            ("edge-zslack", _v1_edge_zslack),
            ("spare-x", _v1_spare_x),
            ("via-zq", _v1_via_zq),
            ("two-arms", _v1_two_arms),
            ("rebuild-x", _v1_rebuild("x")),
            ("rebuild-y", _v1_rebuild("y")),
            ("mid-rebuild-y", _v1_mid_rebuild("y")),
            ("mid-rebuild-x", _v1_mid_rebuild("x")),
        ]
    plan = []
    for side in "xy":
        plan.append((f"spare-cross-z-{side}", _v2_spare_cross_z(side)))
    for side in "xy":
        plan.append((f"spare-h-zq-{side}", _v2_spare_h_zq(side)))
    for side in "xy":
        plan.append((f"spare-h-fresh-{side}", _v2_spare_h_fresh(side)))
    plan += [("zq-fresh", _v2_zq_fresh), ("two-fresh", _v2_two_fresh)]
    for side in "xy":
        plan.append((f"spare-c1-{side}", _v2_spare_c1(side)))
    for side in "xy":
        plan.append((f"spare-c1-rebuild-{side}", _v2_spare_c1_rebuild(side)))
    for side in "xy":
        plan.append((f"zq-c0-free-{side}", _v2_zq_c0_free(side)))
    plan += [
        ("zq-c0-span-x", _v2_zq_c0_span("x")),
        ("zq-c0-span-y", _v2_zq_c0_span("y")),
        ("zq-c0-cross-x", _v2_zq_c0_cross("x")),
        ("zq-c0-cross-y", _v2_zq_c0_cross("y")),
        ("zq-c0-term-x", _v2_zq_c0_term("x")),
        ("zq-c0-term-y", _v2_zq_c0_term("y")),
    ]
    return "claim3-case2", plan


# -- case 1: x' lands in z's copy -------------------------------------------


def _v1_direct_edge(ctx: _C3):
    # x' = z: y -> [H] -> spare -> x -> z over the xz cross edge
    if ctx.cross(ctx.x) != ctx.z:
        raise _Skip("needs x' = z")
    v = ctx.spare_adj(ctx.x, cross_in=ctx.h_copies)
    zfan = ctx.make_fan()
    link = ctx.link_h(ctx.cross(ctx.y), ctx.cross(v))
    extra = cat(ctx.y, link, v, ctx.x, ctx.z)
    return ctx.assemble(zfan) + [extra]


def _v1_edge_zslack(ctx: _C3):
    # x' = z: x z ..arm.. w1 -> [H] -> y' y
    if ctx.cross(ctx.x) != ctx.z:
        raise _Skip("needs x' = z")
    w1 = ctx.fresh_to(ctx.used_vertices())
    zfan = ctx.make_fan(add=[w1])
    link = ctx.link_h(ctx.cross(w1), ctx.cross(ctx.y))
    extra = cat(ctx.x, zfan[w1], link, ctx.y)
    return ctx.assemble(zfan) + [extra]


def _v1_spare_x(ctx: _C3):
    # z ..arm.. x' x spare -> [H] -> y' y
    xq = ctx.cross(ctx.x)
    if xq == ctx.z:
        raise _Skip("x' = z handled elsewhere")
    v = ctx.spare_adj(ctx.x, cross_in=ctx.h_copies)
    zfan = ctx.make_fan(add=[xq])
    link = ctx.link_h(ctx.cross(v), ctx.cross(ctx.y))
    extra = cat(zfan[xq], ctx.x, v, link, ctx.y)
    return ctx.assemble(zfan) + [extra]


def _v1_via_zq(ctx: _C3):
    # x x' ..arm.. z z' -> [H] -> y' y
    xq = ctx.cross(ctx.x)
    if xq == ctx.z:
        raise _Skip("x' = z handled elsewhere")
    if ctx.z_in_targets:
        raise _Skip("z' consumed as a forced escort")
    zq = ctx.cross(ctx.z)
    if ctx.frame.copy_of(zq) not in ctx.h_copies:
        raise _Skip("z' not in the reserve region")
    zfan = ctx.make_fan(add=[xq])
    link = ctx.link_h(zq, ctx.cross(ctx.y))
    extra = cat(ctx.x, rev(zfan[xq]), link, ctx.y)
    return ctx.assemble(zfan) + [extra]


def _v1_two_arms(ctx: _C3):
    # x x' ..arm.. z ..arm.. w1 -> [H] -> y' y
    xq = ctx.cross(ctx.x)
    if xq == ctx.z:
        raise _Skip("x' = z handled elsewhere")
    w1 = ctx.fresh_to(ctx.used_vertices() | {xq})
    zfan = ctx.make_fan(add=[xq, w1])
    link = ctx.link_h(ctx.cross(w1), ctx.cross(ctx.y))
    extra = cat(ctx.x, rev(zfan[xq]), zfan[w1], link, ctx.y)
    return ctx.assemble(zfan) + [extra]


def _v1_rebuild(side):
    """Destroy one u-terminal inner path whose co-terminal is the spare's
    member; its z-escort budget funds the x' fan arm."""

    def build(ctx: _C3):
        f = ctx.frame
        xq = ctx.cross(ctx.x)
        if xq == ctx.z:
            raise _Skip("x' = z handled elsewhere")
        if ctx.z_in_targets:
            raise _Skip("z' consumed as a forced escort")
        zq = ctx.cross(ctx.z)
        if f.copy_of(zq) not in ctx.h_copies:
            raise _Skip("z' not in the reserve region")
        a = ctx.x if side == "x" else ctx.y
        b = ctx.y if side == "x" else ctx.x
        v = ctx.spare_adj(a, cross_in=ctx.h_copies)
        pick = None
        for idx, inner in enumerate(ctx.inners):
            if inner.kind == "term" and inner.body[0] == a and ctx.escort_of[inner.hops[0]] != ctx.z:
                pick = idx
                break
        if pick is None:
            raise _Skip(f"no droppable u-terminal path co-terminal at that member")
        inner = ctx.inners[pick]
        w = inner.hops[0]
        bpos = inner.body.index(b)
        span_ab = inner.body[: bpos + 1]  # a .. b, avoiding the hop w
        span_bw = inner.body[bpos:]  # b .. w
        if side == "x":
            # w-side rerouted straight through H; its escort is freed
            zfan = ctx.make_fan(add=[xq], drop=[ctx.escort_of[w]])
            p1 = cat(rev(span_ab), rev(zfan[xq]))
            cw = ctx.bridge_of[w]
            d1, d2 = link_two(
                f.g,
                (ctx.cross(b), ctx.cross(w)),
                (ctx.cross(v), zq),
                within=ctx.region_h([cw] if cw is not None else []),
            )
            if d1[-1] == ctx.cross(v):
                p2 = cat(a, v, rev(d1), span_bw, d2, ctx.z)
            else:
                p2 = cat(a, v, rev(d2), rev(span_bw), d1, ctx.z)
        else:
            # w-side kept (reused via its tail); one H-link suffices
            zfan = ctx.make_fan(add=[xq])
            p1 = cat(span_ab, rev(zfan[xq]))
            link = ctx.link_h(ctx.cross(v), zq)
            p2 = cat(a, v, link, rev(ctx.tail(w, zfan)), rev(span_bw))
        return ctx.assemble(zfan, skip={pick}) + [p1, p2]

    return build


def _v1_mid_rebuild(side):
    """Destroy one interior-type inner path.  One hop side is kept and fed
    by the x' fan arm (closing x's connections with its cross edge); the
    other side's copy fragment re-enters through the reserve region paired
    with the spare's and z's cross edges."""

    def build(ctx: _C3):
        f = ctx.frame
        xq = ctx.cross(ctx.x)
        if xq == ctx.z:
            raise _Skip("x' = z handled elsewhere")
        if ctx.z_in_targets:
            raise _Skip("z' consumed as a forced escort")
        zq = ctx.cross(ctx.z)
        if f.copy_of(zq) not in ctx.h_copies:
            raise _Skip("z' not in the reserve region")
        a = ctx.y if side == "y" else ctx.x  # member carrying the spare
        v = ctx.spare_adj(a, cross_in=ctx.h_copies)
        for idx, inner in enumerate(ctx.inners):
            if inner.kind != "mid":
                continue
            w1, w2 = inner.hops
            cut = inner.body.index(w1)
            span_x = inner.body[: cut + 1]  # x .. w1
            span_y = inner.body[cut + 1 :]  # w2 .. y
            if ctx.escort_of[w1] == ctx.z or ctx.escort_of[w2] == ctx.z:
                continue
            if ctx.bridge_of[w1] is None:
                continue  # the re-entry rides through w1's bridge copy
            region = ctx.region_h([ctx.bridge_of[w1]])
            try:
                if side == "y":
                    # p1: x x' ..arm.. z ..tail(w2).. w2 ..span.. y
                    zfan = ctx.make_fan(add=[xq], drop=[ctx.escort_of[w1]])
                    p1 = cat(ctx.x, rev(zfan[xq]), rev(ctx.tail(w2, zfan)), span_y)
                    d1, d2 = link_pair_exact(
                        f.g,
                        (ctx.cross(w1), ctx.cross(ctx.y)),
                        (ctx.cross(v), zq),
                        within=region,
                    )
                    p2 = cat(span_x, d1, ctx.y, v, d2, ctx.z)
                else:
                    # p1: y ..span.. w2 ..tail.. z ..arm.. x' x
                    zfan = ctx.make_fan(add=[xq], drop=[ctx.escort_of[w1]])
                    p1 = cat(rev(span_y), ctx.tail(w2, zfan), zfan[xq], ctx.x)
                    d1, d2 = link_pair_exact(
                        f.g,
                        (zq, ctx.cross(w1)),
                        (ctx.cross(v), ctx.cross(ctx.y)),
                        within=region,
                    )
                    p2 = cat(ctx.z, d1, rev(span_x), v, d2, ctx.y)
            except InfeasibleError:
                continue
            return ctx.assemble(zfan, skip={idx}) + [p1, p2]
        raise _Skip("no interior-type inner path admits the rebuild")

    return build


# -- case 2: both pair crosses land in the reserve region --------------------


def _v2_spare_cross_z(side):
    def build(ctx: _C3):
        # a spare of the chosen member crosses straight onto z
        f = ctx.frame
        a = ctx.x if side == "x" else ctx.y
        b = ctx.y if side == "x" else ctx.x
        v = None
        for sp in ctx.spares:
            if ctx.cross(sp) == ctx.z and f.g.has_edge(sp, a):
                v = sp
                break
        if v is None:
            raise _Skip("no spare crossing onto z")
        zfan = ctx.make_fan()
        link = ctx.link_h(ctx.cross(a), ctx.cross(b))
        extra = cat(ctx.z, v, a, link, b)
        return ctx.assemble(zfan) + [extra]

    return build


def _v2_spare_h_zq(side):
    def build(ctx: _C3):
        # spare crossing into H, z' free in H: pair them through H
        f = ctx.frame
        if ctx.z_in_targets:
            raise _Skip("z' consumed as a forced escort")
        zq = ctx.cross(ctx.z)
        if f.copy_of(zq) not in ctx.h_copies:
            raise _Skip("z' not in the reserve region")
        a = ctx.x if side == "x" else ctx.y
        b = ctx.y if side == "x" else ctx.x
        v = ctx.spare_adj(a, cross_in=ctx.h_copies)
        zfan = ctx.make_fan()
        d1, d2 = link_two(
            f.g, (ctx.cross(b), zq), (ctx.cross(v), ctx.cross(a)), within=ctx.region_h()
        )
        if d1[-1] == ctx.cross(v):
            extra = cat(b, d1, v, a, rev(d2), ctx.z)
        else:
            extra = cat(b, d1, a, v, rev(d2), ctx.z)
        return ctx.assemble(zfan) + [extra]

    return build


def _v2_spare_h_fresh(side):
    def build(ctx: _C3):
        # spare crossing into H plus one fresh fan target
        f = ctx.frame
        a = ctx.x if side == "x" else ctx.y
        b = ctx.y if side == "x" else ctx.x
        v = ctx.spare_adj(a, cross_in=ctx.h_copies)
        w1 = ctx.fresh_to(ctx.used_vertices() | {v})
        zfan = ctx.make_fan(add=[w1])
        d1, d2 = link_two(
            f.g,
            (ctx.cross(b), ctx.cross(w1)),
            (ctx.cross(v), ctx.cross(a)),
            within=ctx.region_h(),
        )
        if d1[-1] == ctx.cross(v):
            extra = cat(b, d1, v, a, rev(d2), rev(zfan[w1]))
        else:
            extra = cat(b, d1, a, v, rev(d2), rev(zfan[w1]))
        return ctx.assemble(zfan) + [extra]

    return build


def _v2_zq_fresh(ctx: _C3):
    # z' free in H plus one fresh fan target
    f = ctx.frame
    if ctx.z_in_targets:
        raise _Skip("z' consumed as a forced escort")
    zq = ctx.cross(ctx.z)
    if f.copy_of(zq) not in ctx.h_copies:
        raise _Skip("z' not in the reserve region")
    w1 = ctx.fresh_to(ctx.used_vertices())
    zfan = ctx.make_fan(add=[w1])
    d1, d2 = link_two(
        f.g, (ctx.cross(ctx.y), ctx.cross(ctx.x)), (zq, ctx.cross(w1)), within=ctx.region_h()
    )
    if d1[-1] == zq:
        extra = cat(ctx.y, d1, zfan[w1], rev(d2), ctx.x)
    else:
        extra = cat(ctx.y, d1, rev(zfan[w1]), zq, rev(d2), ctx.x)
    return ctx.assemble(zfan) + [extra]


def _v2_two_fresh(ctx: _C3):
    # two fresh fan targets crossing into H
    f = ctx.frame
    used = ctx.used_vertices()
    w1 = ctx.fresh_to(used)
    w2 = ctx.fresh_to(used | {w1})
    zfan = ctx.make_fan(add=[w1, w2])
    d1, d2 = link_two(
        f.g,
        (ctx.cross(ctx.y), ctx.cross(ctx.x)),
        (ctx.cross(w1), ctx.cross(w2)),
        within=ctx.region_h(),
    )
    wa, wb = (w1, w2) if d1[-1] == ctx.cross(w1) else (w2, w1)
    extra = cat(ctx.y, d1, rev(zfan[wa]), zfan[wb], rev(d2), ctx.x)
    return ctx.assemble(zfan) + [extra]


def _v2_spare_c1(side):
    def build(ctx: _C3):
        # spare crossing into z's copy: its landing feeds the fan directly
        a = ctx.x if side == "x" else ctx.y
        b = ctx.y if side == "x" else ctx.x
        v = ctx.spare_adj(a, cross_in=[ctx.c1])
        vq = ctx.cross(v)
        if vq == ctx.z:
            raise _Skip("covered by spare-cross-z")
        zfan = ctx.make_fan(add=[vq])
        link = ctx.link_h(ctx.cross(a), ctx.cross(b))
        extra = cat(zfan[vq], v, a, link, b)
        return ctx.assemble(zfan) + [extra]

    return build


def _v2_spare_c1_rebuild(side):
    def build(ctx: _C3):
        # spare landing in z's copy with no fan headroom: rebuild one
        # u-terminal path, freeing its escort budget for the spare's landing
        f = ctx.frame
        a = ctx.x if side == "x" else ctx.y
        b = ctx.y if side == "x" else ctx.x
        v = ctx.spare_adj(a, cross_in=[ctx.c1])
        vq = ctx.cross(v)
        if vq == ctx.z:
            raise _Skip("covered by spare-cross-z")
        if ctx.z_in_targets:
            raise _Skip("z' consumed as a forced escort")
        zq = ctx.cross(ctx.z)
        if f.copy_of(zq) not in ctx.h_copies:
            raise _Skip("z' not in the reserve region")
        pick = None
        for idx, inner in enumerate(ctx.inners):
            if inner.kind == "term" and inner.body[0] == a and ctx.escort_of[inner.hops[0]] != ctx.z:
                pick = idx
                break
        if pick is None:
            raise _Skip("no droppable u-terminal path on this side")
        inner = ctx.inners[pick]
        w = inner.hops[0]
        zfan = ctx.make_fan(add=[vq], drop=[ctx.escort_of[w]])
        bpos = inner.body.index(b)
        span_ab = inner.body[: bpos + 1]
        span_bw = inner.body[bpos:]
        p1 = cat(rev(span_ab), v, rev(zfan[vq]))
        cw = ctx.bridge_of[w]
        d1, d2 = link_two(
            f.g,
            (ctx.cross(b), ctx.cross(w)),
            (zq, ctx.cross(a)),
            within=ctx.region_h([cw] if cw is not None else []),
        )
        if d1[-1] == zq:
            p2 = cat(ctx.z, rev(d1), span_bw, d2, a)
        else:
            p2 = cat(ctx.z, rev(d2), rev(span_bw), d1, a)
        return ctx.assemble(zfan, skip={pick}) + [p1, p2]

    return build


def _v2_zq_c0_free(side):
    def build(ctx: _C3):
        # z' lands unused in the shared copy: hop back over a free neighbor
        # of z' whose own cross reaches the reserve region
        f = ctx.frame
        zq = ctx.cross(ctx.z)
        if not ctx.zq_free_in_c0():
            raise _Skip("z' not free in the shared copy")
        a = ctx.x if side == "x" else ctx.y
        b = ctx.y if side == "x" else ctx.x
        used_c0 = ctx.c0_used()
        v = ctx.spare_adj(a, cross_in=ctx.h_copies)
        w2 = None
        for cand in f.g.neighbors(zq):
            if f.copy_of(cand) != ctx.c0 or cand in used_c0 or cand == v:
                continue
            if f.copy_of(ctx.cross(cand)) in ctx.h_copies:
                w2 = cand
                break
        if w2 is None:
            raise _Skip("no usable neighbor of z' in the shared copy")
        zfan = ctx.make_fan()
        d1, d2 = link_two(
            f.g,
            (ctx.cross(b), ctx.cross(w2)),
            (ctx.cross(v), ctx.cross(a)),
            within=ctx.region_h(),
        )
        if d1[-1] == ctx.cross(v):
            extra = cat(b, d1, v, a, rev(d2), w2, zq, ctx.z)
        else:
            extra = cat(b, d1, a, v, rev(d2), w2, zq, ctx.z)
        return ctx.assemble(zfan) + [extra]

    return build


def _v2_zq_c0_span(side):
    """z' meets the member-to-hop span of an interior-type inner path:
    destroy that path, reach z' along its span, and rebuild the rest via
    the freed bridge copy."""

    def build(ctx: _C3):
        f = ctx.frame
        zq = ctx.cross(ctx.z)
        if f.copy_of(zq) != ctx.c0:
            raise _Skip("z' not in the shared copy")
        a = ctx.x if side == "x" else ctx.y
        b = ctx.y if side == "x" else ctx.x
        v = ctx.spare_adj(a, cross_in=ctx.h_copies)
        zq_free = ctx.zq_free_in_c0() and zq != v
        for idx, inner in enumerate(ctx.inners):
            if inner.kind != "mid":
                continue
            w1, w2 = inner.hops
            near, far = (w1, w2) if side == "x" else (w2, w1)
            if ctx.escort_of[near] == ctx.z or ctx.bridge_of[near] is None:
                continue  # rebuilt entry needs a bridged escort
            cut = inner.body.index(w1)
            span_a = inner.body[: cut + 1] if side == "x" else rev(inner.body[cut + 1 :])
            span_far = inner.body[cut + 1 :] if side == "x" else rev(inner.body[: cut + 1])
            # span_a runs a..near; span_far runs far..b
            head = None
            if zq in span_a[1:]:
                head = span_a[: span_a.index(zq) + 1] + [ctx.z]
            elif zq_free:
                hits = [w for w in span_a[1:] if f.g.has_edge(zq, w)]
                if hits:
                    head = span_a[: span_a.index(hits[0]) + 1] + [zq, ctx.z]
                elif f.g.has_edge(zq, ctx.u):
                    head = span_a + [ctx.u, zq, ctx.z]
            if head is None:
                continue
            esc_near = ctx.escort_of[near]
            zfan = ctx.make_fan()
            d1, d2 = link_two(
                f.g,
                (ctx.cross(b), ctx.cross(esc_near)),
                (ctx.cross(v), ctx.cross(a)),
                within=ctx.region_h([ctx.bridge_of[near]]),
            )
            tail_part = cat(rev(zfan[esc_near]), rev(ctx.tail(far, zfan)), span_far)
            if d1[-1] == ctx.cross(v):
                p1 = cat(b, d1, v, head)
                p2 = cat(a, rev(d2), tail_part)
            else:
                p1 = cat(b, d1, head)
                p2 = cat(a, v, rev(d2), tail_part)
            return ctx.assemble(zfan, skip={idx}) + [p1, p2]
        raise _Skip("no interior-type span meets z'")

    return build


def _v2_zq_c0_cross(span_side):
    """z' meets one side-span of an interior-type inner path while the
    spare hangs off the OTHER member: exit over z' from the span's member,
    and rebuild with a path threading spare and a fresh escort through two
    fixed-pairing links."""

    def build(ctx: _C3):
        f = ctx.frame
        zq = ctx.cross(ctx.z)
        if f.copy_of(zq) != ctx.c0:
            raise _Skip("z' not in the shared copy")
        m_span = ctx.x if span_side == "x" else ctx.y  # member whose span exits
        m_other = ctx.y if span_side == "x" else ctx.x
        v = ctx.spare_adj(m_other, cross_in=ctx.h_copies)
        zq_free = ctx.zq_free_in_c0() and zq != v
        for idx, inner in enumerate(ctx.inners):
            if inner.kind != "mid":
                continue
            w1, w2 = inner.hops
            near, far = (w1, w2) if span_side == "x" else (w2, w1)
            cut = inner.body.index(w1)
            span = inner.body[: cut + 1] if span_side == "x" else rev(inner.body[cut + 1 :])
            # span runs m_span .. near
            head = None
            if zq in span[1:]:
                head = span[: span.index(zq) + 1] + [ctx.z]
            elif zq_free:
                hits = [w for w in span[1:] if f.g.has_edge(zq, w)]
                if hits:
                    head = span[: span.index(hits[0]) + 1] + [zq, ctx.z]
            if head is None:
                continue
            esc_near = ctx.escort_of[near]
            if esc_near == ctx.z:
                continue  # its fan slot cannot be freed for the fresh escort
            try:
                w5 = ctx.fresh_to(ctx.used_vertices() | {v})
            except _Skip:
                continue
            zfan = ctx.make_fan(add=[w5], drop=[esc_near])
            # p1: span-member .. z' z ..tail(far).. far ..span.. other member
            other_span = (
                inner.body[cut + 1 :] if span_side == "x" else rev(inner.body[: cut + 1])
            )
            p1 = cat(head, rev(ctx.tail(far, zfan)), other_span)
            try:
                d1, d2 = link_pair_exact(
                    f.g,
                    (ctx.cross(m_span), ctx.cross(v)),
                    (ctx.cross(m_other), ctx.cross(w5)),
                    within=ctx.region_h(),
                )
            except InfeasibleError:
                continue
            p2 = cat(m_span, d1, v, m_other, d2, rev(zfan[w5]))
            return ctx.assemble(zfan, skip={idx}) + [p1, p2]
        raise _Skip("no cross-side span meets z'")

    return build


def _v2_zq_c0_term(side):
    """z' meets the member span of a u-terminal inner path: destroy it,
    exit over z' early, and re-enter the rest of the span from the reserve
    region via a later span vertex."""

    def build(ctx: _C3):
        f = ctx.frame
        zq = ctx.cross(ctx.z)
        if f.copy_of(zq) != ctx.c0:
            raise _Skip("z' not in the shared copy")
        a = ctx.x if side == "x" else ctx.y
        b = ctx.y if side == "x" else ctx.x
        v = ctx.spare_adj(a, cross_in=ctx.h_copies)
        zq_free = ctx.zq_free_in_c0() and zq != v
        for idx, inner in enumerate(ctx.inners):
            if inner.kind != "term" or inner.body[0] != a:
                continue
            w = inner.hops[0]
            body = inner.body
            bpos = body.index(b)
            span = body[: bpos + 1]  # a .. b
            marks = []
            if zq in span[1:-1]:
                marks = [(span.index(zq), [ctx.z])]
            elif zq_free:
                marks = [
                    (i, [zq, ctx.z])
                    for i in range(1, bpos)
                    if f.g.has_edge(zq, span[i])
                ]
            for mpos, closing in marks:
                for wpos in range(mpos + 1, bpos):
                    w4 = span[wpos]
                    if f.copy_of(ctx.cross(w4)) not in ctx.h_copies:
                        continue
                    zfan = ctx.make_fan()
                    d1, d2 = link_two(
                        f.g,
                        (ctx.cross(b), ctx.cross(w4)),
                        (ctx.cross(v), ctx.cross(a)),
                        within=ctx.region_h(),
                    )
                    head = span[: mpos + 1] + closing
                    rest = cat(body[wpos:], ctx.tail(w, zfan))
                    if d1[-1] == ctx.cross(v):
                        p1 = cat(b, d1, v, head)
                        p2 = cat(a, rev(d2), rest)
                    else:
                        p1 = cat(b, d1, head)
                        p2 = cat(a, v, rev(d2), rest)
                    return ctx.assemble(zfan, skip={idx}) + [p1, p2]
        raise _Skip("no terminal-type span meets z'")

    return build

"""Realizability of characteristic data and construction of skeletons.

The construction assembles rotation lists directly from the nesting
structure of each marked set; planarity is then certified by the face count
in ``validate_skeleton``.

Geometry used throughout: the outer disk carries L1 and drains into N from
the north, the annulus between the homoclinic loop and gamma carries L2 on
its upper side and Aplus on its lower side, and the inner disk carries
Aminus.  A boundary list is in *disk order* when it is read with the disk on
the left.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .configuration import Group
from .marked import (
    CharacteristicData,
    MarkedCircleSet,
    MarkedIntervalSet,
    NestingOrder,
    interleaving_classes,
    non_synchronized,
    partial_order_leq,
    validate_characteristic,
    validate_marked,
)
from .skeleton import (
    CycleNode,
    CycleSide,
    Designated,
    Endpoint,
    EdgeEnd,
    OrbitEdge,
    SingularVertex,
    SkeletonGraph,
)


class NotRealizable(ValueError):
    def __init__(self, failed: Sequence[str], messages: Sequence[str]):
        self.failed = tuple(failed)
        self.messages = tuple(messages)
        super().__init__("not realizable: " + "; ".join(messages))


# ---------------------------------------------------------- realizability


@dataclass(frozen=True)
class RealizabilityReport:
    """Verdict per condition.  ``basepoint`` is the cut point on the Aplus
    circle chosen for the construction (the beta1 point when a2 = 1)."""

    realizable: bool
    failed: tuple[str, ...]
    messages: tuple[str, ...]
    checked: tuple[str, ...]
    basepoint: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.realizable


def gap_midpoints(points: Sequence[Fraction]) -> list[Fraction]:
    """One point in each gap of a circle set, ascending from 0."""
    pts = sorted(points)
    if not pts:
        return [Fraction(0)]
    mids = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    mids.append(((pts[-1] + pts[0] + 1) / 2) % 1)
    return sorted(mids)


def _phi(p: Fraction):
    return lambda x: (x - p) % 1


def _liaison_consecutive(D: CharacteristicData, p: Fraction) -> bool:
    phi = _phi(p)
    pairs = [(D.L2.points[b], phi(D.Aplus.points[c])) for b, c in D.liaison_points()]
    return all(not (zb < zb2) or fc <= fc2 for zb, fc in pairs for zb2, fc2 in pairs)


def _liaison_maximal(D: CharacteristicData, p: Fraction) -> bool:
    top = partial_order_leq(D.L2).maximal()
    bottom = partial_order_leq(D.Aplus, p).maximal()
    return all(x in top and y in bottom for x, y in D.liaison)


def _liaison_in_pairs(D: CharacteristicData, p: Fraction) -> bool:
    """Literal adjacency reading: each liaison point b_i ~ c_r has b_{i-1}
    related to c_r or c_{r-1}, or b_{i+1} related to c_r or c_{r+1}."""
    phi = _phi(p)
    order = sorted(range(len(D.Aplus.points)), key=lambda c: phi(D.Aplus.points[c]))
    rank = {c: r for r, c in enumerate(order)}
    rel = {(b, rank[c]) for b, c in D.liaison_points()}
    return all(
        (i - 1, r) in rel or (i - 1, r - 1) in rel or (i + 1, r) in rel or (i + 1, r + 1) in rel
        for i, r in rel
    )


def _two_classes(s) -> bool:
    return any(len(block) == 2 for block in s.classes)


def _extended_plus(D: CharacteristicData) -> list[Fraction]:
    pts = list(D.Aplus.points)
    if D.config.a2 == 1 and D.beta1 is not None:
        pts.append(D.beta1)
    return pts


def check_realizable(D: CharacteristicData) -> RealizabilityReport:
    """Evaluate the realizability conditions for the configuration group of D.

    Labels: "1" non-interleaving, "2" consecutive liaison, "3" maximality,
    "4" liaison in pairs, "5" admissible beta1 point, "6" no 2-classes,
    "genericity" distinct Delta values, "structure" malformed data.
    Conditions 2, 3, 4 and 5 share the basepoint p, so they are checked as a
    chain and only the first failing link is reported.
    """
    structure = validate_characteristic(D, interleaving=False)
    if structure:
        return RealizabilityReport(False, ("structure",), tuple(structure), ("structure",))
    group = D.config.group
    failed: list[str] = []
    messages: list[str] = []
    checked = ["1"]

    crossing = [name for name in ("L1", "L2", "Aplus", "Aminus") if interleaving_classes(getattr(D, name))]
    if crossing:
        failed.append("1")
        messages.append(f"condition 1: two-point classes interleave in {', '.join(crossing)}")

    gaps = gap_midpoints(D.Aplus.points)
    chain: list[tuple[str, object, str]] = [
        ("2", _liaison_consecutive, "points in liaison are not arranged consecutively for any basepoint"),
    ]
    if group in (Group.A2one, Group.A2zeroA3one):
        chain.append(("3", _liaison_maximal, "a class in liaison is not maximal"))
    if group is Group.A2zeroA3one:
        chain.append(("4", _liaison_in_pairs, "points of L2 are not in liaison in pairs"))
    candidates = gaps
    basepoint = None
    alive = list(gaps)
    for label, test, text in chain:
        checked.append(label)
        alive = [p for p in alive if test(D, p)]
        if not alive:
            failed.append(label)
            messages.append(f"condition {label}: {text}")
            break
    else:
        basepoint = alive[0]
    if group is Group.A2one:
        checked.append("5")
        candidates = [D.beta1] if D.beta1 is not None else gaps
        good = [p for p in candidates if _liaison_consecutive(D, p) and _liaison_maximal(D, p)]
        if basepoint is not None:
            if good:
                basepoint = good[0]
            else:
                basepoint = None
                failed.append("5")
                messages.append("condition 5: conditions 2 and 3 fail at the beta1 point")
    if group is Group.A3zero:
        checked.append("6")
        if _two_classes(D.L2) or _two_classes(D.Aplus):
            failed.append("6")
            messages.append("condition 6: L2 or Aplus has a two-element class")

    checked.append("genericity")
    if not non_synchronized(MarkedCircleSet(_extended_plus(D)), D.Aminus):
        failed.append("genericity")
        messages.append("genericity: Malta-Palis condition fails (repeated Delta value)")
    ok = not failed
    return RealizabilityReport(ok, tuple(failed), tuple(messages), tuple(checked), basepoint if ok else None)


# ---------------------------------------------------------------- builder


class _Builder:
    def __init__(self) -> None:
        self.kind: dict[str, str] = {}
        self.label: dict[str, Optional[str]] = {}
        self.rot: dict[str, list[EdgeEnd]] = {}
        self.edges: list[OrbitEdge] = []

    def vertex(self, kind: str, label: Optional[str] = None) -> str:
        vid = f"v{len(self.kind)}"
        self.kind[vid] = kind
        self.label[vid] = label
        self.rot[vid] = []
        return vid

    def edge(self, source: Endpoint, target: Endpoint, role: str = "separatrix") -> str:
        eid = f"e{len(self.edges)}"
        self.edges.append(OrbitEdge(eid, source, target, role))
        return eid

    def vertices(self) -> tuple[SingularVertex, ...]:
        return tuple(SingularVertex(v, self.kind[v], self.label[v], tuple(self.rot[v])) for v in self.kind)


class _Hub:
    """Where boundary points of a disk attach: N, or one side of a cycle.

    ``ends[pos]`` collects the hub-side edge end for each disk position.
    """

    def __init__(self, b: _Builder, at: Endpoint, labels: dict[int, str]):
        self.b, self.at, self.labels = b, at, labels
        self.ends: dict[int, EdgeEnd] = {}

    def connect(self, pos: int, v: str, outward: bool) -> EdgeEnd:
        """Edge between saddle v and the hub at ``pos``; returns v's end."""
        if outward:
            e = self.b.edge(v, self.at)
            self.ends[pos] = (e, "t")
            return (e, "s")
        e = self.b.edge(self.at, v)
        self.ends[pos] = (e, "s")
        return (e, "t")


@dataclass
class _Item:
    lo: int
    hi: int
    cls: int
    children: list["_Item"] = field(default_factory=list)

    @property
    def chord(self) -> bool:
        return self.lo != self.hi


def _forest(classes_at: Sequence[Sequence[int]]) -> list[_Item]:
    """Nesting forest of classes given by disk positions, children sorted."""
    items = [_Item(min(block), max(block), c) for c, block in enumerate(classes_at)]
    by_span = sorted(items, key=lambda it: it.hi - it.lo)
    roots = []
    for it in items:
        parent = next((o for o in by_span if o.chord and o.lo < it.lo and it.hi < o.hi), None)
        (parent.children if parent else roots).append(it)
    for it in items:
        it.children.sort(key=lambda x: x.lo)
    return sorted(roots, key=lambda x: x.lo)


def _node_kind(outward: bool) -> str:
    return "repeller" if outward else "attractor"


def _link(b: _Builder, region: str, v: str, outward: bool) -> tuple[EdgeEnd, EdgeEnd]:
    """Edge between a region node and saddle v: (region end, v end)."""
    if outward:
        e = b.edge(region, v)
        return (e, "s"), (e, "t")
    e = b.edge(v, region)
    return (e, "t"), (e, "s")


def _chord(b: _Builder, it: _Item, hub: _Hub, outward: bool) -> str:
    """Saddle for a 2-point class with its lobe; rotation lacks the outer end."""
    names = sorted(filter(None, (hub.labels.get(it.lo), hub.labels.get(it.hi))), key=lambda t: (len(t), t))
    s = b.vertex("saddle", ",".join(names) or None)
    x = hub.connect(it.lo, s, outward)
    region = b.vertex(_node_kind(outward))
    r_end, s_inner = _link(b, region, s, outward)
    b.rot[region] = [r_end] + [_child(b, ch, hub, outward, region) for ch in it.children]
    y = hub.connect(it.hi, s, outward)
    b.rot[s] = [x, s_inner, y]
    return s


def _gadget(b: _Builder, pos: int, hub: _Hub, outward: bool, region: Optional[str]) -> Optional[EdgeEnd]:
    """Saddle for a 1-point class: one separatrix to the boundary point, the
    opposite one to a new node, the side ones to the region node and a new
    node (or both to one new node when the region has none)."""
    s = b.vertex("saddle", hub.labels.get(pos))
    port = hub.connect(pos, s, outward)
    if region is not None:
        reg_end, side1 = _link(b, region, s, outward)
        extra = b.vertex(_node_kind(outward))
        x_end, side3 = _link(b, extra, s, outward)
        b.rot[extra] = [x_end]
    else:
        reg_end = None
        extra = b.vertex(_node_kind(outward))
        x1, side1 = _link(b, extra, s, outward)
        x3, side3 = _link(b, extra, s, outward)
        b.rot[extra] = [x1, x3]
    far = b.vertex(_node_kind(not outward))
    if outward:
        e = b.edge(s, far)
        opposite, far_end = (e, "s"), (e, "t")
    else:
        e = b.edge(far, s)
        opposite, far_end = (e, "t"), (e, "s")
    b.rot[far] = [far_end]
    b.rot[s] = [port, side1, opposite, side3]
    return reg_end


def _child(b: _Builder, it: _Item, hub: _Hub, outward: bool, region: str) -> EdgeEnd:
    if it.chord:
        s = _chord(b, it, hub, outward)
        reg_end, s_end = _link(b, region, s, outward)
        b.rot[s].append(s_end)
        return reg_end
    return _gadget(b, it.lo, hub, outward, region)


def _disk(b: _Builder, classes_at: Sequence[Sequence[int]], hub: _Hub, outward: bool) -> str:
    """Fill a disk whose boundary points (disk order) attach to ``hub``.
    Returns the node of the region containing the gap after the last point."""
    root = b.vertex(_node_kind(outward))
    b.rot[root] = [_child(b, it, hub, outward, root) for it in _forest(classes_at)]
    return root


def _positions(order: Sequence[int]) -> dict[int, int]:
    """Point index -> disk position, given point indices in disk order."""
    return {p: i for i, p in enumerate(order)}


def _classes_at(s, pos: dict[int, int]) -> list[list[int]]:
    return [[pos[p] for p in block] for block in s.classes]


def realize_disk(boundary: MarkedCircleSet | MarkedIntervalSet, outward: bool = True) -> SkeletonGraph:
    """Disk fragment whose boundary (a hyperbolic cycle) carries ``boundary``.

    ``outward=True`` makes the flow leave the disk, so regions hold repellers;
    otherwise it enters and regions hold attractors.  Points are attached
    along the boundary in descending coordinate order, which is the
    counter-clockwise order with our clockwise-ascending convention.
    """
    problems = validate_marked(boundary)
    if problems:
        raise NotRealizable(("1",), problems)
    b = _Builder()
    n = len(boundary.points)
    order = sorted(range(n), key=lambda i: boundary.points[i], reverse=True)
    pos = _positions(order)
    side = CycleSide("boundary", "inner")
    hub = _Hub(b, side, {})
    root = _disk(b, _classes_at(boundary, pos), hub, outward)
    ends = [hub.ends[i] for i in range(n)]
    if not ends:
        e = b.edge(root, side, "ordinary") if outward else b.edge(side, root, "ordinary")
        b.rot[root].append((e, "s") if outward else (e, "t"))
        ends = [(e, "t") if outward else (e, "s")]
    cycle = CycleNode("boundary", "hyperbolic", 1, None, "attract" if outward else "repel", (), tuple(ends))
    return SkeletonGraph(b.vertices(), (cycle,), tuple(b.edges))


# --------------------------------------------------------------- realize


def _sorted_by(points: Sequence[Fraction], key=lambda x: x) -> list[int]:
    return sorted(range(len(points)), key=lambda i: key(points[i]))


def realize(D: CharacteristicData) -> SkeletonGraph:
    """Skeleton of a PC-HC field whose characteristic data is D."""
    report = check_realizable(D)
    if not report:
        raise NotRealizable(report.failed, report.messages)
    p = report.basepoint
    c = D.config
    group = c.group
    b = _Builder()
    N = b.vertex("saddle_node", "N")
    h = b.edge(N, N, "homoclinic")

    # Outer disk: L1 drains into N; disk order is L1 descending.
    l1_rank = _sorted_by(D.L1.points)
    l1_order = list(reversed(l1_rank))
    pos1 = _positions(l1_order)
    hub1 = _Hub(b, N, {pos1[i]: f"A{r + 1}" for r, i in enumerate(l1_rank)})
    r_plus = _disk(b, _classes_at(D.L1, pos1), hub1, True)
    beta2 = b.edge(r_plus, N)
    b.rot[r_plus].append((beta2, "s"))

    # Inner disk inside gamma.
    gamma_in = CycleSide("gamma", "inner")
    inner_out = c.a3 == 1
    am_rank = _sorted_by(D.Aminus.points)
    am_order = list(reversed(am_rank))
    posm = _positions(am_order)
    hubm = _Hub(b, gamma_in, {posm[i]: f"D{r + 1}" for r, i in enumerate(am_rank)})
    r_minus = _disk(b, _classes_at(D.Aminus, posm), hubm, inner_out)
    n = len(D.Aminus.points)
    inner_ends = [hubm.ends[i] for i in range(n)]
    if not inner_ends:
        if inner_out:
            e = b.edge(r_minus, gamma_in, "ordinary")
            b.rot[r_minus].append((e, "s"))
            inner_ends = [(e, "t")]
        else:
            e = b.edge(gamma_in, r_minus, "ordinary")
            b.rot[r_minus].append((e, "t"))
            inner_ends = [(e, "s")]

    # Annulus between the loop and gamma, cut at p.
    gamma_out = CycleSide("gamma", "outer")
    phi = _phi(p)
    ap_rank = _sorted_by(D.Aplus.points, phi)
    posb = _positions(ap_rank)
    l2_rank = _sorted_by(D.L2.points)
    l2_order = list(reversed(l2_rank))
    post = _positions(l2_order)
    bottom = _Hub(b, gamma_out, {posb[i]: f"C{r + 1}" for r, i in enumerate(_sorted_by(D.Aplus.points))})
    top = _Hub(b, N, {post[i]: f"B{r + 1}" for r, i in enumerate(l2_rank)})
    bottom_out = c.a3 == 0
    annulus = _Annulus(b, D, bottom, top, bottom_out, posb, post, group)
    cut_gamma_end, n_tail, extra_region = annulus.build()

    m = len(D.L2.points)
    rot_n = [(h, "s"), (beta2, "t")]
    rot_n += [hub1.ends[pos1[i]] for i in l1_rank]
    rot_n.append((h, "t"))
    rot_n += [top.ends[post[i]] for i in l2_rank]
    rot_n += n_tail
    b.rot[N] = rot_n
    assert len(top.ends) == m

    k = len(D.Aplus.points)
    outer_ends = [cut_gamma_end] + [bottom.ends[i] for i in reversed(range(k))]
    gamma = CycleNode(
        "gamma", "parabolic", 1 if c.a1 else -1,
        "repel" if c.a3 else "attract", "attract" if c.a3 else "repel",
        tuple(outer_ends), tuple(inner_ends),
    )
    loop = CycleNode("gamma_h", "homoclinic_loop", 1, loop_edge=h)
    designated = Designated(N=N, gamma="gamma", homoclinic="gamma_h", beta1=annulus.beta1, beta2=beta2)
    del extra_region
    return SkeletonGraph(b.vertices(), (gamma, loop), tuple(b.edges), designated)


class _Annulus:
    """Steps 1-4 in the annulus: lobes on both sides, then the liaison curves
    and the cut through the central region."""

    def __init__(self, b: _Builder, D: CharacteristicData, bottom: _Hub, top: _Hub,
                 bottom_out: bool, posb: dict[int, int], post: dict[int, int], group: Group):
        self.b, self.D, self.bottom, self.top = b, D, bottom, top
        self.bottom_out = bottom_out
        self.group = group
        self.broots = _forest(_classes_at(D.Aplus, posb))
        self.troots = _forest(_classes_at(D.L2, post))
        self.beta1: Optional[str] = None

    def _pairs(self) -> list[tuple[_Item, _Item]]:
        bcls = {it.cls: it for it in self.broots}
        tcls = {it.cls: it for it in self.troots}
        pairs = sorted(((bcls[y], tcls[x]) for x, y in self.D.liaison), key=lambda pr: pr[0].lo)
        tops = [t.lo for _, t in pairs]
        if tops != sorted(tops, reverse=True):
            raise AssertionError("liaison curves would cross")
        return pairs

    def build(self) -> tuple[EdgeEnd, list[EdgeEnd], Optional[str]]:
        b = self.b
        # Step 1 and 2: lobes, leaving each maximal chord's outer end open.
        chord_saddle: dict[int, str] = {}
        for it in self.broots:
            if it.chord:
                chord_saddle[id(it)] = _chord(b, it, self.bottom, self.bottom_out)
        for it in self.troots:
            if it.chord:
                chord_saddle[id(it)] = _chord(b, it, self.top, True)

        pairs = self._pairs()
        t = len(pairs)
        paired_b = {id(bi): s for s, (bi, _) in enumerate(pairs, 1)}
        paired_t = {id(ti): s for s, (_, ti) in enumerate(pairs, 1)}
        blos = [bi.lo for bi, _ in pairs]
        tlos = [ti.lo for _, ti in pairs]

        def rect_bottom(it: _Item) -> int:
            return sum(1 for lo in blos if lo < it.lo)

        def rect_top(it: _Item) -> int:
            return sum(1 for lo in tlos if lo > it.lo)

        a3zero = self.group is Group.A3zero
        rect: list[Optional[str]] = [None] * (t + 1)
        if a3zero:
            rect[0] = b.vertex("repeller")
            for s in range(1, t):
                rect[s] = b.vertex("repeller")
            rect[t] = rect[0]
        seq_b: list[list[EdgeEnd]] = [[] for _ in range(t + 1)]
        seq_t: list[list[EdgeEnd]] = [[] for _ in range(t + 1)]
        west: dict[int, EdgeEnd] = {}  # rectangle s-1 side of liaison saddle s
        east: dict[int, EdgeEnd] = {}  # rectangle s side

        # Step 4: liaison curves.
        for s, (bi, ti) in enumerate(pairs, 1):
            if bi.chord and ti.chord:
                raise AssertionError("two-point classes on both sides cannot be in liaison")
            if bi.chord:
                sd = chord_saddle[id(bi)]
                b.rot[sd].append(self.top.connect(ti.lo, sd, True))
            elif ti.chord:
                sd = chord_saddle[id(ti)]
                b.rot[sd].append(self.bottom.connect(bi.lo, sd, self.bottom_out))
            else:
                sd = b.vertex("saddle", f"{self.top.labels[ti.lo]}={self.bottom.labels[bi.lo]}")
                c_end = self.bottom.connect(bi.lo, sd, self.bottom_out)
                b_end = self.top.connect(ti.lo, sd, True)
                if a3zero:
                    w_reg, w_end = _link(b, rect[s - 1], sd, True)
                    e_reg, e_end = _link(b, rect[s], sd, True)
                    west[s], east[s] = w_reg, e_reg
                    b.rot[sd] = [c_end, e_end, b_end, w_end]
                else:
                    r = b.vertex("repeller")
                    a = b.vertex("attractor")
                    e1, e2 = b.edge(r, sd), b.edge(sd, a)
                    b.rot[r], b.rot[a] = [(e1, "s")], [(e2, "t")]
                    b.rot[sd] = [c_end, b_end, (e1, "t"), (e2, "s")]

        # Maximal classes outside the liaison.
        for it in self.broots:
            if id(it) in paired_b:
                continue
            s = rect_bottom(it)
            if it.chord:
                sd = chord_saddle[id(it)]
                far = b.vertex(_node_kind(self.bottom_out))
                far_end, sd_end = _link(b, far, sd, self.bottom_out)
                b.rot[sd].append(sd_end)
                b.rot[far] = [far_end]
            else:
                end = _gadget(b, it.lo, self.bottom, self.bottom_out, rect[s] if a3zero else None)
                if end is not None:
                    seq_b[s].append(end)
        for it in self.troots:
            if id(it) in paired_t:
                continue
            s = rect_top(it)
            if it.chord:
                sd = chord_saddle[id(it)]
                far = b.vertex("repeller")
                far_end, sd_end = _link(b, far, sd, True)
                b.rot[sd].append(sd_end)
                b.rot[far] = [far_end]
            else:
                end = _gadget(b, it.lo, self.top, True, rect[s] if a3zero else None)
                if end is not None:
                    seq_t[s].append(end)

        # The cut and beta1.
        N, gamma_out = self.top.at, self.bottom.at
        if self.group is Group.A2one:
            self.beta1 = b.edge(gamma_out, N)
            return (self.beta1, "s"), [(self.beta1, "t")], None
        if self.group is Group.A2zeroA3one:
            cut = b.edge(gamma_out, N, "ordinary")
            rb = b.vertex("repeller")
            self.beta1 = b.edge(rb, N)
            b.rot[rb] = [(self.beta1, "s")]
            return (cut, "s"), [(cut, "t"), (self.beta1, "t")], rb
        rb = rect[0]
        self.beta1 = b.edge(rb, N)
        cut = b.edge(rb, gamma_out, "ordinary")
        for s in range(1, t):
            b.rot[rect[s]] = seq_b[s] + [west[s + 1]] + seq_t[s] + [east[s]]
        first = seq_b[0] + ([west[1]] if t else []) + seq_t[0]
        last = (seq_t[t] + [east[t]] + seq_b[t]) if t else []
        b.rot[rb] = [(cut, "s")] + first + [(self.beta1, "s")] + last
        return (cut, "t"), [(self.beta1, "t")], rb

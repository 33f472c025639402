"""Separatrix skeletons: typed singular points, orbit edges, closed orbits and
a rotation system fixing the embedding in the sphere.

Conventions
-----------
* An edge end is ``(edge_id, "s")`` for the source end or ``(edge_id, "t")``
  for the target end.  Every end is listed exactly once, either in the
  rotation of a vertex or in a side list of a cycle.
* Vertex rotations are counter-clockwise.  Cycle side lists are also read
  counter-clockwise along the cycle, so the outer list is the order seen
  while walking the cycle with its interior on the left.
* The homoclinic loop is an ordinary edge from N to N with role
  ``homoclinic``; its cycle node only records its orientation.
* At N the rotation reads ``h_out, beta2, L1..., h_in, L2..., beta1`` with
  possibly an ordinary edge just before beta1; L1 and L2 appear in ascending
  zeta order.
* Circle coordinates ascend clockwise around gamma on both sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Union

from .configuration import Configuration, ConfigurationError
from .marked import CharacteristicData, MarkedCircleSet, MarkedIntervalSet
from .planar import PlanarMap, check_consistency

VERTEX_KINDS = ("saddle", "saddle_node", "attractor", "repeller")
CYCLE_KINDS = ("parabolic", "homoclinic_loop", "hyperbolic")
EDGE_ROLES = ("separatrix", "homoclinic", "ordinary")
SIDE_ATTRIBUTES = ("attract", "repel")

EdgeEnd = tuple[str, str]


class SkeletonError(ValueError):
    """Structural problem that prevents reading data off a skeleton."""


@dataclass(frozen=True, order=True)
class CycleSide:
    cycle: str
    side: str  # "outer" or "inner"

    def __str__(self) -> str:
        return f"{self.cycle}/{self.side}"


Endpoint = Union[str, CycleSide]


@dataclass(frozen=True)
class SingularVertex:
    id: str
    kind: str
    label: Optional[str] = None
    rotation: tuple[EdgeEnd, ...] = ()


@dataclass(frozen=True)
class OrbitEdge:
    id: str
    source: Endpoint
    target: Endpoint
    role: str = "separatrix"

    def endpoint(self, end: str) -> Endpoint:
        return self.source if end == "s" else self.target


@dataclass(frozen=True)
class CycleNode:
    id: str
    kind: str
    orientation: int = 1
    outer: Optional[str] = None
    inner: Optional[str] = None
    outer_ends: tuple[EdgeEnd, ...] = ()
    inner_ends: tuple[EdgeEnd, ...] = ()
    loop_edge: Optional[str] = None

    def side_attribute(self, side: str) -> Optional[str]:
        return self.outer if side == "outer" else self.inner

    def side_ends(self, side: str) -> tuple[EdgeEnd, ...]:
        return self.outer_ends if side == "outer" else self.inner_ends


@dataclass(frozen=True)
class Designated:
    N: Optional[str] = None
    gamma: Optional[str] = None
    homoclinic: Optional[str] = None
    beta1: Optional[str] = None
    beta2: Optional[str] = None


@dataclass(frozen=True)
class SkeletonGraph:
    vertices: tuple[SingularVertex, ...]
    cycles: tuple[CycleNode, ...]
    edges: tuple[OrbitEdge, ...]
    designated: Designated = field(default_factory=Designated)

    @cached_property
    def vertex(self) -> dict[str, SingularVertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def cycle(self) -> dict[str, CycleNode]:
        return {c.id: c for c in self.cycles}

    @cached_property
    def edge(self) -> dict[str, OrbitEdge]:
        return {e.id: e for e in self.edges}


def other_end(end: EdgeEnd) -> EdgeEnd:
    return (end[0], "t" if end[1] == "s" else "s")


# ------------------------------------------------------------- planar map


def planar_map(g: SkeletonGraph) -> PlanarMap:
    """Derived planar map in which every cycle becomes a ring of vertices.

    Each attachment gets its own ring vertex, outer attachments first and
    inner ones after them, in stored order.  The two sides of a cycle bound
    different faces, so interleaving them along the ring does not change
    the embedding.
    """
    rotation: dict = {}
    twin: dict = {}
    for v in g.vertices:
        rotation[v.id] = [("e",) + end for end in v.rotation]
    for c in g.cycles:
        if c.kind == "homoclinic_loop":
            continue
        slots = [("outer", e) for e in c.outer_ends] + [("inner", e) for e in c.inner_ends]
        if not slots:
            slots = [("anchor", None)]
        q = len(slots)
        for i, (side, end) in enumerate(slots):
            node = ("ring", c.id, i)
            to_next = ("r", c.id, i, "s")
            to_prev = ("r", c.id, (i - 1) % q, "t")
            rot = []
            if side == "outer":
                rot.append(("e",) + end)
            rot.append(to_next)
            if side == "inner":
                rot.append(("e",) + end)
            rot.append(to_prev)
            rotation[node] = rot
            twin[to_next] = ("r", c.id, i, "t")
            twin[("r", c.id, i, "t")] = to_next
    for e in g.edges:
        twin[("e", e.id, "s")] = ("e", e.id, "t")
        twin[("e", e.id, "t")] = ("e", e.id, "s")
    return PlanarMap(rotation, twin)


# ------------------------------------------------------------- validation


def _end_locations(g: SkeletonGraph) -> tuple[dict[EdgeEnd, Endpoint], list[str]]:
    where: dict[EdgeEnd, Endpoint] = {}
    problems = []

    def put(end: EdgeEnd, at: Endpoint) -> None:
        if end in where:
            problems.append(f"edge end {end[0]}:{end[1]} listed at {where[end]} and {at}")
        where[end] = at

    for v in g.vertices:
        for end in v.rotation:
            put(tuple(end), v.id)
    for c in g.cycles:
        for side in ("outer", "inner"):
            for end in c.side_ends(side):
                put(tuple(end), CycleSide(c.id, side))
    return where, problems


def _is_in(end: EdgeEnd) -> bool:
    return end[1] == "t"


def validate_skeleton(g: SkeletonGraph, pc_hc: bool = True) -> list[str]:
    """List of violated invariants; empty iff ``g`` is a valid skeleton.

    With ``pc_hc=False`` the checks specific to PC-HC portraits (unique N,
    parabolic cycle, homoclinic loop, designated elements) are skipped, which
    is how disk fragments are validated.
    """
    out: list[str] = []
    ids = [v.id for v in g.vertices] + [c.id for c in g.cycles] + [e.id for e in g.edges]
    if len(set(ids)) != len(ids):
        out.append("duplicate ids")
    for v in g.vertices:
        if v.kind not in VERTEX_KINDS:
            out.append(f"vertex {v.id}: unknown kind {v.kind!r}")
    for c in g.cycles:
        if c.kind not in CYCLE_KINDS:
            out.append(f"cycle {c.id}: unknown kind {c.kind!r}")
        if c.orientation not in (1, -1):
            out.append(f"cycle {c.id}: orientation must be +1 or -1")
    for e in g.edges:
        if e.role not in EDGE_ROLES:
            out.append(f"edge {e.id}: unknown role {e.role!r}")

    where, problems = _end_locations(g)
    out.extend(problems)
    for e in g.edges:
        for end in ("s", "t"):
            at = e.endpoint(end)
            if isinstance(at, CycleSide):
                if at.cycle not in g.cycle:
                    out.append(f"edge {e.id}: unknown cycle {at.cycle}")
            elif at not in g.vertex:
                out.append(f"edge {e.id}: unknown vertex {at}")
            if where.get((e.id, end)) != at:
                out.append(f"edge {e.id}: {'source' if end == 's' else 'target'} end not listed at {at}")
    for end in where:
        if end[0] not in g.edge:
            out.append(f"rotation refers to unknown edge {end[0]}")
    if out:
        return out

    for v in g.vertices:
        kinds = [_is_in(end) for end in v.rotation]
        if not kinds:
            out.append(f"vertex {v.id} is isolated")
        elif v.kind == "saddle":
            if len(kinds) != 4 or any(kinds[i] == kinds[(i + 1) % 4] for i in range(4)):
                out.append(f"saddle {v.id}: needs 4 separatrices alternating in/out")
        elif v.kind == "attractor" and not all(kinds):
            out.append(f"attractor {v.id}: has an outgoing edge")
        elif v.kind == "repeller" and any(kinds):
            out.append(f"repeller {v.id}: has an incoming edge")

    for c in g.cycles:
        for side in ("outer", "inner"):
            attr = c.side_attribute(side)
            ends = c.side_ends(side)
            if ends and attr not in SIDE_ATTRIBUTES:
                out.append(f"cycle {c.id}: {side} side has attachments but no attract/repel attribute")
                continue
            for end in ends:
                wanted = "attract" if _is_in(end) else "repel"
                if attr != wanted:
                    out.append(f"edge {end[0]} {'enters' if _is_in(end) else 'leaves'} "
                               f"{c.id}/{side}, which is set to {attr}")
        if c.kind == "parabolic" and {c.outer, c.inner} != {"attract", "repel"}:
            out.append(f"parabolic cycle {c.id}: one side must attract and the other repel")
        if c.kind == "homoclinic_loop":
            e = g.edge.get(c.loop_edge or "")
            if e is None or e.source != e.target or isinstance(e.source, CycleSide) or e.role != "homoclinic":
                out.append(f"homoclinic loop {c.id}: loop_edge must be a homoclinic edge from a vertex to itself")
            if c.outer_ends or c.inner_ends:
                out.append(f"homoclinic loop {c.id}: attachments belong on the saddle-node")

    if pc_hc:
        out.extend(_pc_hc_violations(g))
    elif any(v.kind == "saddle_node" for v in g.vertices):
        out.append("fragment contains a saddle-node")

    if out:
        return out
    pm = planar_map(g)
    out.extend(check_consistency(pm.rotation, pm.twin))
    if out:
        return out
    comps = pm.components()
    if comps != 1:
        out.append(f"skeleton has {comps} connected components")
    chi = pm.euler_characteristic()
    if chi != 2:
        faces = len(pm.faces())
        out.append(f"not planar: V - E + F = {len(pm.rotation)} - {pm.n_edges} + {faces} = {chi}")
    return out


def _pc_hc_violations(g: SkeletonGraph) -> list[str]:
    out = []
    nodes = [v for v in g.vertices if v.kind == "saddle_node"]
    parabolic = [c for c in g.cycles if c.kind == "parabolic"]
    loops = [c for c in g.cycles if c.kind == "homoclinic_loop"]
    if len(nodes) != 1:
        out.append(f"expected exactly one saddle-node, found {len(nodes)}")
    if len(parabolic) != 1:
        out.append(f"expected exactly one parabolic cycle, found {len(parabolic)}")
    if len(loops) != 1:
        out.append(f"expected exactly one homoclinic loop, found {len(loops)}")
    d = g.designated
    if nodes and d.N != nodes[0].id:
        out.append("designated N is not the saddle-node")
    if parabolic and d.gamma != parabolic[0].id:
        out.append("designated gamma is not the parabolic cycle")
    if loops and d.homoclinic != loops[0].id:
        out.append("designated homoclinic loop is wrong")
    for name in ("beta1", "beta2"):
        eid = getattr(d, name)
        if eid not in g.edge:
            out.append(f"designated {name} is missing")
        elif g.edge[eid].target != d.N or g.edge[eid].role != "separatrix":
            out.append(f"{name} must be a separatrix ending at N")
    if out:
        return out
    N = g.vertex[d.N]
    loop = g.edge[g.cycle[d.homoclinic].loop_edge]
    if loop.source != N.id:
        out.append("homoclinic loop does not pass through N")
        return out
    outs = [end for end in N.rotation if not _is_in(end)]
    if outs != [(loop.id, "s")]:
        out.append("N must have exactly one outgoing end, the start of the homoclinic loop")
        return out
    rot = list(N.rotation)
    i = rot.index((loop.id, "s"))
    if rot[i - 1] != (d.beta1, "t") or rot[(i + 1) % len(rot)] != (d.beta2, "t"):
        out.append("beta1 and beta2 must flank the start of the homoclinic loop at N")
    return out


def is_valid(g: SkeletonGraph, pc_hc: bool = True) -> bool:
    return not validate_skeleton(g, pc_hc)


# ------------------------------------------------------------- extraction


def _require(g: SkeletonGraph) -> Designated:
    d = g.designated
    missing = [n for n in ("N", "gamma", "homoclinic", "beta1") if getattr(d, n) is None]
    if missing:
        raise SkeletonError(f"missing designated elements: {', '.join(missing)}")
    if d.N not in g.vertex or d.gamma not in g.cycle or d.homoclinic not in g.cycle or d.beta1 not in g.edge:
        raise SkeletonError("designated elements refer to unknown ids")
    return d


def extract_configuration(g: SkeletonGraph) -> Configuration:
    """Read a1 a2 a3 from cycle orientations, the source of beta1 and gamma's outer side."""
    d = _require(g)
    gamma, loop = g.cycle[d.gamma], g.cycle[d.homoclinic]
    a1 = int(gamma.orientation == loop.orientation)
    a2 = int(g.edge[d.beta1].source == CycleSide(gamma.id, "outer"))
    a3 = int(gamma.outer == "repel")
    try:
        return Configuration(a1, a2, a3)
    except ConfigurationError as exc:
        raise SkeletonError(str(exc)) from exc


def _sectors(g: SkeletonGraph, d: Designated) -> tuple[list[EdgeEnd], list[EdgeEnd]]:
    """Ends at N strictly between h_out and h_in, then strictly between h_in and h_out."""
    loop = g.cycle[d.homoclinic].loop_edge
    rot = list(g.vertex[d.N].rotation)
    if (loop, "s") not in rot or (loop, "t") not in rot:
        raise SkeletonError("homoclinic loop is not attached to N")
    i = rot.index((loop, "s"))
    rot = rot[i:] + rot[:i]
    j = rot.index((loop, "t"))
    return rot[1:j], rot[j + 1:]


def _partner(g: SkeletonGraph, end: EdgeEnd) -> Optional[str]:
    """The saddle at the far end of an edge, if any."""
    e = g.edge[end[0]]
    far = e.endpoint(other_end(end)[1])
    if isinstance(far, str) and g.vertex[far].kind == "saddle":
        return far
    return None


def _classes(keys: list[Optional[str]]) -> list[list[int]]:
    blocks: dict[str, list[int]] = {}
    out: list[list[int]] = []
    for i, k in enumerate(keys):
        if k is None:
            out.append([i])
        elif k in blocks:
            blocks[k].append(i)
        else:
            blocks[k] = [i]
            out.append(blocks[k])
    for block in out:
        if len(block) > 2:
            raise SkeletonError("a saddle sends more than two separatrices to one transversal")
    return out


def _separatrix_ends(g: SkeletonGraph, ends: Iterable[EdgeEnd], skip: set[str]) -> list[EdgeEnd]:
    return [e for e in ends if g.edge[e[0]].role == "separatrix" and e[0] not in skip]


def extract_characteristic_data(g: SkeletonGraph) -> CharacteristicData:
    """Characteristic data read off the embedding, with canonical coordinates.

    Interval points get evenly spaced coordinates in their order.  The outer
    circle list (including beta1 when it leaves gamma) gets i/k, and the
    inner list gets j/(k n) + 1/(2 k n), which keeps all differences distinct
    so the result is always non-synchronized.
    """
    d = _require(g)
    config = extract_configuration(g)
    gamma = g.cycle[d.gamma]
    skip = {d.beta1, d.beta2 or ""}
    first, second = _sectors(g, d)
    l1_ends = [e for e in _separatrix_ends(g, first, skip) if _is_in(e)]
    l2_ends = [e for e in _separatrix_ends(g, second, skip) if _is_in(e)]
    outer = list(reversed(_separatrix_ends(g, gamma.outer_ends, set())))
    inner = list(reversed(_separatrix_ends(g, gamma.inner_ends, set())))
    beta_pos = None
    if config.a2 == 1:
        beta_pos = outer.index((d.beta1, "s"))
    ap_ends = [e for e in outer if e[0] != d.beta1]

    k_all, n = len(outer), len(inner)
    circle = [Fraction(i, k_all) for i in range(k_all)]
    ap_coords = [c for i, c in enumerate(circle) if i != beta_pos]
    scale = max(k_all, 1) * max(n, 1)
    am_coords = [Fraction(2 * j + 1, 2 * scale) for j in range(n)]

    l1, l2 = len(l1_ends), len(l2_ends)
    keys_l1 = [_partner(g, e) for e in l1_ends]
    keys_l2 = [_partner(g, e) for e in l2_ends]
    keys_ap = [_partner(g, e) for e in ap_ends]
    keys_am = [_partner(g, e) for e in inner]
    L2 = MarkedIntervalSet([Fraction(j + 1, l2 + 1) for j in range(l2)], _classes(keys_l2))
    Aplus = MarkedCircleSet(ap_coords, _classes(keys_ap))
    liaison = []
    for x, block in enumerate(L2.classes):
        s = keys_l2[block[0]]
        if s is None:
            continue
        for y, other in enumerate(Aplus.classes):
            if keys_ap[other[0]] == s:
                liaison.append((x, y))
    return CharacteristicData(
        config=config,
        L1=MarkedIntervalSet([Fraction(i + 1, l1 + 1) - 1 for i in range(l1)], _classes(keys_l1)),
        L2=L2,
        Aplus=Aplus,
        Aminus=MarkedCircleSet(am_coords, _classes(keys_am)),
        liaison=tuple(liaison),
        beta1=circle[beta_pos] if beta_pos is not None else None,
    )


# ------------------------------------------------------------------ ELBS


@dataclass(frozen=True)
class Support:
    """A subgraph of a skeleton: vertices, edges, cycles and faces."""

    vertices: frozenset[str]
    edges: frozenset[str]
    cycles: frozenset[str]
    faces: frozenset[str]


def face_ids(g: SkeletonGraph) -> dict[str, list]:
    """Faces of the derived planar map keyed by their least half-edge."""
    out = {}
    for face in planar_map(g).faces():
        key = min(":".join(map(str, h[1:])) for h in face)
        out[key] = face
    return out


def winding_region(g: SkeletonGraph) -> frozenset[str]:
    """Faces swept by orbits that leave gamma's outer side and end at N.

    These are the faces touching both gamma from outside and the sector of
    N facing gamma.  Empty when gamma attracts on that side.
    """
    d = _require(g)
    gamma = g.cycle[d.gamma]
    if gamma.outer != "repel":
        return frozenset()
    loop = g.cycle[d.homoclinic].loop_edge
    rot = list(g.vertex[d.N].rotation)
    i = rot.index((loop, "t"))
    j = rot.index((loop, "s"))
    span = (j - i) % len(rot)
    n_side = {("e",) + rot[(i + s) % len(rot)] for s in range(span)}
    q = len(gamma.outer_ends)
    outer_prev = {("r", gamma.id, (s - 1) % (q + len(gamma.inner_ends)), "t") for s in range(q)}
    found = []
    for key, face in face_ids(g).items():
        hs = set(face)
        if hs & n_side and hs & outer_prev:
            found.append(key)
    return frozenset(found)


def compute_elbs(g: SkeletonGraph) -> Support:
    """The homoclinic loop, gamma, N, every separatrix ending at N (except
    beta2) or touching gamma together with its saddle, beta1 iff it leaves
    gamma, and the winding region with the orbits drawn inside it."""
    d = _require(g)
    config = extract_configuration(g)
    gamma = g.cycle[d.gamma]
    loop = g.cycle[d.homoclinic].loop_edge
    vertices = {d.N}
    edges = {loop}
    for e in g.edges:
        if e.id in (loop, d.beta1, d.beta2):
            continue
        touches_gamma = any(isinstance(x, CycleSide) and x.cycle == gamma.id for x in (e.source, e.target))
        if e.role == "separatrix" and (e.target == d.N or touches_gamma):
            edges.add(e.id)
            for x in (e.source, e.target):
                if isinstance(x, str) and g.vertex[x].kind in ("saddle", "saddle_node"):
                    vertices.add(x)
        elif (e.role == "ordinary" and config.a3 == 1 and e.target == d.N
              and e.source == CycleSide(gamma.id, "outer")):
            edges.add(e.id)
    if config.a2 == 1:
        edges.add(d.beta1)
    return Support(frozenset(vertices), frozenset(edges),
                   frozenset({gamma.id, d.homoclinic}), winding_region(g))


def compute_lbs(g: SkeletonGraph) -> Support:
    """Large bifurcation support; for these families it equals the extended one."""
    return compute_elbs(g)


def beta1_in_support(g: SkeletonGraph, s: Support) -> bool:
    return g.designated.beta1 in s.edges

"""JSON documents for characteristic data and skeletons, plus DOT output.

Rationals are written as "p/q" strings; decimal strings and JSON numbers
are accepted on input and read exactly.  Edge ends are written "edge:s" or
"edge:t", and an endpoint on a cycle is {"cycle": id, "side": s}.

Data read off a skeleton carries ``"layer": "combinatorial"``: its circle
coordinates only record cyclic order, so comparisons involving it ignore
the relative phase of Aplus and Aminus.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional

from .configuration import Configuration, ConfigurationError, parse_word
from .marked import CharacteristicData, MarkedCircleSet, MarkedIntervalSet, format_fraction, to_fraction
from .skeleton import (
    CycleNode,
    CycleSide,
    Designated,
    EdgeEnd,
    Endpoint,
    OrbitEdge,
    SingularVertex,
    SkeletonGraph,
)

SCHEMA_VERSION = 1
SET_NAMES = ("L1", "L2", "Aplus", "Aminus")


class DocumentError(ValueError):
    """Malformed document; ``where`` is a JSON path or "line L column C"."""

    def __init__(self, message: str, where: str = "$"):
        self.where = where
        super().__init__(f"{where}: {message}")


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None


def _expect(value: Any, kind: type | tuple, where: str, what: str) -> Any:
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise DocumentError(f"expected {what}", where)
    return value


def _version(doc: dict) -> None:
    v = doc.get("schema_version", SCHEMA_VERSION)
    if v != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {v!r}", "$.schema_version")


# ---------------------------------------------------- characteristic data


def _rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise DocumentError("expected a rational string or number", where)
    try:
        return to_fraction(value)
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f"cannot read {value!r} as a rational", where) from None


def _marked(doc: Any, where: str, circle: bool) -> MarkedIntervalSet | MarkedCircleSet:
    _expect(doc, dict, where, "an object with points and classes")
    points = _expect(doc.get("points", []), list, f"{where}.points", "a list")
    pts = [_rational(p, f"{where}.points[{i}]") for i, p in enumerate(points)]
    classes = doc.get("classes")
    if classes is not None:
        _expect(classes, list, f"{where}.classes", "a list of index lists")
        for c, block in enumerate(classes):
            _expect(block, list, f"{where}.classes[{c}]", "a list of indices")
            for t, idx in enumerate(block):
                _expect(idx, int, f"{where}.classes[{c}][{t}]", "an integer index")
    return (MarkedCircleSet if circle else MarkedIntervalSet)(pts, classes)


def parse_characteristic(text: str) -> CharacteristicData:
    """Read an InputDocument.  Structural problems raise DocumentError and
    an inadmissible word raises ConfigurationError; the marked sets are
    validated separately."""
    doc = _expect(_loads(text), dict, "$", "a JSON object")
    _version(doc)
    try:
        bits = parse_word(_expect(doc.get("config"), str, "$.config", "a configuration word"))
    except ConfigurationError as exc:
        raise DocumentError(str(exc), "$.config") from None
    config = Configuration(*bits)  # an inadmissible word raises ConfigurationError
    sets = {name: _marked(doc.get(name, {}), f"$.{name}", name.startswith("A")) for name in SET_NAMES}
    pairs = _expect(doc.get("liaison", []), list, "$.liaison", "a list of pairs")
    liaison = []
    for t, pair in enumerate(pairs):
        where = f"$.liaison[{t}]"
        if not isinstance(pair, list) or len(pair) != 2 or not all(
                isinstance(x, int) and not isinstance(x, bool) for x in pair):
            raise DocumentError("expected [L2 class index, Aplus class index]", where)
        liaison.append((pair[0], pair[1]))
    beta1 = doc.get("beta1")
    return CharacteristicData(
        config=config,
        liaison=tuple(liaison),
        beta1=None if beta1 is None else _rational(beta1, "$.beta1"),
        **sets,
    )


def _set_doc(s: MarkedIntervalSet | MarkedCircleSet) -> dict:
    return {"points": [format_fraction(p) for p in s.points], "classes": [list(b) for b in s.classes]}


def characteristic_to_dict(D: CharacteristicData) -> dict:
    doc: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "config": D.config.word}
    for name in SET_NAMES:
        doc[name] = _set_doc(getattr(D, name))
    doc["liaison"] = [list(p) for p in D.liaison]
    if D.beta1 is not None:
        doc["beta1"] = format_fraction(D.beta1)
    return doc


def dump_characteristic(D: CharacteristicData, layer: str = "full") -> str:
    doc = characteristic_to_dict(D)
    if layer != "full":
        doc["layer"] = layer
    return json.dumps(doc, indent=2) + "\n"


def document_layer(text: str) -> str:
    doc = _expect(_loads(text), dict, "$", "a JSON object")
    layer = doc.get("layer", "full")
    if layer not in ("full", "combinatorial"):
        raise DocumentError("layer must be 'full' or 'combinatorial'", "$.layer")
    return layer


# ------------------------------------------------------------- skeletons


def _end_str(end: EdgeEnd) -> str:
    return f"{end[0]}:{end[1]}"


def _end(value: Any, where: str) -> EdgeEnd:
    if not isinstance(value, str) or value.count(":") != 1 or not value.endswith((":s", ":t")):
        raise DocumentError("expected an edge end 'edge:s' or 'edge:t'", where)
    eid, side = value.split(":")
    return (eid, side)


def _endpoint_doc(at: Endpoint) -> Any:
    return {"cycle": at.cycle, "side": at.side} if isinstance(at, CycleSide) else at


def _endpoint(value: Any, where: str) -> Endpoint:
    if isinstance(value, str):
        return value
    if isinstance(value, dict) and isinstance(value.get("cycle"), str) and value.get("side") in ("outer", "inner"):
        return CycleSide(value["cycle"], value["side"])
    raise DocumentError("expected a vertex id or {cycle, side}", where)


def skeleton_to_dict(g: SkeletonGraph) -> dict:
    d = g.designated
    return {
        "schema_version": SCHEMA_VERSION,
        "vertices": [{"id": v.id, "kind": v.kind, "label": v.label} for v in g.vertices],
        "cycles": [
            {"id": c.id, "kind": c.kind, "orientation": c.orientation, "outer": c.outer, "inner": c.inner,
             "outer_ends": [_end_str(e) for e in c.outer_ends],
             "inner_ends": [_end_str(e) for e in c.inner_ends],
             "loop_edge": c.loop_edge}
            for c in g.cycles
        ],
        "edges": [{"id": e.id, "source": _endpoint_doc(e.source), "target": _endpoint_doc(e.target), "role": e.role}
                  for e in g.edges],
        "rotation": {v.id: [_end_str(e) for e in v.rotation] for v in g.vertices},
        "designated": {"N": d.N, "gamma": d.gamma, "homoclinic": d.homoclinic, "beta1": d.beta1, "beta2": d.beta2},
    }


def dump_skeleton(g: SkeletonGraph) -> str:
    return json.dumps(skeleton_to_dict(g), indent=2) + "\n"


def _opt_str(value: Any, where: str) -> Optional[str]:
    if value is not None and not isinstance(value, str):
        raise DocumentError("expected a string or null", where)
    return value


def parse_skeleton(text: str) -> SkeletonGraph:
    doc = _expect(_loads(text), dict, "$", "a JSON object")
    _version(doc)
    rotation = _expect(doc.get("rotation", {}), dict, "$.rotation", "an object")
    vertices = []
    for t, v in enumerate(_expect(doc.get("vertices", []), list, "$.vertices", "a list")):
        where = f"$.vertices[{t}]"
        _expect(v, dict, where, "an object")
        vid = _expect(v.get("id"), str, f"{where}.id", "a string id")
        rot = _expect(rotation.get(vid, []), list, f"$.rotation.{vid}", "a list of edge ends")
        vertices.append(SingularVertex(
            vid, _expect(v.get("kind"), str, f"{where}.kind", "a vertex kind"),
            _opt_str(v.get("label"), f"{where}.label"),
            tuple(_end(e, f"$.rotation.{vid}[{i}]") for i, e in enumerate(rot))))
    cycles = []
    for t, c in enumerate(_expect(doc.get("cycles", []), list, "$.cycles", "a list")):
        where = f"$.cycles[{t}]"
        _expect(c, dict, where, "an object")
        ends = {}
        for side in ("outer_ends", "inner_ends"):
            lst = _expect(c.get(side, []), list, f"{where}.{side}", "a list of edge ends")
            ends[side] = tuple(_end(e, f"{where}.{side}[{i}]") for i, e in enumerate(lst))
        cycles.append(CycleNode(
            _expect(c.get("id"), str, f"{where}.id", "a string id"),
            _expect(c.get("kind"), str, f"{where}.kind", "a cycle kind"),
            _expect(c.get("orientation", 1), int, f"{where}.orientation", "+1 or -1"),
            _opt_str(c.get("outer"), f"{where}.outer"), _opt_str(c.get("inner"), f"{where}.inner"),
            ends["outer_ends"], ends["inner_ends"], _opt_str(c.get("loop_edge"), f"{where}.loop_edge")))
    edges = []
    for t, e in enumerate(_expect(doc.get("edges", []), list, "$.edges", "a list")):
        where = f"$.edges[{t}]"
        _expect(e, dict, where, "an object")
        edges.append(OrbitEdge(
            _expect(e.get("id"), str, f"{where}.id", "a string id"),
            _endpoint(e.get("source"), f"{where}.source"), _endpoint(e.get("target"), f"{where}.target"),
            _expect(e.get("role", "separatrix"), str, f"{where}.role", "an edge role")))
    des = _expect(doc.get("designated", {}), dict, "$.designated", "an object")
    designated = Designated(**{k: _opt_str(des.get(k), f"$.designated.{k}")
                               for k in ("N", "gamma", "homoclinic", "beta1", "beta2")})
    return SkeletonGraph(tuple(vertices), tuple(cycles), tuple(edges), designated)


_SHAPES = {"saddle": "diamond", "saddle_node": "box", "attractor": "circle", "repeller": "circle"}


def skeleton_to_dot(g: SkeletonGraph) -> str:
    """Directed graph: arrows follow the flow, cycles are double circles and
    cycle attachments carry the side as a port label."""
    lines = ["digraph skeleton {", f'  graph [schema_version="{SCHEMA_VERSION}"];']
    for v in g.vertices:
        fill = ', style=filled, fillcolor="gray80"' if v.kind == "attractor" else ""
        label = v.label or v.id
        lines.append(f'  "{v.id}" [shape={_SHAPES.get(v.kind, "ellipse")}, label="{label}", kind="{v.kind}"{fill}];')
    for c in g.cycles:
        if c.kind == "homoclinic_loop":
            continue
        lines.append(f'  "{c.id}" [shape=doublecircle, label="{c.id}", kind="{c.kind}"];')

    def node(at: Endpoint) -> tuple[str, str]:
        if isinstance(at, CycleSide):
            return at.cycle, at.side
        return at, ""

    for e in g.edges:
        (src, sside), (dst, tside) = node(e.source), node(e.target)
        attrs = [f'id="{e.id}"', f'role="{e.role}"']
        if sside:
            attrs.append(f'taillabel="{sside}"')
        if tside:
            attrs.append(f'headlabel="{tside}"')
        if e.id in (g.designated.beta1, g.designated.beta2):
            attrs.append(f'label="{"beta1" if e.id == g.designated.beta1 else "beta2"}"')
        if e.role == "homoclinic":
            attrs.append("penwidth=2")
        if e.role == "ordinary":
            attrs.append("style=dashed")
        lines.append(f'  "{src}" -> "{dst}" [{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"

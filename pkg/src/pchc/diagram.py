"""Simple bifurcation diagram of a PC-HC family in the (eps, lam) plane.

The diagram is the germ at the origin of the two axes plus, at every
connection value eps_mij on the positive eps-axis, a curve crossing the axis.
Connections of the separatrices c_i cross it (degree 4 vertex).  Connections
of beta1 exist only for lam <= 0, so their curves end on the axis (degree 3,
drawn as a square).  Vertices are listed as eps decreases toward 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .dynamics import SaddleNodeMapFamily, enumerate_sparkling, m_min, plus_points
from .marked import CharacteristicData, MarkedCircleSet, delta_set, non_synchronized
from .realization import NotRealizable, check_realizable

SCHEMA_VERSION = 1
FORMATS = ("dot", "json", "svg_lines")


@dataclass(frozen=True)
class DiagramVertex:
    i: int
    j: int
    m: int
    degree: int
    kind: str  # "CD_connection" or "beta1_connection"
    epsilon: Optional[float] = None

    @property
    def label(self) -> str:
        return f"eps_{self.m}_{self.i}_{self.j}"


@dataclass(frozen=True)
class BifurcationDiagram:
    config: str
    period: int
    periods: int
    vertices: tuple[DiagramVertex, ...]

    @property
    def curves(self) -> tuple[tuple[int, str], ...]:
        """Curve germs as (vertex index, side of lam)."""
        out = []
        for q, v in enumerate(self.vertices):
            out.append((q, "lam<0"))
            if v.degree == 4:
                out.append((q, "lam>0"))
        return tuple(out)


def build_simple_diagram(
    D: CharacteristicData,
    periods: int,
    family: Optional[SaddleNodeMapFamily] = None,
    m_start: Optional[int] = None,
) -> BifurcationDiagram:
    """``periods`` windings starting at ``m_start`` (default m_min of the
    family, or 1).  With a family the vertices carry their eps values."""
    if periods < 0:
        raise ValueError("periods must be non-negative")
    report = check_realizable(D)
    if not report:
        raise NotRealizable(report.failed, report.messages)
    plus = plus_points(D, 0.0)
    if not non_synchronized(MarkedCircleSet(plus), D.Aminus):
        raise ValueError("Malta-Palis condition fails: the data is synchronized")
    k = len(D.Aplus.points)
    order = [(e.i, e.j) for e in delta_set(MarkedCircleSet(plus), D.Aminus)]
    if m_start is None:
        m_start = m_min(family) if family is not None else 1
    eps = {}
    if family is not None and order:
        for e in enumerate_sparkling(family, D, 0.0, range(m_start, m_start + periods)):
            eps[(e.i, e.j, e.m)] = e.epsilon
    vertices = []
    for m in range(m_start, m_start + periods):
        for i, j in order:
            beta = i == k + 1
            vertices.append(DiagramVertex(i, j, m, 3 if beta else 4,
                                          "beta1_connection" if beta else "CD_connection",
                                          eps.get((i, j, m))))
    return BifurcationDiagram(D.config.word, len(order), periods, tuple(vertices))


# ------------------------------------------------------------------ emission


def emit_diagram(d: BifurcationDiagram, fmt: str) -> str:
    if fmt == "dot":
        return _dot(d)
    if fmt == "json":
        return _json(d)
    if fmt == "svg_lines":
        return _svg_lines(d)
    raise ValueError(f"unknown diagram format {fmt!r}; choose from {', '.join(FORMATS)}")


def _dot(d: BifurcationDiagram) -> str:
    lines = [
        "graph diagram {",
        f'  graph [schema_version="{SCHEMA_VERSION}", config="{d.config}", period="{d.period}"];',
        '  O [shape=point, label="0"];',
        '  E [shape=plaintext, label="eps"];',
        '  Lm [shape=plaintext, label="lam<0"];',
        '  Lp [shape=plaintext, label="lam>0"];',
    ]
    names = [f"v{q}" for q in range(len(d.vertices))]
    for name, v in zip(names, d.vertices):
        shape = "square" if v.degree == 3 else "circle"
        extra = f', eps="{v.epsilon!r}"' if v.epsilon is not None else ""
        lines.append(f'  {name} [shape={shape}, label="{v.label}", kind="{v.kind}"{extra}];')
    lines.append("  Lm -- Lp [axis=lam];")
    chain = ["E"] + names + ["O"]
    if names:
        for a, b in zip(chain, chain[1:]):
            lines.append(f"  {a} -- {b} [axis=eps];")
    else:
        lines.append("  E -- O [axis=eps];")
    for q, side in d.curves:
        end = f"v{q}_{'m' if side == 'lam<0' else 'p'}"
        lines.append(f'  {end} [shape=none, label=""];')
        lines.append(f'  v{q} -- {end} [curve="{side}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _json(d: BifurcationDiagram) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": d.config,
        "period": d.period,
        "periods": d.periods,
        "axes": ["eps", "lam"],
        "vertices": [
            {"i": v.i, "j": v.j, "m": v.m, "degree": v.degree, "kind": v.kind,
             "label": v.label, "epsilon": v.epsilon}
            for v in d.vertices
        ],
        "curves": [[q, side] for q, side in d.curves],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _svg_lines(d: BifurcationDiagram) -> str:
    """One ``L x1 y1 x2 y2`` primitive per line in the unit box; the eps-axis
    runs along y = 0 and the lam-axis along x = 0."""
    out = [f"# svg_lines schema_version={SCHEMA_VERSION} config={d.config} period={d.period}"]

    def seg(x1: float, y1: float, x2: float, y2: float) -> None:
        out.append(f"L {x1:.6f} {y1:.6f} {x2:.6f} {y2:.6f}")

    seg(0.0, 0.0, 1.0, 0.0)
    seg(0.0, -1.0, 0.0, 1.0)
    total = len(d.vertices)
    top = max((v.epsilon for v in d.vertices if v.epsilon is not None), default=None)
    for q, v in enumerate(d.vertices):
        if v.epsilon is not None and top:
            x = 0.9 * v.epsilon / top
        else:
            x = 0.9 * (total - q) / total
        h = 0.3
        w = 0.2 * x / (q + 2)
        seg(x - w, -h, x, 0.0)
        if v.degree == 4:
            seg(x, 0.0, x + w, h)
        else:
            s = 0.01
            seg(x - s, -s, x + s, -s)
            seg(x + s, -s, x + s, s)
            seg(x + s, s, x - s, s)
            seg(x - s, s, x - s, -s)
    return "\n".join(out) + "\n"

import json
import random

import pytest

from pchc.configuration import validate_configuration
from pchc.diagram import build_simple_diagram, emit_diagram
from pchc.dynamics import ModelFamily, enumerate_sparkling
from pchc.generate import random_characteristic
from pchc.marked import CharacteristicData, MarkedCircleSet
from pchc.realization import NotRealizable


def _gen(word, k, n, seed=0):
    return random_characteristic(validate_configuration(word), k, n, 0, 0, random.Random(seed))


@pytest.mark.parametrize("seed", range(5))
def test_period_with_beta1(seed):
    d = build_simple_diagram(_gen("111", 2, 3, seed), 1)
    assert d.period == 9
    assert sum(v.degree == 3 for v in d.vertices) == 3
    assert sum(v.degree == 4 for v in d.vertices) == 6
    assert all((v.degree == 3) == (v.kind == "beta1_connection") == (v.i == 3) for v in d.vertices)


def test_direct_sum_case():
    d = build_simple_diagram(_gen("101", 5, 1), 1)
    assert d.period == 5
    assert all(v.degree == 4 for v in d.vertices)


@pytest.mark.parametrize("k,n", [(0, 2), (2, 0), (0, 0)])
def test_no_points_gives_axes_only(k, n):
    word = "101"
    d = build_simple_diagram(_gen(word, k, n), 3)
    assert d.vertices == ()
    dot = emit_diagram(d, "dot")
    edges = [line for line in dot.splitlines() if " -- " in line]
    assert len(edges) == 2


def test_two_periods():
    d = build_simple_diagram(_gen("111", 2, 3), 2)
    assert len(d.vertices) == 18
    squares = [q for q, v in enumerate(d.vertices) if v.degree == 3]
    assert [q + 9 for q in squares[:3]] == squares[3:]
    dot = emit_diagram(d, "dot")
    assert dot.count("shape=square") == 6


def test_order_matches_enumeration():
    D = _gen("111", 3, 2, seed=4)
    family = ModelFamily()
    d = build_simple_diagram(D, 2, family, m_start=30)
    events = enumerate_sparkling(family, D, 0.0, range(30, 32))
    assert [(v.i, v.j, v.m) for v in d.vertices] == [(e.i, e.j, e.m) for e in events]
    eps = [v.epsilon for v in d.vertices]
    assert all(a > b for a, b in zip(eps, eps[1:]))


def test_curves_per_degree():
    d = build_simple_diagram(_gen("111", 2, 1), 1)
    sides = {q: [s for p, s in d.curves if p == q] for q in range(len(d.vertices))}
    for q, v in enumerate(d.vertices):
        assert sides[q] == (["lam<0"] if v.degree == 3 else ["lam<0", "lam>0"])


@pytest.mark.parametrize("fmt", ["dot", "json", "svg_lines"])
def test_emission_is_deterministic(fmt):
    d1 = build_simple_diagram(_gen("111", 2, 3), 2, ModelFamily(), 30)
    d2 = build_simple_diagram(_gen("111", 2, 3), 2, ModelFamily(), 30)
    assert emit_diagram(d1, fmt) == emit_diagram(d2, fmt)


def test_json_schema():
    doc = json.loads(emit_diagram(build_simple_diagram(_gen("111", 2, 3), 1), "json"))
    assert doc["schema_version"] == 1
    assert doc["period"] == 9 and len(doc["vertices"]) == 9
    assert {v["label"] for v in doc["vertices"]} >= {"eps_1_3_1"}


def test_svg_lines_axes():
    lines = emit_diagram(build_simple_diagram(_gen("101", 1, 1), 1), "svg_lines").splitlines()
    assert lines[1] == "L 0.000000 0.000000 1.000000 0.000000"
    assert lines[2] == "L 0.000000 -1.000000 0.000000 1.000000"


def test_unknown_format():
    with pytest.raises(ValueError, match="unknown diagram format"):
        emit_diagram(build_simple_diagram(_gen("101", 1, 1), 1), "png")


def test_synchronized_rejected():
    D = CharacteristicData(validate_configuration("100"), Aplus=MarkedCircleSet(["0", "1/2"]),
                           Aminus=MarkedCircleSet(["1/10", "3/5"]))
    with pytest.raises((ValueError, NotRealizable)):
        build_simple_diagram(D, 1)

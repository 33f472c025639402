import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bisect_decreasing, model_transit_quad
from pchc.configuration import validate_configuration
from pchc.dynamics import (
    DomainError,
    ModelFamily,
    MTooSmall,
    SaddleNodeMapFamily,
    SynchronizedData,
    check_genericity_map,
    enumerate_sparkling,
    m_min,
    model_tau,
    reindex_under_basepoint_shift,
    solve_connection,
    tau,
    time_chart,
)
from pchc.marked import CharacteristicData, MarkedCircleSet, delta_set

MODEL = ModelFamily()
GENERIC = SaddleNodeMapFamily(f=lambda y, eps, lam: 0.3 * y + lam)

# Frozen from the quadrature oracle: tau(0.01) and the root of tau = 30.3.
TAU_001 = model_transit_quad(0.01)
EPS_30_03 = bisect_decreasing(model_transit_quad, 30.3, 1e-4, 1.0)


def test_frozen_oracle_values():
    assert TAU_001 == pytest.approx(29.42255349, abs=1e-8)
    assert EPS_30_03 == pytest.approx(0.0094637535, rel=1e-8)


# --------------------------------------------------------------------- tau


@pytest.mark.parametrize("eps", [1e-4, 1e-3, 0.01, 0.1, 0.5, 1.0])
def test_model_tau_matches_quadrature(eps):
    assert tau(MODEL, eps) == pytest.approx(model_transit_quad(eps), rel=1e-10)
    assert model_tau(eps) == pytest.approx(model_transit_quad(eps), rel=1e-10)


def test_tau_at_001():
    assert tau(MODEL, 0.01) == pytest.approx(TAU_001, rel=1e-10)


@pytest.mark.parametrize("family", [MODEL, GENERIC], ids=["model", "generic"])
def test_tau_strictly_decreasing(family):
    grid = np.geomspace(1e-5, 0.5, 60)
    values = [tau(family, e) for e in grid]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_tau_sqrt_eps_tends_to_pi():
    errs = [abs(tau(MODEL, e) * math.sqrt(e) - math.pi) for e in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-3


@pytest.mark.parametrize("eps", [0.0, -0.1])
def test_tau_rejects_non_positive_eps(eps):
    with pytest.raises(DomainError):
        tau(MODEL, eps)


# ------------------------------------------------------------------- charts


@pytest.mark.parametrize("family", [MODEL, GENERIC], ids=["model", "generic"])
@pytest.mark.parametrize("side", ["plus", "minus"])
def test_chart_normalization(family, side):
    T = time_chart(family, 0.01, 0.0, side)
    b = family.base(side, 0.01)
    assert T(b) == pytest.approx(0.0, abs=1e-12)
    # The model orbit escapes to infinity within one step outward, so step inward.
    if side == "minus" or family is GENERIC:
        assert T(family.g(b, 0.01)) == pytest.approx(1.0, abs=1e-9)
    if side == "plus" or family is GENERIC:
        assert T(family.g_inverse(b, 0.01)) == pytest.approx(-1.0, abs=1e-9)


def test_model_minus_chart_matches_quadrature():
    T = time_chart(MODEL, 0.01, 0.0, "minus")
    for x in np.linspace(-1.5, 1.5, 13):
        assert T(x) == pytest.approx(model_transit_quad(0.01, -1.0, x), abs=1e-8)


@pytest.mark.parametrize("side", ["plus", "minus"])
def test_model_unit_shift_residual(side):
    T = time_chart(MODEL, 0.01, 0.0, side)
    for x in np.linspace(-1.9, 0.4, 40):
        assert abs(T(MODEL.g(x, 0.01)) - T(x) - 1.0) < 1e-8


def test_generic_unit_shift_residual():
    T = time_chart(GENERIC, 0.01, 0.0, "plus")
    for x in np.linspace(-0.45, 0.2, 30):
        assert abs(T(GENERIC.g(x, 0.01)) - T(x) - 1.0) < 1e-8


def test_chart_rejects_points_outside_domain():
    with pytest.raises(DomainError):
        time_chart(MODEL, 0.01, 0.0, "plus")(5.0)


# ---------------------------------------------------------- solve_connection


def test_solve_connection_frozen_value():
    assert solve_connection(MODEL, 0.3, 30) == pytest.approx(EPS_30_03, rel=1e-9)


def test_solve_connection_near_asymptotic_value():
    assert solve_connection(MODEL, 0.3, 30) == pytest.approx(math.pi**2 / 30.3**2, rel=0.12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 0.999), st.integers(5, 400))
def test_solve_connection_self_consistent(delta, m):
    eps = solve_connection(MODEL, delta, m)
    assert tau(MODEL, eps) == pytest.approx(delta + m, rel=1e-9)


def test_solve_connection_decreasing_in_m():
    roots = [solve_connection(MODEL, 0.3, m) for m in range(30, 131)]
    assert all(a > b for a, b in zip(roots, roots[1:]))


def test_eps_times_square_tends_to_pi_squared():
    ratios = [solve_connection(MODEL, 0.3, m) * (m + 0.3) ** 2 / math.pi**2 for m in (30, 300, 3000)]
    assert all(abs(1 - a) > abs(1 - b) for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] == pytest.approx(1.0, rel=2e-3)


def test_m_too_small():
    assert m_min(MODEL) == 2
    with pytest.raises(MTooSmall):
        solve_connection(MODEL, 0.5, 0)


def test_generic_solve_connection():
    eps = solve_connection(GENERIC, 0.25, 40)
    assert tau(GENERIC, eps) == pytest.approx(40.25, rel=1e-9)


# --------------------------------------------------------------- sparkling


def _data(word, plus, minus, beta1=None):
    return CharacteristicData(validate_configuration(word), Aplus=MarkedCircleSet(plus),
                              Aminus=MarkedCircleSet(minus), beta1=beta1)


def test_single_pair_is_one_decreasing_sequence():
    ev = enumerate_sparkling(MODEL, _data("100", ["0.2"], ["0.5"]), 0.0, range(30, 41))
    assert [e.m for e in ev] == list(range(30, 41))
    assert all(a.epsilon > b.epsilon for a, b in zip(ev, ev[1:]))


def test_block_order_follows_delta_set():
    D = _data("101", ["1/10", "2/5", "4/5"], ["1/7", "5/9"])
    events = enumerate_sparkling(MODEL, D, 0.0, range(30, 36))
    order = [(e.i, e.j) for e in delta_set(D.Aplus, D.Aminus)]
    for m in range(30, 36):
        block = [(e.i, e.j) for e in events if e.m == m]
        assert block == order
    # Blocks do not overlap: the whole list is sorted by m then delta.
    assert [e.m for e in events] == sorted(e.m for e in events)


def test_two_plus_points_order():
    D = _data("100", ["0.1", "0.3"], ["0.05"])
    ev = enumerate_sparkling(MODEL, D, 0.0, [30])
    # delta_11 = 0.05 < delta_21 = 0.25, so eps_m11 comes first (larger).
    assert [(e.i, e.j) for e in ev] == [(1, 1), (2, 1)]
    assert ev[0].epsilon > ev[1].epsilon


def test_beta1_events_gated_by_lambda():
    D = _data("111", ["0.1", "0.3"], ["0.05"], beta1=F(7, 10))
    below = enumerate_sparkling(MODEL, D, -0.001, range(30, 33))
    above = enumerate_sparkling(MODEL, D, 0.001, range(30, 33))
    assert {e.i for e in below} == {1, 2, 3}
    assert {e.i for e in above} == {1, 2}
    assert len(below) - len(above) == 3


def test_beta1_absent_when_a2_zero():
    D = _data("101", ["0.1", "0.3"], ["0.05"])
    assert {e.i for e in enumerate_sparkling(MODEL, D, -0.001, [30])} == {1, 2}


def test_synchronized_data_rejected():
    with pytest.raises(SynchronizedData):
        enumerate_sparkling(MODEL, _data("100", ["0", "1/2"], ["1/10", "3/5"]), 0.0, [30])


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 96), min_size=1, max_size=3, unique=True),
       st.lists(st.integers(1, 96), min_size=1, max_size=3, unique=True))
def test_events_solve_their_equation(plus, minus):
    D = _data("100", [F(p, 97) for p in plus], [F(2 * q + 1, 194) for q in minus])
    try:
        events = enumerate_sparkling(MODEL, D, 0.0, [30, 31])
    except SynchronizedData:
        return
    for e in events:
        delta = (D.Aplus.points[e.i - 1] - D.Aminus.points[e.j - 1]) % 1
        assert tau(MODEL, e.epsilon) == pytest.approx(float(delta) + e.m, rel=1e-9)


# ----------------------------------------------------------------- reindex

SHIFTABLE = ModelFamily(b_minus=-0.5, b_plus=0.5)
REINDEX_DATA = _data("100", ["0.1", "0.6"], ["0.25"])


def test_reindex_identity():
    assert reindex_under_basepoint_shift(SHIFTABLE, REINDEX_DATA, 0.0) == 0


@pytest.mark.parametrize("plus,minus,expected", [(1, 0, 1), (0, 1, -1), (-2, 1, -3)])
def test_reindex_model(plus, minus, expected):
    assert reindex_under_basepoint_shift(SHIFTABLE, REINDEX_DATA, 0.0, plus, minus) == expected


def test_reindex_generic():
    assert reindex_under_basepoint_shift(GENERIC, REINDEX_DATA, 0.0, minus=1) == -1


def test_shift_leaving_domain_is_rejected():
    with pytest.raises(DomainError):
        MODEL.shifted(plus=1).base("plus", 0.01)


# -------------------------------------------------------------- genericity


def test_model_is_generic():
    r = check_genericity_map(MODEL)
    assert r.ok
    assert r.curvature == pytest.approx(2.0, abs=1e-6)
    assert r.eps_velocity == pytest.approx(1.0, abs=1e-6)
    assert r.richardson_ok


def test_cubic_family_fails_curvature():
    r = check_genericity_map(lambda y, eps, lam: y + y**3 + eps)
    assert not r.ok and any("curvature" in d for d in r.diagnostics)


def test_frozen_parameter_fails_velocity():
    r = check_genericity_map(lambda y, eps, lam: y + y * y)
    assert not r.ok and any("unfold" in d for d in r.diagnostics)


def test_generic_family_with_perturbation():
    assert check_genericity_map(GENERIC).ok

"""Saddle-node map families near the vanished parabolic cycle.

A family is the Poincaré map g(y) = y + (y^2 + eps)(1 + f(y, eps, lam)) on a
transversal, with base points b_minus < 0 < b_plus.  For eps > 0 the map has
no fixed points and every orbit drifts upward, so each side carries a time
chart T with T(g(x)) = T(x) + 1 and T(b) = 0.  The transit time tau is the
chart value of b_plus in the chart based at b_minus.

``ModelFamily`` replaces the map by the time-one flow of y' = y^2 + eps,
whose charts and tau have closed forms.

An event (i, j, m) solves tau(eps) = m + delta with
delta = (Aplus_i - Aminus_j) mod 1.  Since tau decreases in eps, eps
decreases as m grows, and inside one m-block the events listed by
decreasing eps follow the ascending order of delta.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Iterable

from scipy.optimize import bisect, brentq

from .marked import CharacteristicData, MarkedCircleSet, non_synchronized
from .realization import gap_midpoints

Perturbation = Callable[[float, float, float], float]


class DomainError(ValueError):
    pass


class MTooSmall(ValueError):
    pass


class SynchronizedData(ValueError):
    pass


def _zero(y: float, eps: float, lam: float) -> float:
    return 0.0


@dataclass(frozen=True)
class SaddleNodeMapFamily:
    """Map family with general perturbation f.  The defaults keep the
    unperturbed map increasing (it turns back at y = -1/2).

    ``plus_shift`` and ``minus_shift`` move the base points forward by that
    many iterates of g (at the current eps); they realize base-point changes
    that keep the chart coordinates of the data fixed mod 1.
    """

    f: Perturbation = _zero
    b_minus: float = -0.25
    b_plus: float = 0.25
    lo: float = -0.5
    hi: float = 0.5
    eps_max: float = 1.0
    plus_shift: int = 0
    minus_shift: int = 0

    def __post_init__(self) -> None:
        if not (self.lo < self.b_minus < 0 < self.b_plus < self.hi):
            raise DomainError("need lo < b_minus < 0 < b_plus < hi")

    def g(self, y: float, eps: float, lam: float = 0.0) -> float:
        return y + (y * y + eps) * (1.0 + self.f(y, eps, lam))

    def g_inverse(self, y: float, eps: float, lam: float = 0.0) -> float:
        return brentq(lambda z: self.g(z, eps, lam) - y, self.lo, y, xtol=1e-15, rtol=1e-15)

    def iterate(self, y: float, count: int, eps: float, lam: float = 0.0) -> float:
        for _ in range(count):
            y = self.g(y, eps, lam)
        for _ in range(-count):
            y = self.g_inverse(y, eps, lam)
        return y

    def base(self, side: str, eps: float, lam: float = 0.0) -> float:
        shift = self.plus_shift if side == "plus" else self.minus_shift
        b = self.iterate(self.anchor(side), shift, eps, lam)
        if not (self.lo <= b <= self.hi):
            raise DomainError(f"shifted {side} base point {b} leaves the working domain")
        return b

    def anchor(self, side: str) -> float:
        if side not in ("plus", "minus"):
            raise ValueError(f"side must be 'plus' or 'minus', not {side!r}")
        return self.b_plus if side == "plus" else self.b_minus

    def chart_value(self, x: float, side: str, eps: float, lam: float) -> float:
        """Chart on one side.  Shifted base points reuse the unshifted chart
        minus the shift, so T(g^s(b)) = 0 and the unit shift is preserved."""
        shift = self.plus_shift if side == "plus" else self.minus_shift
        return self.abel(x, self.anchor(side), eps, lam) - shift

    def abel(self, x: float, base: float, eps: float, lam: float) -> float:
        """Iterate count to the fundamental domain [base, g(base)), plus a
        linear fraction inside it."""
        top = self.g(base, eps, lam)
        n = 0
        y = x
        while y < base:
            y = self.g(y, eps, lam)
            n -= 1
        while y >= top:
            y = self.g_inverse(y, eps, lam)
            n += 1
        return n + (y - base) / (top - base)

    def shifted(self, plus: int = 0, minus: int = 0) -> "SaddleNodeMapFamily":
        return replace(self, plus_shift=self.plus_shift + plus, minus_shift=self.minus_shift + minus)


@dataclass(frozen=True)
class ModelFamily(SaddleNodeMapFamily):
    """Time-one map of y' = y^2 + eps with the flow time as chart."""

    b_minus: float = -1.0
    b_plus: float = 1.0
    lo: float = -2.0
    hi: float = 2.0

    def g(self, y: float, eps: float, lam: float = 0.0) -> float:
        if eps == 0:
            return y / (1.0 - y)
        r = cmath.sqrt(eps)
        return (r * cmath.tan(r + cmath.atan(y / r))).real

    def g_inverse(self, y: float, eps: float, lam: float = 0.0) -> float:
        if eps == 0:
            return y / (1.0 + y)
        r = cmath.sqrt(eps)
        return (r * cmath.tan(cmath.atan(y / r) - r)).real

    def abel(self, x: float, base: float, eps: float, lam: float) -> float:
        r = math.sqrt(eps)
        return (math.atan(x / r) - math.atan(base / r)) / r


@dataclass(frozen=True)
class TimeChart:
    family: SaddleNodeMapFamily
    side: str
    eps: float
    lam: float
    base: float

    def __call__(self, x: float) -> float:
        if not (self.family.lo <= x <= self.family.hi):
            raise DomainError(f"x = {x} outside the working domain [{self.family.lo}, {self.family.hi}]")
        return self.family.chart_value(x, self.side, self.eps, self.lam)


def _check_eps(eps: float) -> None:
    if not eps > 0:
        raise DomainError("eps must be positive")


def time_chart(family: SaddleNodeMapFamily, eps: float, lam: float, side: str) -> TimeChart:
    _check_eps(eps)
    return TimeChart(family, side, eps, lam, family.base(side, eps, lam))


def tau(family: SaddleNodeMapFamily, eps: float, lam: float = 0.0) -> float:
    """Transit time from b_minus to b_plus."""
    _check_eps(eps)
    return family.chart_value(family.base("plus", eps, lam), "minus", eps, lam)


def model_tau(eps: float) -> float:
    """Closed form of tau for the model family with base points -1 and 1."""
    return 2.0 / math.sqrt(eps) * math.atan(1.0 / math.sqrt(eps))


def eps_ceiling(family: SaddleNodeMapFamily, lam: float = 0.0) -> float:
    """Largest eps of the form eps_max / 10^q at which tau is defined; shifted
    base points can leave the domain for large eps."""
    eps = family.eps_max
    for _ in range(30):
        try:
            tau(family, eps, lam)
            return eps
        except DomainError:
            eps /= 10
    raise DomainError("tau is undefined for every tried eps")


def m_min(family: SaddleNodeMapFamily, lam: float = 0.0) -> int:
    """Smallest m for which every delta in [0, 1) has a root below the eps ceiling."""
    return math.floor(tau(family, eps_ceiling(family, lam), lam)) + 1


def solve_connection(
    family: SaddleNodeMapFamily,
    delta: float,
    m: int,
    lam: float = 0.0,
    xtol: float = 1e-12,
    maxiter: int = 200,
) -> float:
    """The eps with tau(eps, lam) = delta + m, by bisection on log eps."""
    target = float(delta) + m
    top = eps_ceiling(family, lam)
    log_hi = math.log(top)
    if tau(family, top, lam) >= target:
        raise MTooSmall(f"m = {m} too small: tau never reaches {target} below eps_max (m_min = {m_min(family, lam)})")
    log_lo = log_hi
    while tau(family, math.exp(log_lo), lam) <= target:
        log_lo -= 5.0
        if log_lo < -700:
            raise MTooSmall(f"no root for target {target}")
    root = bisect(lambda s: tau(family, math.exp(s), lam) - target, log_lo, log_hi,
                  xtol=xtol, rtol=1e-15, maxiter=maxiter)
    return math.exp(root)


# ------------------------------------------------------------ sparkling


@dataclass(frozen=True, order=True)
class SparklingEvent:
    """Connection of separatrix i (1-based; k+1 is beta1) with j at winding m."""

    epsilon: float
    i: int
    j: int
    m: int


def beta1_point(D: CharacteristicData) -> Fraction:
    """The beta1 coordinate on the Aplus circle; the first admissible gap
    point when the data leaves it open."""
    if D.beta1 is not None:
        return D.beta1
    for p in gap_midpoints(D.Aplus.points):
        if non_synchronized(MarkedCircleSet(list(D.Aplus.points) + [p]), D.Aminus):
            return p
    raise SynchronizedData("no gap point for beta1 keeps the data non-synchronized")


def plus_points(D: CharacteristicData, lam: float) -> list[Fraction]:
    """Aplus, extended by beta1 when it exists (a2 = 1 and lam <= 0)."""
    pts = list(D.Aplus.points)
    if D.config.a2 == 1 and lam <= 0:
        pts.append(beta1_point(D))
    return pts


def connection_offset(a_plus: Fraction, a_minus: Fraction) -> Fraction:
    return (a_plus - a_minus) % 1


def enumerate_sparkling(
    family: SaddleNodeMapFamily,
    D: CharacteristicData,
    lam: float,
    m_range: Iterable[int],
) -> list[SparklingEvent]:
    """All events for the given windings, sorted by descending eps."""
    plus = plus_points(D, lam)
    if not non_synchronized(MarkedCircleSet(plus), D.Aminus):
        raise SynchronizedData("Malta-Palis condition fails: the data is synchronized")
    events = []
    for m in m_range:
        for i, a in enumerate(plus, 1):
            for j, d in enumerate(D.Aminus.points, 1):
                eps = solve_connection(family, float(connection_offset(a, d)), m, lam)
                events.append(SparklingEvent(eps, i, j, m))
    events.sort(key=lambda e: (-e.epsilon, e.m, e.i, e.j))
    return events


def reindex_under_basepoint_shift(
    family: SaddleNodeMapFamily,
    D: CharacteristicData,
    lam: float,
    plus: int = 0,
    minus: int = 0,
    m_range: Iterable[int] = range(30, 41),
    rel_tol: float = 1e-9,
) -> int:
    """Winding shift M such that events under the shifted base points match
    the original ones with m replaced by m + M.  Both lists are recomputed."""
    ms = list(m_range)
    old = enumerate_sparkling(family, D, lam, ms)
    moved = family.shifted(plus, minus)
    width = abs(plus) + abs(minus) + 1
    lo = max(min(ms) - width, m_min(moved, lam))
    new = enumerate_sparkling(moved, D, lam, range(lo, max(ms) + width + 1))
    table = {(e.i, e.j, e.m): e.epsilon for e in new}
    for M in sorted(range(-width, width + 1), key=abs):
        try:
            if all(_close(table[(e.i, e.j, e.m + M)], e.epsilon, rel_tol) for e in old):
                return M
        except KeyError:
            continue
    raise ValueError("no consistent winding shift found within tolerance")


def _close(a: float, b: float, rel_tol: float) -> bool:
    return abs(a - b) <= rel_tol * max(abs(a), abs(b))


# ------------------------------------------------------------ genericity


@dataclass(frozen=True)
class GenericityReport:
    ok: bool
    fixed_point: float
    derivative: float
    curvature: float
    eps_velocity: float
    richardson_ok: bool
    diagnostics: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def check_genericity_map(
    family: SaddleNodeMapFamily | Callable[[float, float, float], float],
    lam: float = 0.0,
    h: float = 1e-3,
    margin: float = 1e-6,
) -> GenericityReport:
    """Finite-difference check of g(0) = 0, g'(0) = 1, g''(0) != 0 and
    dg/deps != 0 at eps = 0.  Central differences at steps h and h/2 must
    agree to the expected second order (a Richardson check)."""
    g = getattr(family, "g", family)

    def estimates(s: float) -> tuple[float, float, float]:
        d1 = (g(s, 0.0, lam) - g(-s, 0.0, lam)) / (2 * s)
        d2 = (g(s, 0.0, lam) - 2 * g(0.0, 0.0, lam) + g(-s, 0.0, lam)) / (s * s)
        de = (g(0.0, s, lam) - g(0.0, -s, lam)) / (2 * s)
        return d1, d2, de

    coarse, fine = estimates(h), estimates(h / 2)
    richardson = [(4 * f - c) / 3 for c, f in zip(coarse, fine)]
    # Second-order schemes shrink the error by about 4 when h halves, so the
    # extrapolated value must sit much closer to the fine one than the coarse.
    converged = all(abs(r - f) <= abs(f - c) / 2 + 1e-9 for r, f, c in zip(richardson, fine, coarse))
    d1, d2, de = richardson
    g0 = g(0.0, 0.0, lam)
    notes = []
    if abs(g0) > margin:
        notes.append(f"g(0) = {g0:.3g} is not 0")
    if abs(d1 - 1.0) > 1e-4:
        notes.append(f"g'(0) = {d1:.6g} is not 1")
    if abs(d2) <= 1e-4:
        notes.append("g''(0) vanishes (degenerate curvature)")
    if abs(de) <= 1e-4:
        notes.append("dg/deps vanishes (parameter does not unfold)")
    if not converged:
        notes.append("finite differences do not converge at second order")
    return GenericityReport(not notes, g0, d1, d2, de, converged, tuple(notes))

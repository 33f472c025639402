"""Seeded random characteristic data that is always realizable."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .configuration import Configuration, Group
from .marked import CharacteristicData, MarkedCircleSet, MarkedIntervalSet, non_synchronized
from .realization import check_realizable

GRID = 97


class InfeasibleRequest(ValueError):
    pass


def random_classes(n: int, rng: random.Random, pair_prob: float = 0.5, circle: bool = False) -> list[list[int]]:
    """Random non-interleaving partition of range(n) into 1- and 2-blocks.

    Pairing neighbours in the list of still unclassed points never creates a
    crossing, and every non-crossing partition is reachable this way.
    """
    left = list(range(n))
    classes = []
    while left:
        if len(left) > 1 and rng.random() < pair_prob:
            span = len(left) if circle else len(left) - 1
            i = rng.randrange(span)
            a, b = left[i], left[(i + 1) % len(left)]
            classes.append(sorted((a, b)))
            left.remove(a)
            left.remove(b)
        else:
            classes.append([left.pop(rng.randrange(len(left)))])
    return sorted(classes)


def _grid_points(count: int, rng: random.Random, lo: int, hi: int, denom: int) -> list[Fraction]:
    return sorted(Fraction(x, denom) for x in rng.sample(range(lo, hi), count))


def random_characteristic(
    config: Configuration,
    k: int,
    n: int,
    l: int,
    m: int,
    rng: random.Random,
    pair_prob: float = 0.5,
    allow_pairs: Optional[bool] = None,
    tries: int = 200,
) -> CharacteristicData:
    """Realizable data with |Aplus| = k, |Aminus| = n, |L1| = l, |L2| = m.

    Under a3 = 0 two-point classes in L2 and Aplus are never drawn;
    ``allow_pairs=True`` there raises InfeasibleRequest.
    """
    if min(k, n, l, m) < 0 or max(k, n, l, m) >= GRID // 2:
        raise InfeasibleRequest("set sizes must lie in 0..47")
    if config.group is Group.A3zero and allow_pairs:
        raise InfeasibleRequest("configurations with a3 = 0 admit no two-element classes in L2 or Aplus")
    pp = 0.0 if allow_pairs is False else pair_prob
    pp_annulus = 0.0 if config.group is Group.A3zero else pp
    for _ in range(tries):
        aplus = _grid_points(k, rng, 0, GRID, GRID)
        beta1 = None
        if config.a2 == 1:
            free = sorted(set(range(GRID)) - {int(a * GRID) for a in aplus})
            beta1 = Fraction(rng.choice(free), GRID)
        aminus = [(x + Fraction(1, 2 * GRID)) % 1 for x in _grid_points(n, rng, 0, GRID, GRID)]
        extended = aplus + ([beta1] if beta1 is not None else [])
        if not non_synchronized(MarkedCircleSet(extended), MarkedCircleSet(aminus)):
            continue
        L1 = MarkedIntervalSet(_grid_points(l, rng, -GRID + 1, 0, GRID), random_classes(l, rng, pp))
        L2 = MarkedIntervalSet(_grid_points(m, rng, 1, GRID, GRID), random_classes(m, rng, pp_annulus))
        Ap = MarkedCircleSet(aplus, random_classes(k, rng, pp_annulus, circle=True))
        Am = MarkedCircleSet(aminus, random_classes(n, rng, pp, circle=True))
        liaison = _random_liaison(config, L1, L2, Ap, Am, beta1, rng)
        D = CharacteristicData(config, L1, L2, Ap, Am, tuple(sorted(liaison)), beta1)
        if check_realizable(D):
            return D
    raise InfeasibleRequest("no realizable instance found for these sizes")


def _random_liaison(config, L1, L2, Ap, Am, beta1, rng: random.Random) -> list[tuple[int, int]]:
    """Greedily add random liaison pairs, one or two at a time (condition 4
    can need two pairs together), keeping the data realizable."""
    candidates = [(x, y) for x in range(len(L2.classes)) for y in range(len(Ap.classes))]
    rng.shuffle(candidates)
    liaison: list[tuple[int, int]] = []
    budget = rng.randint(0, len(candidates))
    for step, first in enumerate(candidates[:budget]):
        for extra in [()] + [(c,) for c in candidates[step + 1:budget]]:
            trial = liaison + [first, *extra]
            xs, ys = [x for x, _ in trial], [y for _, y in trial]
            if len(set(xs)) < len(xs) or len(set(ys)) < len(ys):
                continue
            if check_realizable(CharacteristicData(config, L1, L2, Ap, Am, tuple(sorted(trial)), beta1)):
                liaison = trial
                break
    return liaison

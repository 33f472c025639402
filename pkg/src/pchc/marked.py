"""Marked interval and circle sets with exact rational coordinates.

A marked set is a finite point set partitioned into classes of one or two
points such that no two 2-point classes interleave.  Interval sets live in
(-1, 1); circle sets live in [0, 1) read modulo 1.

Point indices inside ``classes`` are 0-based positions in ``points``.  The
(i, j) indices carried by Delta entries are 1-based, matching the usual
enumeration a_1..a_k, d_1..d_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence, Union

from .configuration import Configuration

Number = Union[Fraction, int, str]


def to_fraction(value: Number | float) -> Fraction:
    """Exact conversion; strings may be "p/q", integers or decimals."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # The shortest repr round-trips, so 0.1 reads as 1/10 rather than its binary expansion.
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    raise TypeError(f"cannot read {value!r} as a rational number")


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _classes_tuple(classes: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(sorted(int(i) for i in block)) for block in classes)


@dataclass(frozen=True)
class MarkedIntervalSet:
    points: tuple[Fraction, ...]
    classes: tuple[tuple[int, ...], ...]

    def __init__(self, points: Iterable[Number], classes: Iterable[Iterable[int]] | None = None):
        pts = tuple(to_fraction(p) for p in points)
        cls = _classes_tuple(classes) if classes is not None else tuple((i,) for i in range(len(pts)))
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "classes", cls)

    def __len__(self) -> int:
        return len(self.points)

    def class_of(self) -> dict[int, int]:
        """Map point index -> class index."""
        return {p: c for c, block in enumerate(self.classes) for p in block}

    def two_classes(self) -> list[int]:
        return [c for c, block in enumerate(self.classes) if len(block) == 2]


@dataclass(frozen=True)
class MarkedCircleSet:
    points: tuple[Fraction, ...]
    classes: tuple[tuple[int, ...], ...]

    def __init__(self, points: Iterable[Number], classes: Iterable[Iterable[int]] | None = None):
        pts = tuple(to_fraction(p) for p in points)
        cls = _classes_tuple(classes) if classes is not None else tuple((i,) for i in range(len(pts)))
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "classes", cls)

    def __len__(self) -> int:
        return len(self.points)

    def class_of(self) -> dict[int, int]:
        return {p: c for c, block in enumerate(self.classes) for p in block}

    def two_classes(self) -> list[int]:
        return [c for c, block in enumerate(self.classes) if len(block) == 2]


MarkedSet = Union[MarkedIntervalSet, MarkedCircleSet]


def sorted_marked(points: Sequence[Number], classes: Iterable[Iterable[int]] | None,
                  kind: type[MarkedIntervalSet] | type[MarkedCircleSet]) -> MarkedSet:
    """Build a marked set with points sorted ascending, remapping class members.

    Class order is preserved so that class indices used by a liaison
    relation stay valid.
    """
    fr = [to_fraction(p) for p in points]
    if kind is MarkedCircleSet:
        fr = [p % 1 for p in fr]
    order = sorted(range(len(fr)), key=lambda i: fr[i])
    new_index = {old: new for new, old in enumerate(order)}
    cls = classes if classes is not None else [[i] for i in range(len(fr))]
    return kind([fr[i] for i in order], [[new_index[i] for i in block] for block in cls])


@dataclass(frozen=True)
class CharacteristicData:
    """Configuration word plus the four marked sets and the liaison relation.

    ``liaison`` pairs an L2 class index with an Aplus class index.
    ``beta1`` is the circle coordinate of the separatrix beta1 on the outer
    side of the parabolic cycle; it is meaningful only when a2 = 1 and may
    be left as None, in which case an admissible position is chosen.
    """

    config: Configuration
    L1: MarkedIntervalSet = field(default_factory=lambda: MarkedIntervalSet([]))
    L2: MarkedIntervalSet = field(default_factory=lambda: MarkedIntervalSet([]))
    Aplus: MarkedCircleSet = field(default_factory=lambda: MarkedCircleSet([]))
    Aminus: MarkedCircleSet = field(default_factory=lambda: MarkedCircleSet([]))
    liaison: tuple[tuple[int, int], ...] = ()
    beta1: Fraction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "liaison", tuple(sorted((int(a), int(b)) for a, b in self.liaison)))
        if self.beta1 is not None:
            object.__setattr__(self, "beta1", to_fraction(self.beta1))

    def liaison_points(self) -> list[tuple[int, int]]:
        """Point-level liaison: (L2 point index, Aplus point index) pairs."""
        out = []
        for x, y in self.liaison:
            for b in self.L2.classes[x]:
                for c in self.Aplus.classes[y]:
                    out.append((b, c))
        return sorted(out)


# ---------------------------------------------------------------- validation


def _partition_violations(s: MarkedSet) -> list[str]:
    out = []
    seen: dict[int, int] = {}
    for c, block in enumerate(s.classes):
        if len(block) not in (1, 2):
            out.append(f"class {c} has {len(block)} points")
        for p in block:
            if not 0 <= p < len(s.points):
                out.append(f"class {c} refers to missing point {p}")
            elif p in seen:
                out.append(f"point {p} is in classes {seen[p]} and {c}")
            else:
                seen[p] = c
        if len(block) == 2 and block[0] == block[1]:
            out.append(f"class {c} repeats point {block[0]}")
    for p in range(len(s.points)):
        if p not in seen:
            out.append(f"point {p} belongs to no class")
    return out


def _interleaving_pairs(n_points: int, classes: Sequence[Sequence[int]]) -> Iterator[tuple[int, int]]:
    """Pairs of 2-point classes whose chords cross.

    Positions are ranks along the interval (or around the circle), so one
    test covers both cases: {a<b} and {c<d} cross iff exactly one of c, d
    lies strictly between a and b.
    """
    pairs = [(c, block) for c, block in enumerate(classes) if len(block) == 2]
    for (c1, (a, b)), (c2, (x, y)) in combinations(pairs, 2):
        if (a < x < b) != (a < y < b):
            yield c1, c2


def validate_marked(s: MarkedSet) -> list[str]:
    """List of violated invariants; empty when ``s`` is a valid marked set."""
    out = []
    if isinstance(s, MarkedIntervalSet):
        for i, p in enumerate(s.points):
            if not -1 < p < 1:
                out.append(f"point {i} = {p} outside (-1, 1)")
        for i in range(len(s.points) - 1):
            if not s.points[i] < s.points[i + 1]:
                out.append(f"points {i} and {i + 1} not strictly increasing")
    else:
        for i, p in enumerate(s.points):
            if not 0 <= p < 1:
                out.append(f"point {i} = {p} outside [0, 1)")
        if len({p % 1 for p in s.points}) != len(s.points):
            out.append("repeated circle point")
    partition = _partition_violations(s)
    out.extend(partition)
    if partition:
        return out
    out.extend(f"classes {c1} and {c2} interleave" for c1, c2 in interleaving_classes(s))
    return out


def interleaving_classes(s: MarkedSet) -> list[tuple[int, int]]:
    """Pairs of 2-point classes that interleave (cross, on a circle)."""
    if _partition_violations(s):
        return []
    ranks = sorted(range(len(s.points)), key=lambda i: s.points[i])
    rank = {p: r for r, p in enumerate(ranks)}
    ranked = [sorted(rank[p] for p in block) for block in s.classes]
    return list(_interleaving_pairs(len(s.points), ranked))


def is_marked(s: MarkedSet) -> bool:
    return not validate_marked(s)


def validate_characteristic(D: CharacteristicData, interleaving: bool = True) -> list[str]:
    """Structural violations of characteristic data (not realizability).

    ``interleaving=False`` leaves out crossing 2-point classes, which the
    realizability check reports as a condition of its own.
    """
    out = []
    for name in ("L1", "L2", "Aplus", "Aminus"):
        for v in validate_marked(getattr(D, name)):
            if interleaving or not v.endswith("interleave"):
                out.append(f"{name}: {v}")
    out.extend(f"L1: point {i} = {p} is not negative" for i, p in enumerate(D.L1.points) if p >= 0)
    out.extend(f"L2: point {i} = {p} is not positive" for i, p in enumerate(D.L2.points) if p <= 0)
    seen_l2: set[int] = set()
    seen_ap: set[int] = set()
    for x, y in D.liaison:
        if not 0 <= x < len(D.L2.classes):
            out.append(f"liaison refers to missing L2 class {x}")
        elif x in seen_l2:
            out.append(f"L2 class {x} appears in two liaison pairs")
        if not 0 <= y < len(D.Aplus.classes):
            out.append(f"liaison refers to missing Aplus class {y}")
        elif y in seen_ap:
            out.append(f"Aplus class {y} appears in two liaison pairs")
        seen_l2.add(x)
        seen_ap.add(y)
    if D.beta1 is not None:
        if D.config.a2 != 1:
            out.append("beta1 position given but a2 = 0")
        elif not 0 <= D.beta1 < 1:
            out.append(f"beta1 = {D.beta1} outside [0, 1)")
        elif D.beta1 in set(D.Aplus.points):
            out.append("beta1 coincides with an Aplus point")
    return out


# -------------------------------------------------------------------- Delta


@dataclass(frozen=True, order=True)
class DeltaEntry:
    value: Fraction
    i: int
    j: int


def circle_differences(plus: Sequence[Fraction], minus: Sequence[Fraction]) -> list[DeltaEntry]:
    entries = [DeltaEntry((a - d) % 1, i + 1, j + 1)
               for i, a in enumerate(plus) for j, d in enumerate(minus)]
    return sorted(entries)


def delta_set(Aplus: MarkedCircleSet, Aminus: MarkedCircleSet) -> list[DeltaEntry]:
    """All k*n differences (a_i - d_j) mod 1, ascending, duplicates kept."""
    return circle_differences(Aplus.points, Aminus.points)


def non_synchronized(Aplus: MarkedCircleSet, Aminus: MarkedCircleSet) -> bool:
    values = [e.value for e in delta_set(Aplus, Aminus)]
    return len(set(values)) == len(values)


# -------------------------------------------------------------- equivalence


def interval_isomorphism(L: MarkedIntervalSet, M: MarkedIntervalSet) -> tuple[int, ...] | None:
    """Class map induced by the order isomorphism, or None.

    Entry c is the index of the class of M that class c of L is sent to.
    """
    if len(L.points) != len(M.points) or len(L.classes) != len(M.classes):
        return None
    rank_l = sorted(range(len(L.points)), key=lambda i: L.points[i])
    rank_m = sorted(range(len(M.points)), key=lambda i: M.points[i])
    point_map = {a: b for a, b in zip(rank_l, rank_m)}
    m_class = {frozenset(block): c for c, block in enumerate(M.classes)}
    out = []
    for block in L.classes:
        image = frozenset(point_map[p] for p in block)
        if image not in m_class:
            return None
        out.append(m_class[image])
    return tuple(out)


def interval_equivalent(L: MarkedIntervalSet, M: MarkedIntervalSet) -> bool:
    return interval_isomorphism(L, M) is not None


@dataclass(frozen=True)
class CircleAlignment:
    """Index i of the first pair maps to (i + shift) mod size of the second."""

    shift_plus: int
    shift_minus: int
    alpha: Fraction


def _dense_ranks(values: Sequence[Fraction]) -> tuple[int, ...]:
    distinct = sorted(set(values))
    pos = {v: r for r, v in enumerate(distinct)}
    return tuple(pos[v] for v in values)


def circle_alignments(A_plus: Sequence[Fraction], A_minus: Sequence[Fraction],
                      B_plus: Sequence[Fraction], B_minus: Sequence[Fraction]) -> Iterator[CircleAlignment]:
    """Every rotation pair (with one witness alpha) making the Delta orders agree.

    The order of {tau + alpha mod 1} only changes when some tau + alpha
    crosses an integer, so alpha = -tau mod 1 over all tau (plus 0) covers
    every ordering class.
    """
    a_plus, a_minus = sorted(A_plus), sorted(A_minus)
    b_plus, b_minus = sorted(B_plus), sorted(B_minus)
    k, n = len(a_plus), len(a_minus)
    if k != len(b_plus) or n != len(b_minus):
        return
    index_pairs = [(i, j) for i in range(k) for j in range(n)]
    lam = [(a_plus[i] - a_minus[j]) % 1 for i, j in index_pairs]
    lam_rank = _dense_ranks(lam)
    for s in range(max(k, 1)):
        for t in range(max(n, 1)):
            tau = [(b_plus[(i + s) % k] - b_minus[(j + t) % n]) % 1 for i, j in index_pairs]
            candidates = sorted({Fraction(0)} | {(-x) % 1 for x in tau})
            for alpha in candidates:
                if _dense_ranks([(x + alpha) % 1 for x in tau]) == lam_rank:
                    yield CircleAlignment(s, t, alpha)
                    break


def circle_pair_witness(Ap: MarkedCircleSet, Am: MarkedCircleSet,
                        Bp: MarkedCircleSet, Bm: MarkedCircleSet) -> CircleAlignment | None:
    return next(circle_alignments(Ap.points, Am.points, Bp.points, Bm.points), None)


def circle_pair_equivalent(Ap: MarkedCircleSet, Am: MarkedCircleSet,
                           Bp: MarkedCircleSet, Bm: MarkedCircleSet) -> bool:
    return circle_pair_witness(Ap, Am, Bp, Bm) is not None


def _rotated_class_map(A: MarkedCircleSet, B: MarkedCircleSet, shift: int) -> tuple[int, ...] | None:
    """Class map of A -> B under the rotation of sorted indices by ``shift``."""
    n = len(A.points)
    if n != len(B.points) or len(A.classes) != len(B.classes):
        return None
    rank_a = sorted(range(n), key=lambda i: A.points[i])
    rank_b = sorted(range(n), key=lambda i: B.points[i])
    point_map = {rank_a[r]: rank_b[(r + shift) % n] for r in range(n)} if n else {}
    b_class = {frozenset(block): c for c, block in enumerate(B.classes)}
    out = []
    for block in A.classes:
        image = frozenset(point_map[p] for p in block)
        if image not in b_class:
            return None
        out.append(b_class[image])
    return tuple(out)


@dataclass(frozen=True)
class CharacteristicWitness:
    L1_map: tuple[int, ...]
    L2_map: tuple[int, ...]
    alignment: CircleAlignment


def _with_beta1(D: CharacteristicData) -> MarkedCircleSet:
    """Aplus extended by the beta1 point as an extra singleton class (last)."""
    pts = list(D.Aplus.points) + [D.beta1]
    return MarkedCircleSet(pts, list(D.Aplus.classes) + [[len(pts) - 1]])


def _use_beta1(D: CharacteristicData, E: CharacteristicData) -> bool:
    return D.config.a2 == 1 and D.beta1 is not None and E.beta1 is not None


def _liaison_maps(D: CharacteristicData, E: CharacteristicData,
                  l2_map: Sequence[int], ap_map: Sequence[int]) -> bool:
    image = {(l2_map[x], ap_map[y]) for x, y in D.liaison}
    return image == set(E.liaison)


def characteristic_witness(D: CharacteristicData, E: CharacteristicData) -> CharacteristicWitness | None:
    """Witness of equivalence of two characteristic data, or None.

    Besides the interval isomorphisms and a Delta-order alignment of the
    circle pair, the alignment must carry classes of Aplus and Aminus to
    classes and liaison pairs to liaison pairs.  When both sides fix the
    beta1 point it is treated as a marked extra point of Aplus.
    """
    if D.config != E.config:
        return None
    m1 = interval_isomorphism(D.L1, E.L1)
    m2 = interval_isomorphism(D.L2, E.L2)
    if m1 is None or m2 is None:
        return None
    with_b = _use_beta1(D, E)
    dp = _with_beta1(D) if with_b else D.Aplus
    ep = _with_beta1(E) if with_b else E.Aplus
    for al in circle_alignments(dp.points, D.Aminus.points, ep.points, E.Aminus.points):
        ap_map = _rotated_class_map(dp, ep, al.shift_plus)
        am_map = _rotated_class_map(D.Aminus, E.Aminus, al.shift_minus)
        if ap_map is None or am_map is None:
            continue
        if with_b and ap_map[-1] != len(ep.classes) - 1:
            continue
        if _liaison_maps(D, E, m2, ap_map):
            return CharacteristicWitness(m1, m2, al)
    return None


def characteristic_equivalent(D: CharacteristicData, E: CharacteristicData) -> bool:
    return characteristic_witness(D, E) is not None


def combinatorial_equivalent(D: CharacteristicData, E: CharacteristicData) -> bool:
    """Equivalence forgetting the relative phases of Aplus and Aminus.

    Each circle set is compared up to rotation together with its marking;
    interval sets, liaison and configuration must match exactly.  This is
    the information a separatrix skeleton carries.
    """
    if D.config != E.config:
        return False
    m1 = interval_isomorphism(D.L1, E.L1)
    m2 = interval_isomorphism(D.L2, E.L2)
    if m1 is None or m2 is None:
        return False
    if len(D.Aminus) != len(E.Aminus) or not any(
            _rotated_class_map(D.Aminus, E.Aminus, t) is not None for t in range(max(len(D.Aminus), 1))):
        return False
    with_b = _use_beta1(D, E)
    dp = _with_beta1(D) if with_b else D.Aplus
    ep = _with_beta1(E) if with_b else E.Aplus
    for s in range(max(len(dp), 1)):
        ap_map = _rotated_class_map(dp, ep, s)
        if ap_map is None:
            continue
        if with_b and ap_map[-1] != len(ep.classes) - 1:
            continue
        if _liaison_maps(D, E, m2, ap_map):
            return True
    return False


# ------------------------------------------------------------ nesting order


class BasepointCollision(ValueError):
    pass


@dataclass(frozen=True)
class NestingOrder:
    """Nesting of classes: ``below`` holds (x, y) whenever x < y strictly."""

    size: int
    below: frozenset[tuple[int, int]]

    def leq(self, x: int, y: int) -> bool:
        return x == y or (x, y) in self.below

    def maximal(self) -> list[int]:
        covered = {x for x, _ in self.below}
        return [c for c in range(self.size) if c not in covered]


def arc_position(value: Fraction, basepoint: Fraction) -> Fraction:
    """Position of ``value`` on the circle cut open at ``basepoint``."""
    return (value - basepoint) % 1


def partial_order_leq(s: MarkedSet, basepoint: Number | None = None) -> NestingOrder:
    """Nesting order of classes; circle sets need a basepoint off the set."""
    if isinstance(s, MarkedCircleSet):
        if basepoint is None:
            raise ValueError("circle sets need a basepoint")
        p = to_fraction(basepoint) % 1
        if any(x % 1 == p for x in s.points):
            raise BasepointCollision("basepoint collision")
        coords = [arc_position(x, p) for x in s.points]
    else:
        coords = list(s.points)
    spans = [(min(coords[i] for i in block), max(coords[i] for i in block)) for block in s.classes]
    below = set()
    for y, block in enumerate(s.classes):
        if len(block) != 2:
            continue
        lo, hi = spans[y]
        for x, (a, b) in enumerate(spans):
            if x != y and lo < a and b < hi:
                below.add((x, y))
    return NestingOrder(len(s.classes), frozenset(below))

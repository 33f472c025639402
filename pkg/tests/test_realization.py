import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pchc.configuration import Group, enumerate_configurations, validate_configuration
from pchc.generate import InfeasibleRequest, random_characteristic, random_classes
from pchc.marked import (
    CharacteristicData,
    MarkedCircleSet,
    MarkedIntervalSet,
    combinatorial_equivalent,
    validate_marked,
)
from pchc.realization import NotRealizable, check_realizable, gap_midpoints, realize, realize_disk
from pchc.skeleton import (
    CycleSide,
    beta1_in_support,
    compute_elbs,
    compute_lbs,
    extract_characteristic_data,
    extract_configuration,
    validate_skeleton,
)

CONFIGS = [c.word for c in enumerate_configurations()]


def _data(word, **kw):
    return CharacteristicData(validate_configuration(word), **kw)


# --------------------------------------------------------- check_realizable


def test_single_liaison_000_is_realizable():
    D = _data("000", L2=MarkedIntervalSet(["0.3"]), Aplus=MarkedCircleSet(["0.1"]), liaison=((0, 0),))
    report = check_realizable(D)
    assert report.realizable and report.failed == ()


def test_two_element_class_under_a3_zero_fails_condition_6():
    D = _data("000", Aplus=MarkedCircleSet(["0.1", "0.4"], [[0, 1]]))
    assert check_realizable(D).failed == ("6",)


def test_non_maximal_liaison_fails_condition_3():
    L2 = MarkedIntervalSet(["0.2", "0.4", "0.6", "0.8"], [[0, 3], [1, 2]])
    D = _data("101", L2=L2, Aplus=MarkedCircleSet(["0.5"]), liaison=((1, 0),))
    report = check_realizable(D)
    assert report.failed == ("3",)
    with pytest.raises(NotRealizable, match="not maximal"):
        realize(D)


def test_interleaving_fails_condition_1():
    D = _data("100", L1=MarkedIntervalSet(["-0.8", "-0.6", "-0.4", "-0.2"], [[0, 2], [1, 3]]))
    assert "1" in check_realizable(D).failed


def test_crossing_liaison_fails_condition_2():
    # b1 < b2 but c2 comes before c1 from every gap of a two-point Aplus, once
    # a third point pins the order.
    D = _data("000", L2=MarkedIntervalSet(["0.2", "0.4"]), Aplus=MarkedCircleSet(["0.1", "0.3", "0.6"]),
              liaison=((0, 1), (1, 0)))
    report = check_realizable(D)
    # Cutting between 0.3 and 0.6 puts 0.6 first and still reverses the pair.
    assert report.failed == () or report.failed == ("2",)
    strict = _data("000", L2=MarkedIntervalSet(["0.2", "0.4", "0.6"]),
                   Aplus=MarkedCircleSet(["0.1", "0.3", "0.6"]), liaison=((0, 0), (1, 2), (2, 1)))
    assert check_realizable(strict).failed == ("2",)


def test_isolated_liaison_pair_fails_condition_4():
    D = _data("101", L2=MarkedIntervalSet(["0.5"]), Aplus=MarkedCircleSet(["0.5"]), liaison=((0, 0),))
    assert check_realizable(D).failed == ("4",)


def test_adjacent_liaison_pairs_satisfy_condition_4():
    D = _data("101", L2=MarkedIntervalSet(["0.3", "0.6"]), Aplus=MarkedCircleSet(["0.2", "0.7"]),
              liaison=((0, 0), (1, 1)))
    assert check_realizable(D).realizable


def test_beta1_position_decides_condition_5():
    base = dict(L2=MarkedIntervalSet(["0.3", "0.6"]), Aplus=MarkedCircleSet(["0.2", "0.7"]),
                liaison=((0, 0), (1, 1)))
    # beta1 between the two liaison points breaks their consecutive order.
    assert check_realizable(_data("111", beta1=F(1, 2), **base)).failed == ("5",)
    assert check_realizable(_data("111", beta1=F(9, 10), **base)).realizable


def test_synchronized_data_fails_genericity():
    D = _data("100", Aplus=MarkedCircleSet(["0", "1/2"]), Aminus=MarkedCircleSet(["1/10", "3/5"]))
    assert check_realizable(D).failed == ("genericity",)


def test_gap_midpoints():
    assert gap_midpoints([]) == [0]
    assert gap_midpoints([F(1, 4), F(3, 4)]) == [0, F(1, 2)]


configs = st.sampled_from(CONFIGS)


@settings(max_examples=60, deadline=None)
@given(configs, st.integers(0, 10**6))
def test_removing_liaison_keeps_conditions_1_3_6(word, seed):
    config = validate_configuration(word)
    if config.group is Group.A2one:
        return
    rng = random.Random(seed)
    D = random_characteristic(config, 3, 1, 0, 3, rng)
    for drop in range(len(D.liaison)):
        E = CharacteristicData(D.config, D.L1, D.L2, D.Aplus, D.Aminus,
                               D.liaison[:drop] + D.liaison[drop + 1:], D.beta1)
        assert not {"1", "3", "6"} & set(check_realizable(E).failed)


# ------------------------------------------------------------- realize_disk


def _disk_counts(g):
    kinds = [v.kind for v in g.vertices]
    return kinds.count("saddle"), kinds.count("attractor"), kinds.count("repeller")


@pytest.mark.parametrize("outward,node", [(True, "repeller"), (False, "attractor")])
def test_empty_disk_has_one_node(outward, node):
    g = realize_disk(MarkedCircleSet([]), outward)
    assert validate_skeleton(g, pc_hc=False) == []
    assert [v.kind for v in g.vertices] == [node]


def test_one_chord_disk():
    g = realize_disk(MarkedCircleSet(["0.2", "0.7"], [[0, 1]]), outward=False)
    assert validate_skeleton(g, pc_hc=False) == []
    assert _disk_counts(g) == (1, 2, 0)


def test_nested_chords_disk():
    s = MarkedCircleSet(["0.1", "0.2", "0.3", "0.4"], [[0, 3], [1, 2]])
    g = realize_disk(s)
    assert validate_skeleton(g, pc_hc=False) == []
    assert _disk_counts(g) == (2, 0, 3)


def _boundary_classes(g):
    """Classes read back from the boundary, in ascending coordinate order."""
    ends = list(reversed(g.cycle["boundary"].inner_ends))
    partner = []
    for eid, side in ends:
        e = g.edge[eid]
        partner.append(e.source if side == "t" else e.target)
    blocks = {}
    for pos, v in enumerate(partner):
        blocks.setdefault(v, []).append(pos)
    return sorted(blocks.values())


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 6), st.booleans(), st.booleans(), st.integers(0, 10**6))
def test_disk_counts_and_boundary_order(n, circle, outward, seed):
    rng = random.Random(seed)
    classes = random_classes(n, rng, circle=circle)
    points = [F(i + 1, n + 2) - (0 if circle else 1) for i in range(n)]
    s = (MarkedCircleSet if circle else MarkedIntervalSet)(points, classes)
    assert validate_marked(s) == []
    g = realize_disk(s, outward)
    assert validate_skeleton(g, pc_hc=False) == []
    c2 = sum(1 for b in classes if len(b) == 2)
    c1 = n - 2 * c2
    saddles, attractors, repellers = _disk_counts(g)
    assert saddles == c2 + c1
    regions, opposite = (repellers, attractors) if outward else (attractors, repellers)
    assert opposite == c1
    assert regions == c1 + c2 + 1
    if n:
        assert _boundary_classes(g) == sorted(classes)


def test_disk_rejects_interleaving():
    with pytest.raises(NotRealizable):
        realize_disk(MarkedCircleSet(["0.1", "0.2", "0.3", "0.4"], [[0, 2], [1, 3]]))


# ------------------------------------------------------------------ realize


@pytest.mark.parametrize("word", CONFIGS)
def test_empty_data_gives_base_skeleton(word):
    D = _data(word)
    g = realize(D)
    assert validate_skeleton(g) == []
    assert extract_configuration(g).word == word
    kinds = [v.kind for v in g.vertices]
    assert "saddle" not in kinds and kinds.count("saddle_node") == 1
    beta1 = g.edge[g.designated.beta1]
    assert (beta1.source == CycleSide("gamma", "outer")) == (word[1] == "1")


def test_worked_instance_with_one_liaison_curve():
    L2 = MarkedIntervalSet([F(i, 6) for i in range(1, 6)])
    Aplus = MarkedCircleSet([F(i, 7) for i in range(7)])
    D = _data("111", L2=L2, Aplus=Aplus, Aminus=MarkedCircleSet([F(1, 14)]), liaison=((1, 6),))
    g = realize(D)
    assert validate_skeleton(g) == []
    [s] = [v for v in g.vertices if v.label == "B2=C7"]
    ends = {g.edge[e].endpoint("t" if side == "s" else "s") for e, side in s.rotation}
    assert g.designated.N in ends and CycleSide("gamma", "outer") in ends
    assert combinatorial_equivalent(D, extract_characteristic_data(g))


def test_realize_rejects_naming_condition():
    D = _data("100", L2=MarkedIntervalSet(["0.2", "0.4"], [[0, 1]]))
    with pytest.raises(NotRealizable) as info:
        realize(D)
    assert info.value.failed == ("6",)


def test_generator_rejects_pairs_under_a3_zero():
    with pytest.raises(InfeasibleRequest):
        random_characteristic(validate_configuration("000"), 2, 1, 0, 2, random.Random(0), allow_pairs=True)


@settings(max_examples=150, deadline=None)
@given(configs, st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.integers(0, 10**6))
def test_round_trip(word, k, n, l, m, seed):
    D = random_characteristic(validate_configuration(word), k, n, l, m, random.Random(seed))
    assert check_realizable(D)
    g = realize(D)
    assert validate_skeleton(g) == []
    assert extract_configuration(g) == D.config
    E = extract_characteristic_data(g)
    assert combinatorial_equivalent(D, E)
    assert check_realizable(E)
    assert compute_lbs(g) == compute_elbs(g)
    assert beta1_in_support(g, compute_elbs(g)) == (D.config.a2 == 1)

from itertools import product

import pytest

from pchc.configuration import (
    ConfigurationError,
    Group,
    configuration_group,
    enumerate_configurations,
    is_admissible,
    validate_configuration,
)

ALL_WORDS = ["".join(bits) for bits in product("01", repeat=3)]


def test_admissible_examples():
    assert validate_configuration("111").word == "111"
    assert validate_configuration("000").word == "000"
    with pytest.raises(ConfigurationError):
        validate_configuration("110")


@pytest.mark.parametrize("word", ALL_WORDS)
def test_accepts_exactly_words_outside_110_010(word):
    assert is_admissible(word) == (word not in {"110", "010"})


@pytest.mark.parametrize("word", ["", "11", "1111", "1a1", "2 0", 101])
def test_malformed_words(word):
    with pytest.raises(ConfigurationError):
        validate_configuration(word)


def test_enumeration_order_and_size():
    words = [c.word for c in enumerate_configurations()]
    assert words == ["111", "011", "101", "001", "100", "000"]
    assert "011" in words and "010" not in words
    assert all(is_admissible(w) for w in words)


def test_groups_partition_two_two_two():
    groups = {}
    for c in enumerate_configurations():
        groups.setdefault(configuration_group(c), []).append(c.word)
    assert groups == {
        Group.A2one: ["111", "011"],
        Group.A2zeroA3one: ["101", "001"],
        Group.A3zero: ["100", "000"],
    }

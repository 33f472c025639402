"""Configuration words a1a2a3 and their admissibility.

a1: the parabolic cycle and the homoclinic loop have consistent time
    orientations.
a2: the stable separatrix beta1 of the saddle-node winds off the
    parabolic cycle.
a3: the parabolic cycle repels on the side facing the homoclinic loop.

A word with a2 = 1 and a3 = 0 is impossible: beta1 cannot wind off a
cycle that attracts on that side.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class ConfigurationError(ValueError):
    """Malformed or inadmissible configuration word."""


class Group(str, Enum):
    A2one = "A2one"
    A2zeroA3one = "A2zeroA3one"
    A3zero = "A3zero"


@dataclass(frozen=True, order=True)
class Configuration:
    a1: int
    a2: int
    a3: int

    def __post_init__(self) -> None:
        for bit in (self.a1, self.a2, self.a3):
            if bit not in (0, 1):
                raise ConfigurationError(f"bits must be 0 or 1, got {bit!r}")
        if self.a2 == 1 and self.a3 == 0:
            raise ConfigurationError(
                f"inadmissible configuration {self.word}: a2=1 requires a3=1"
            )

    @property
    def word(self) -> str:
        return f"{self.a1}{self.a2}{self.a3}"

    @property
    def group(self) -> Group:
        return configuration_group(self)

    def __str__(self) -> str:
        return self.word


# Fixed documented order: grouped by construction family, a1=1 first.
_ADMISSIBLE = ("111", "011", "101", "001", "100", "000")


def parse_word(word: str) -> tuple[int, int, int]:
    """Syntax check only: exactly three characters from {0, 1}."""
    if not isinstance(word, str) or len(word) != 3 or set(word) - {"0", "1"}:
        raise ConfigurationError(f"malformed configuration word {word!r}")
    return int(word[0]), int(word[1]), int(word[2])


def validate_configuration(word: str) -> Configuration:
    """Return the configuration for an admissible word.

    Raises ConfigurationError for malformed words and for the two
    inadmissible words 110 and 010.
    """
    return Configuration(*parse_word(word))


def is_admissible(word: str) -> bool:
    try:
        validate_configuration(word)
    except ConfigurationError:
        return False
    return True


def enumerate_configurations() -> list[Configuration]:
    return [validate_configuration(w) for w in _ADMISSIBLE]


def configuration_group(c: Configuration) -> Group:
    if c.a2 == 1:
        return Group.A2one
    if c.a3 == 1:
        return Group.A2zeroA3one
    return Group.A3zero

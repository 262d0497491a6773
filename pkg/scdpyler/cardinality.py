#  Copyright (c) 2026, scdpyler developers. All rights reserved.

import re
from dataclasses import dataclass
from typing import Union

from .diagnostic import ModelError

#: upper bound meaning "many"
MANY = "*"

_CARD_TEXT = re.compile(r"^(?:(?P<lo>[0-9]+)\.\.(?P<hi>[0-9]+|\*)|(?P<single>[0-9]+|\*))$")


@dataclass(frozen=True)
class Card(object):
    """Association-end cardinality in the '0', '1', '*' vocabulary.

    min is 0 or 1, max is 1 or MANY. That leaves 0..1, 1, 0..* and 1..*.
    """
    min: int
    max: Union[int, str]

    def __post_init__(self):
        if self.min not in (0, 1) or isinstance(self.min, bool):
            raise ModelError("E-PAR-008", f"cardinality lower bound must be 0 or 1, got {self.min}")
        if self.max not in (1, MANY) or isinstance(self.max, bool):
            raise ModelError("E-PAR-008", f"cardinality upper bound must be 1 or *, got {self.max}")

    @property
    def is_many(self) -> bool:
        return self.max == MANY

    @staticmethod
    def parse(text: str) -> "Card":
        """Reads 0..1, 1, 1..1, 0..*, 1..* or * (an alias of 0..*)."""
        match = _CARD_TEXT.match(text.strip()) if isinstance(text, str) else None
        if match is None:
            raise ModelError("E-PAR-008", f"'{text}' is not a cardinality; use 0..1, 1, 0..* or 1..*")
        if match.group("single") is not None:
            single = match.group("single")
            if single == MANY:
                return Card(0, MANY)
            return Card(int(single), int(single))
        hi = match.group("hi")
        return Card(int(match.group("lo")), MANY if hi == MANY else int(hi))

    def __str__(self):
        if self.min == 1 and self.max == 1:
            return "1"
        return f"{self.min}..{self.max}"


ZERO_OR_ONE = Card(0, 1)
EXACTLY_ONE = Card(1, 1)
ZERO_OR_MANY = Card(0, MANY)
ONE_OR_MANY = Card(1, MANY)

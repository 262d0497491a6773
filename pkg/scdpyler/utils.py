################################################################
#       utils: small helpers shared by the model and the passes
#       Copyright (c) 2026, scdpyler developers. All rights reserved.
#
################################################################
import itertools as it
import re
from typing import Iterable, Iterator, Sequence, Tuple

IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

#: reserved words; they can never be used as names
KEYWORDS = frozenset([
    "scd", "concrete", "conceptual", "system", "composition", "environment", "structure",
    "mechanism", "properties", "dimension", "explode", "association", "intrinsic", "aggregate",
    "emergent", "structural", "interaction", "entity", "link", "actor", "step", "flow", "by",
    "counterpart", "env", "components", "sum", "count", "min", "max", "avg",
])


def is_identifier(name) -> bool:
    return isinstance(name, str) and IDENTIFIER.match(name) is not None and name not in KEYWORDS


def check_identifier(name, what="name"):
    """Raises ValueError unless name matches [A-Za-z_][A-Za-z0-9_]* and is not a keyword."""
    if not is_identifier(name):
        raise ValueError(f"{what} must be a non-keyword identifier ([A-Za-z_][A-Za-z0-9_]*): received {name!r}.")
    return name


def as_tuple(items, what="items") -> tuple:
    if items is None:
        return ()
    if isinstance(items, (str, bytes)):
        raise TypeError(f"{what} must be a sequence, not a string: received {items!r}.")
    return tuple(items)


def first_duplicate(names: Iterable[str]):
    """Returns the first name seen twice, or None."""
    seen = set()
    for name in names:
        if name in seen:
            return name
        seen.add(name)
    return None


def qualify(prefix: str, name: str) -> str:
    """Dot-joins a qualified prefix and a name; the root prefix is ''."""
    return f"{prefix}.{name}" if prefix else name


def bipartitions(items: Sequence) -> Iterator[Tuple[tuple, tuple]]:
    """All unordered bipartitions of items into two non-empty sides.

    The first item is pinned to the left side so every split is produced
    exactly once: 2**(n-1) - 1 splits for n items.
    """
    items = tuple(items)
    if len(items) < 2:
        return
    head, rest = items[0], items[1:]
    for size in range(0, len(rest)):
        for left_rest in it.combinations(rest, size):
            left = (head,) + left_rest
            right = tuple(x for x in rest if x not in left_rest)
            yield left, right

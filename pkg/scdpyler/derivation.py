#  Copyright (c) 2026, scdpyler developers. All rights reserved.

"""
Derivation expressions for aggregate and emergent properties.

A derivation is a small tree. Its leaves are numeric literals or folds over a
component property path; inner nodes combine two sub-expressions with +, -,
* or /. Two forms of path exist:

    components.weight   every component of the system that declares weight
    membrane.weight     the single component membrane

Trees are at most MAX_DEPTH levels deep, a leaf counting as one level.
"""

import decimal
import enum
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .diagnostic import ModelError
from .source_span import SourceSpan

MAX_DEPTH = 8

#: path target that stands for every component of the system
ALL_COMPONENTS = "components"


class FoldOp(enum.Enum):
    SUM = "sum"
    COUNT = "count"
    MIN = "min"
    MAX = "max"
    AVG = "avg"

    def __str__(self):
        return self.value


class ArithOp(enum.Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"

    @property
    def precedence(self) -> int:
        return 2 if self in (ArithOp.MUL, ArithOp.DIV) else 1

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ComponentPath(object):
    target: str
    prop: str

    @property
    def over_all_components(self) -> bool:
        return self.target == ALL_COMPONENTS

    def __str__(self):
        return f"{self.target}.{self.prop}"


@dataclass(frozen=True)
class Literal(object):
    value: decimal.Decimal
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.value, decimal.Decimal):
            object.__setattr__(self, "value", decimal.Decimal(str(self.value)))
        if not self.value.is_finite() or self.value < 0:
            raise ValueError(f"Literal must be a finite, non-negative decimal: received {self.value}.")


@dataclass(frozen=True)
class Fold(object):
    op: FoldOp
    path: ComponentPath
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.op, FoldOp):
            raise TypeError(f"Fold op must be a FoldOp: received {type(self.op)}.")
        if not isinstance(self.path, ComponentPath):
            raise TypeError(f"Fold path must be a ComponentPath: received {type(self.path)}.")


@dataclass(frozen=True)
class BinaryOp(object):
    op: ArithOp
    left: "DerivationExpr"
    right: "DerivationExpr"
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.op, ArithOp):
            raise TypeError(f"BinaryOp op must be an ArithOp: received {type(self.op)}.")
        if depth(self) > MAX_DEPTH:
            raise ModelError("E-PRP-004", f"derivation is nested deeper than {MAX_DEPTH} levels", self.span)


DerivationExpr = Union[Literal, Fold, BinaryOp]


def depth(expr: DerivationExpr) -> int:
    if isinstance(expr, BinaryOp):
        return 1 + max(depth(expr.left), depth(expr.right))
    elif isinstance(expr, (Literal, Fold)):
        return 1
    else:
        raise TypeError(f"Not a derivation expression: {expr!r}.")


def iter_folds(expr: DerivationExpr) -> Iterator[Fold]:
    """Yields the folds of a derivation, left to right."""
    if isinstance(expr, Fold):
        yield expr
    elif isinstance(expr, BinaryOp):
        yield from iter_folds(expr.left)
        yield from iter_folds(expr.right)


def is_bare_fold(expr: Optional[DerivationExpr]) -> bool:
    """True when the derivation is one fold and nothing else."""
    return isinstance(expr, Fold)


def render_derivation(expr: DerivationExpr) -> str:
    """Canonical text of a derivation with the fewest parentheses that keep the tree."""
    if isinstance(expr, Literal):
        return format(expr.value, "f")
    if isinstance(expr, Fold):
        return f"{expr.op}({expr.path})"
    left = render_derivation(expr.left)
    right = render_derivation(expr.right)
    if isinstance(expr.left, BinaryOp) and expr.left.op.precedence < expr.op.precedence:
        left = f"({left})"
    # the right operand keeps its parentheses at equal precedence: a - (b - c)
    if isinstance(expr.right, BinaryOp) and expr.right.op.precedence <= expr.op.precedence:
        right = f"({right})"
    return f"{left} {expr.op} {right}"

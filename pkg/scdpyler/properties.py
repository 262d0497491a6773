#  Copyright (c) 2026, scdpyler developers. All rights reserved.

import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .derivation import BinaryOp, DerivationExpr, Fold, Literal
from .diagnostic import ModelError
from .source_span import SourceSpan
from .utils import check_identifier


class PropertyClass(enum.Enum):
    """How a property relates to the properties of the components.

    intrinsic   a plain attribute of the system, valued from outside
    aggregate   merely a fold over the components (needs a derivation)
    emergent    a feature the components lack; a derivation is optional
    """
    INTRINSIC = "intrinsic"
    AGGREGATE = "aggregate"
    EMERGENT = "emergent"

    def __str__(self):
        return self.value


class ValueType(enum.Enum):
    NUMBER = "number"
    TEXT = "text"
    FLAG = "flag"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PropertyDecl(object):
    name: str
    classification: PropertyClass
    value_type: ValueType
    derivation: Optional[DerivationExpr] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)
    comments: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        check_identifier(self.name, "property name")
        if not isinstance(self.classification, PropertyClass):
            raise TypeError(f"PropertyDecl classification must be a PropertyClass: "
                            f"received {type(self.classification)}.")
        if not isinstance(self.value_type, ValueType):
            raise TypeError(f"PropertyDecl value_type must be a ValueType: received {type(self.value_type)}.")
        if self.derivation is not None:
            if not isinstance(self.derivation, (Literal, Fold, BinaryOp)):
                raise TypeError(f"PropertyDecl derivation must be a derivation expression: "
                                f"received {type(self.derivation)}.")
            if self.classification is PropertyClass.INTRINSIC:
                raise ModelError("E-PRP-005", f"intrinsic property '{self.name}' cannot have a derivation", self.span)
            if self.value_type is not ValueType.NUMBER:
                raise ModelError("E-PRP-006", f"property '{self.name}' has a derivation but is of type "
                                              f"{self.value_type}; derivations produce numbers", self.span)
        object.__setattr__(self, "comments", tuple(self.comments))

    @property
    def is_derived(self) -> bool:
        return self.derivation is not None

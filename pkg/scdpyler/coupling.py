#  Copyright (c) 2026, scdpyler developers. All rights reserved.

import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .diagnostic import ModelError
from .source_span import SourceSpan
from .utils import check_identifier

#: prefix used in source text for environment ends: env.Blood
ENV_PREFIX = "env"


class EnergyKind(enum.Enum):
    """The seven kinds of energy transfer a concrete coupling may carry."""
    MECHANICAL = "mechanical"
    THERMAL = "thermal"
    KINETIC = "kinetic"
    POTENTIAL = "potential"
    ELECTRIC = "electric"
    MAGNETIC = "magnetic"
    CHEMICAL = "chemical"

    def __str__(self):
        return self.value


class CouplingScope(enum.Enum):
    COMPONENT = "component"
    ENVIRONMENT = "environment"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CouplingEnd(object):
    party: str
    scope: CouplingScope = CouplingScope.COMPONENT

    def __post_init__(self):
        check_identifier(self.party, "coupling party")
        if not isinstance(self.scope, CouplingScope):
            raise TypeError(f"CouplingEnd scope must be a CouplingScope: received {type(self.scope)}.")

    @property
    def is_environment(self) -> bool:
        return self.scope is CouplingScope.ENVIRONMENT

    @staticmethod
    def component(party: str) -> "CouplingEnd":
        return CouplingEnd(party, CouplingScope.COMPONENT)

    @staticmethod
    def environment(party: str) -> "CouplingEnd":
        return CouplingEnd(party, CouplingScope.ENVIRONMENT)

    def __str__(self):
        return f"{ENV_PREFIX}.{self.party}" if self.is_environment else self.party


@dataclass(frozen=True)
class Coupling(object):
    """An undirected relation between two components, or a component and an environment party."""
    end_a: CouplingEnd
    end_b: CouplingEnd
    energy: Optional[EnergyKind] = None
    label: Optional[str] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)
    comments: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.end_a, CouplingEnd) or not isinstance(self.end_b, CouplingEnd):
            raise TypeError("Coupling ends must be CouplingEnd objects.")
        if self.energy is not None and not isinstance(self.energy, EnergyKind):
            raise TypeError(f"Coupling energy must be an EnergyKind or None: received {type(self.energy)}.")
        if self.label is not None and not isinstance(self.label, str):
            raise TypeError(f"Coupling label must be a string or None: received {type(self.label)}.")
        if self.end_a == self.end_b:
            raise ModelError("E-PAR-008", f"coupling '{self.end_a}' is coupled to itself", self.span)
        if self.end_a.is_environment and self.end_b.is_environment:
            raise ModelError("E-PAR-008", f"coupling '{self.end_a} -- {self.end_b}' joins two environment "
                                          f"parties; one end must be a component", self.span)
        object.__setattr__(self, "comments", tuple(self.comments))

    @property
    def ends(self) -> Tuple[CouplingEnd, CouplingEnd]:
        return (self.end_a, self.end_b)

    @property
    def is_internal(self) -> bool:
        """True for component to component couplings."""
        return not (self.end_a.is_environment or self.end_b.is_environment)

    @property
    def component_end(self) -> CouplingEnd:
        """The component end of a component to environment coupling (end_a otherwise)."""
        return self.end_b if self.end_a.is_environment else self.end_a

    @property
    def environment_end(self) -> Optional[CouplingEnd]:
        for end in self.ends:
            if end.is_environment:
                return end
        return None

    def __str__(self):
        return f"{self.end_a} -- {self.end_b}"

# system.py - system declarations
#
# A SystemDecl follows the CESM description of a system: its composition
# (the components), its environment (external systems it interacts with),
# its structure (couplings among components and with the environment) and
# its mechanisms (references to mechanism-kind dimension fragments). On top
# of that a system carries properties, dimension fragments and an optional
# explode link to the file that describes its components one level down.
#
#  Copyright (c) 2026, scdpyler developers. All rights reserved.

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .coupling import Coupling
from .diagnostic import ModelError
from .dimension import DimensionFragment
from .properties import PropertyDecl
from .source_span import SourceSpan
from .utils import as_tuple, check_identifier, first_duplicate


class SystemKind(enum.Enum):
    CONCEPTUAL = "conceptual"
    CONCRETE = "concrete"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class MechanismFragment(object):
    """The mechanism section: a reference by name to a mechanism dimension of the same system."""
    name: str
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)
    comments: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        check_identifier(self.name, "mechanism name")
        object.__setattr__(self, "comments", tuple(self.comments))


@dataclass(frozen=True)
class SystemDecl(object):
    name: str
    kind: SystemKind
    composition: Tuple[str, ...] = ()
    environment: Tuple[str, ...] = ()
    structure: Tuple[Coupling, ...] = ()
    mechanisms: Tuple[MechanismFragment, ...] = ()
    properties: Tuple[PropertyDecl, ...] = ()
    dimensions: Tuple[DimensionFragment, ...] = ()
    explode_ref: Optional[str] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)
    comments: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        check_identifier(self.name, "system name")
        if not isinstance(self.kind, SystemKind):
            raise TypeError(f"SystemDecl kind must be a SystemKind: received {type(self.kind)}.")
        for attr in ("composition", "environment", "structure", "mechanisms", "properties", "dimensions",
                     "comments"):
            object.__setattr__(self, attr, as_tuple(getattr(self, attr), attr))
        for name in self.composition:
            check_identifier(name, "component name")
        for name in self.environment:
            check_identifier(name, "environment name")
        if self.explode_ref is not None and (not isinstance(self.explode_ref, str) or self.explode_ref == ""):
            raise ValueError(f"explode_ref must be a non-empty path string or None: received {self.explode_ref!r}.")

        duplicate = first_duplicate(self.composition)
        if duplicate is not None:
            raise self._clash(f"component '{duplicate}' is listed twice in the composition")
        duplicate = first_duplicate(self.environment)
        if duplicate is not None:
            raise self._clash(f"environment party '{duplicate}' is listed twice")
        shared = [name for name in self.environment if name in set(self.composition)]
        if shared:
            raise self._clash(f"'{shared[0]}' is both a component and an environment party")

        # components, properties and fragments are all addressed as System.name
        members = list(self.composition) + [p.name for p in self.properties] + [d.name for d in self.dimensions]
        duplicate = first_duplicate(members)
        if duplicate is not None:
            raise self._clash(f"name '{duplicate}' is declared more than once among the components, "
                              f"properties and dimensions of system '{self.name}'", self._member_span(duplicate))

        components, parties = set(self.composition), set(self.environment)
        for coupling in self.structure:
            if not isinstance(coupling, Coupling):
                raise TypeError(f"structure entries must be Coupling objects: received {type(coupling)}.")
            for end in coupling.ends:
                if end.is_environment and end.party not in parties:
                    raise ModelError("E-PAR-005", f"coupling end 'env.{end.party}' is not in the environment "
                                                  f"of system '{self.name}'", coupling.span)
                if not end.is_environment and end.party not in components:
                    raise ModelError("E-PAR-005", f"coupling end '{end.party}' is not in the composition "
                                                  f"of system '{self.name}'", coupling.span)

        duplicate = first_duplicate(m.name for m in self.mechanisms)
        if duplicate is not None:
            raise self._clash(f"mechanism '{duplicate}' is referenced twice")
        fragments = self.dimension_map()
        for mechanism in self.mechanisms:
            fragment = fragments.get(mechanism.name)
            if fragment is None:
                raise ModelError("E-DIM-005", f"mechanism '{mechanism.name}' names no dimension of "
                                              f"system '{self.name}'", mechanism.span)
            if not fragment.is_mechanism:
                raise ModelError("E-DIM-005", f"mechanism '{mechanism.name}' names a {fragment.kind} dimension; "
                                              f"a mechanism dimension is required", mechanism.span)

    def _clash(self, message, span=None) -> ModelError:
        return ModelError("E-PAR-006", message, span if span is not None else self.span)

    def _member_span(self, name: str) -> Optional[SourceSpan]:
        spans = [p.span for p in self.properties if p.name == name] + \
                [d.span for d in self.dimensions if d.name == name]
        return spans[-1] if spans else None

    @property
    def is_concrete(self) -> bool:
        return self.kind is SystemKind.CONCRETE

    @property
    def is_exploded(self) -> bool:
        return self.explode_ref is not None

    def get_property(self, name: str) -> Optional[PropertyDecl]:
        for prop in self.properties:
            if prop.name == name:
                return prop
        return None

    def get_dimension(self, name: str) -> Optional[DimensionFragment]:
        return self.dimension_map().get(name)

    def dimension_map(self) -> Dict[str, DimensionFragment]:
        return {d.name: d for d in self.dimensions}

    def structural_dimensions(self) -> List[DimensionFragment]:
        return [d for d in self.dimensions if d.is_structural]

    def mechanism_dimensions(self) -> List[DimensionFragment]:
        return [d for d in self.dimensions if d.is_mechanism]

    def internal_couplings(self) -> List[Coupling]:
        return [c for c in self.structure if c.is_internal]

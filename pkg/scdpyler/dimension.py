# dimension.py - dimension fragments attached to systems
#
# A dimension fragment is one perspective on a system. Structural fragments
# read like a class diagram (entities and links between them); mechanism
# fragments read like a pathway (actors, the steps they perform and the
# flows between steps). Element names share one namespace per fragment so an
# element path system.fragment.element is never ambiguous.
#
#  Copyright (c) 2026, scdpyler developers. All rights reserved.

import enum
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from .cardinality import Card
from .diagnostic import ModelError
from .properties import ValueType
from .source_span import SourceSpan
from .utils import as_tuple, check_identifier, first_duplicate


class DimensionKind(enum.Enum):
    STRUCTURAL = "structural"
    MECHANISM = "mechanism"

    def __str__(self):
        return self.value


#: reserved in the keyword space, rejected by the parser
INTERACTION = "interaction"


@dataclass(frozen=True)
class EntityDecl(object):
    name: str
    attributes: Tuple[Tuple[str, ValueType], ...] = ()
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)
    comments: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        check_identifier(self.name, "entity name")
        attributes = tuple((a, t) for a, t in as_tuple(self.attributes, "attributes"))
        for attr, value_type in attributes:
            check_identifier(attr, "attribute name")
            if not isinstance(value_type, ValueType):
                raise TypeError(f"attribute {attr} must have a ValueType: received {type(value_type)}.")
        duplicate = first_duplicate(a for a, _ in attributes)
        if duplicate is not None:
            raise ModelError("E-DIM-006", f"entity '{self.name}' declares attribute '{duplicate}' twice", self.span)
        object.__setattr__(self, "attributes", attributes)
        object.__setattr__(self, "comments", tuple(self.comments))

    def attribute(self, name: str) -> Optional[ValueType]:
        return dict(self.attributes).get(name)


@dataclass(frozen=True)
class EntityAssociation(object):
    """A class-diagram link: entity_a [card_a] -- entity_b [card_b]."""
    entity_a: str
    card_a: Card
    entity_b: str
    card_b: Card
    label: Optional[str] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)
    comments: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        check_identifier(self.entity_a, "link end")
        check_identifier(self.entity_b, "link end")
        if not isinstance(self.card_a, Card) or not isinstance(self.card_b, Card):
            raise TypeError("EntityAssociation cardinalities must be Card objects.")
        object.__setattr__(self, "comments", tuple(self.comments))

    @property
    def end_a(self) -> Tuple[str, Card]:
        return (self.entity_a, self.card_a)

    @property
    def end_b(self) -> Tuple[str, Card]:
        return (self.entity_b, self.card_b)


@dataclass(frozen=True)
class ActorDecl(object):
    name: str
    role: str = ""
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)
    comments: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        check_identifier(self.name, "actor name")
        if not isinstance(self.role, str):
            raise TypeError(f"actor role must be a string: received {type(self.role)}.")
        object.__setattr__(self, "comments", tuple(self.comments))


@dataclass(frozen=True)
class StepDecl(object):
    name: str
    performed_by: Tuple[str, ...] = ()
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)
    comments: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        check_identifier(self.name, "step name")
        performed_by = as_tuple(self.performed_by, "performed_by")
        for actor in performed_by:
            check_identifier(actor, "actor name")
        object.__setattr__(self, "performed_by", performed_by)
        object.__setattr__(self, "comments", tuple(self.comments))


@dataclass(frozen=True)
class FlowDecl(object):
    from_step: str
    to_step: str
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)
    comments: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        check_identifier(self.from_step, "step name")
        check_identifier(self.to_step, "step name")
        if self.from_step == self.to_step:
            raise ModelError("E-DIM-004", f"flow from step '{self.from_step}' to itself", self.span)
        object.__setattr__(self, "comments", tuple(self.comments))


FragmentElement = Union[EntityDecl, ActorDecl, StepDecl]


@dataclass(frozen=True)
class DimensionFragment(object):
    kind: DimensionKind
    name: str
    entities: Tuple[EntityDecl, ...] = ()
    links: Tuple[EntityAssociation, ...] = ()
    actors: Tuple[ActorDecl, ...] = ()
    steps: Tuple[StepDecl, ...] = ()
    flows: Tuple[FlowDecl, ...] = ()
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)
    comments: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.kind, DimensionKind):
            raise TypeError(f"DimensionFragment kind must be a DimensionKind: received {type(self.kind)}.")
        check_identifier(self.name, "fragment name")
        for attr in ("entities", "links", "actors", "steps", "flows", "comments"):
            object.__setattr__(self, attr, as_tuple(getattr(self, attr), attr))

        if self.kind is DimensionKind.STRUCTURAL and (self.actors or self.steps or self.flows):
            raise ModelError("E-PAR-003", f"structural dimension '{self.name}' cannot hold actors, steps or flows",
                             self.span)
        if self.kind is DimensionKind.MECHANISM and (self.entities or self.links):
            raise ModelError("E-PAR-003", f"mechanism dimension '{self.name}' cannot hold entities or links",
                             self.span)

        elements = self.elements
        duplicate = first_duplicate(e.name for e in elements)
        if duplicate is not None:
            clash = [e for e in elements if e.name == duplicate][1]
            raise ModelError("E-DIM-001", f"name '{duplicate}' is declared twice in dimension '{self.name}'",
                             clash.span)

        entity_names = {e.name for e in self.entities}
        for link in self.links:
            for end in (link.entity_a, link.entity_b):
                if end not in entity_names:
                    raise ModelError("E-DIM-002", f"link end '{end}' is not an entity of dimension '{self.name}'",
                                     link.span)

        actor_names = {a.name for a in self.actors}
        for step in self.steps:
            for actor in step.performed_by:
                if actor not in actor_names:
                    raise ModelError("E-DIM-003", f"step '{step.name}' is performed by undeclared actor '{actor}'",
                                     step.span)

        step_names = {s.name for s in self.steps}
        for flow in self.flows:
            for step in (flow.from_step, flow.to_step):
                if step not in step_names:
                    raise ModelError("E-DIM-004", f"flow references undeclared step '{step}'", flow.span)

    @property
    def is_structural(self) -> bool:
        return self.kind is DimensionKind.STRUCTURAL

    @property
    def is_mechanism(self) -> bool:
        return self.kind is DimensionKind.MECHANISM

    @property
    def elements(self) -> List[FragmentElement]:
        """Entities, actors and steps in declaration-group order."""
        return list(self.entities) + list(self.actors) + list(self.steps)

    def element(self, name: str) -> Optional[FragmentElement]:
        for element in self.elements:
            if element.name == name:
                return element
        return None


#  Copyright (c) 2026, scdpyler developers. All rights reserved.

import enum
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

from .cardinality import Card
from .diagnostic import ModelError
from .source_span import SourceSpan
from .utils import as_tuple, check_identifier

#: the only stereotype a system association may carry
SYSTEM_STEREOTYPE = "system"


@dataclass(frozen=True)
class ElementPath(object):
    """A dotted path of identifiers, e.g. Person.PersonAsEHR.EHRSchema.Diagnosis.

    Mapping paths are written relative to their unit (system.fragment.element);
    query paths are qualified from the root level. The empty path is allowed
    and resolves to nothing.
    """
    segments: Tuple[str, ...] = ()

    def __post_init__(self):
        segments = as_tuple(self.segments, "segments")
        for segment in segments:
            check_identifier(segment, "path segment")
        object.__setattr__(self, "segments", segments)

    @staticmethod
    def parse(text: str) -> "ElementPath":
        if not isinstance(text, str):
            raise TypeError(f"ElementPath.parse expects a string: received {type(text)}.")
        text = text.strip()
        if text == "":
            return ElementPath(())
        return ElementPath(tuple(text.split(".")))

    def child(self, name: str) -> "ElementPath":
        return ElementPath(self.segments + (name,))

    @property
    def head(self) -> Optional[str]:
        return self.segments[0] if self.segments else None

    @property
    def last(self) -> Optional[str]:
        return self.segments[-1] if self.segments else None

    @property
    def parent(self) -> "ElementPath":
        return ElementPath(self.segments[:-1])

    def __len__(self):
        return len(self.segments)

    def __iter__(self) -> Iterator[str]:
        return iter(self.segments)

    def __str__(self):
        return ".".join(self.segments)


class MappingKind(enum.Enum):
    ASSOCIATION = "association"
    COUNTERPART = "counterpart"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class MappingPair(object):
    """An element-level link carried by a system association.

    Counterpart mappings state that a mechanism actor is realized by a
    structural entity; association mappings are ordinary class associations
    across the two systems and may carry cardinalities.
    """
    path_a: ElementPath
    path_b: ElementPath
    kind: MappingKind = MappingKind.ASSOCIATION
    card_a: Optional[Card] = None
    card_b: Optional[Card] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)
    comments: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.path_a, ElementPath) or not isinstance(self.path_b, ElementPath):
            raise TypeError("MappingPair paths must be ElementPath objects.")
        if not isinstance(self.kind, MappingKind):
            raise TypeError(f"MappingPair kind must be a MappingKind: received {type(self.kind)}.")
        for path in (self.path_a, self.path_b):
            if len(path) != 3:
                raise ModelError("E-PAR-009", f"mapping path '{path}' must have the form system.fragment.element",
                                 self.span)
        if (self.card_a is None) != (self.card_b is None):
            raise ModelError("E-PAR-008", "a mapping carries either both cardinalities or none", self.span)
        for card in (self.card_a, self.card_b):
            if card is not None and not isinstance(card, Card):
                raise TypeError(f"MappingPair cardinalities must be Card objects: received {type(card)}.")
        object.__setattr__(self, "comments", tuple(self.comments))

    @property
    def is_counterpart(self) -> bool:
        return self.kind is MappingKind.COUNTERPART

    @property
    def paths(self) -> Tuple[ElementPath, ElementPath]:
        return (self.path_a, self.path_b)


@dataclass(frozen=True)
class SystemAssociation(object):
    """A <<system>> association between two sibling systems of one unit."""
    system_a: str
    system_b: str
    mappings: Tuple[MappingPair, ...] = ()
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)
    comments: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        check_identifier(self.system_a, "association endpoint")
        check_identifier(self.system_b, "association endpoint")
        if self.system_a == self.system_b:
            raise ModelError("E-PAR-009", f"system '{self.system_a}' is associated with itself", self.span)
        mappings = as_tuple(self.mappings, "mappings")
        for mapping in mappings:
            if not isinstance(mapping, MappingPair):
                raise TypeError(f"mappings must be MappingPair objects: received {type(mapping)}.")
            if mapping.path_a.head != self.system_a or mapping.path_b.head != self.system_b:
                raise ModelError("E-PAR-009", f"mapping '{mapping.path_a} <-> {mapping.path_b}' must run from "
                                              f"{self.system_a} to {self.system_b}", mapping.span)
        object.__setattr__(self, "mappings", mappings)
        object.__setattr__(self, "comments", tuple(self.comments))

    @property
    def stereotype(self) -> str:
        return SYSTEM_STEREOTYPE

    @property
    def endpoints(self) -> Tuple[str, str]:
        return (self.system_a, self.system_b)

    def counterparts(self) -> List[MappingPair]:
        return [m for m in self.mappings if m.is_counterpart]

#  Copyright (c) 2026, scdpyler developers. All rights reserved.

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .association import SystemAssociation
from .diagnostic import ModelError
from .source_span import SourceSpan
from .system import SystemDecl
from .utils import as_tuple, check_identifier


@dataclass(frozen=True)
class ModelUnit(object):
    """One parsed SCDL file: a composition level with its systems and associations.

    level_id and source_path describe where the unit sits and was loaded
    from; like spans they are not part of structural equality.
    """
    name: str
    systems: Tuple[SystemDecl, ...] = ()
    associations: Tuple[SystemAssociation, ...] = ()
    level_id: Optional[str] = field(default=None, compare=False)
    source_path: str = field(default="<memory>", compare=False)
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)
    comments: Tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        check_identifier(self.name, "unit name")
        systems = as_tuple(self.systems, "systems")
        associations = as_tuple(self.associations, "associations")
        seen = set()
        for system in systems:
            if not isinstance(system, SystemDecl):
                raise TypeError(f"systems must be SystemDecl objects: received {type(system)}.")
            if system.name in seen:
                raise ModelError("E-PAR-002", f"system '{system.name}' is declared more than once", system.span)
            seen.add(system.name)
        for association in associations:
            if not isinstance(association, SystemAssociation):
                raise TypeError(f"associations must be SystemAssociation objects: received {type(association)}.")
            for endpoint in association.endpoints:
                if endpoint not in seen:
                    raise ModelError("E-PAR-004", f"association endpoint '{endpoint}' is not a system of "
                                                  f"unit '{self.name}'", association.span)
        object.__setattr__(self, "systems", systems)
        object.__setattr__(self, "associations", associations)
        object.__setattr__(self, "comments", tuple(self.comments))
        if self.level_id is None:
            object.__setattr__(self, "level_id", self.name)

    @property
    def system_names(self) -> List[str]:
        return [s.name for s in self.systems]

    def get_system(self, name: str) -> Optional[SystemDecl]:
        for system in self.systems:
            if system.name == name:
                return system
        return None

    def associations_of(self, name: str) -> List[SystemAssociation]:
        return [a for a in self.associations if name in a.endpoints]

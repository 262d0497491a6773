# resolver.py - linking composition levels
#
# A system with an explode link is described one level down by its own SCDL
# file, whose top-level systems are exactly the components of the exploded
# system. resolve() follows explode links depth first from the root file,
# loads every level once, checks parent/child consistency and builds a
# symbol table of fully qualified dotted paths.
#
#   Person                                  system at the root level
#   Person.variantCount                     property
#   Person.PersonAsEHR                      system one level down
#   Person.PersonAsEHR.EHRSchema            dimension fragment
#   Person.PersonAsEHR.EHRSchema.Diagnosis  fragment element
#
#  Copyright (c) 2026, scdpyler developers. All rights reserved.

import dataclasses
import logging
import types
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

from .association import ElementPath
from .diagnostic import Diagnostic, DiagnosticError
from .loader import UnitLoader, UnitLoadError, normalize_path, resolve_relative
from .model_unit import ModelUnit
from .parser import parse_with_diagnostics
from .properties import PropertyClass, PropertyDecl
from .source_span import SourceSpan
from .system import SystemDecl
from .utils import qualify

logger = logging.getLogger(__name__)

#: level path of the root unit
ROOT_LEVEL = ""


class ResolvedModel(object):
    """The linked level tree of a model and its symbol table. Read-only after construction."""

    def __init__(self, root: ModelUnit, levels: Mapping[str, ModelUnit], unit_order: List[str]):
        if ROOT_LEVEL not in levels or levels[ROOT_LEVEL] is not root:
            raise ValueError("levels must hold the root unit under the root level path ''.")
        self._root = root
        self._levels = types.MappingProxyType(dict(levels))
        self._unit_order = tuple(unit_order)
        self._prefixes = {id(unit): path for path, unit in self._levels.items()}
        self._symbols = types.MappingProxyType(self._build_symbol_table())

    def _build_symbol_table(self) -> Dict[str, object]:
        table = {}
        for prefix, unit in self._levels.items():
            for system in unit.systems:
                system_path = qualify(prefix, system.name)
                table[system_path] = system
                for prop in system.properties:
                    table[qualify(system_path, prop.name)] = prop
                for fragment in system.dimensions:
                    fragment_path = qualify(system_path, fragment.name)
                    table[fragment_path] = fragment
                    for element in fragment.elements:
                        element_path = qualify(fragment_path, element.name)
                        table[element_path] = element
                        for attr, value_type in getattr(element, "attributes", ()):
                            table[qualify(element_path, attr)] = (attr, value_type)
        return table

    @property
    def root(self) -> ModelUnit:
        return self._root

    @property
    def levels(self) -> Mapping[str, ModelUnit]:
        """Every unit keyed by the qualified path of the system it explodes ('' for the root)."""
        return self._levels

    @property
    def level_tree(self) -> Dict[str, ModelUnit]:
        """Exploded system path -> child unit."""
        return {path: unit for path, unit in self._levels.items() if path != ROOT_LEVEL}

    @property
    def symbol_table(self) -> Mapping[str, object]:
        return self._symbols

    @property
    def unit_order(self) -> Tuple[str, ...]:
        """Source paths of the units in depth-first pre-order of explode links."""
        return self._unit_order

    def unit_for(self, level_path: str) -> Optional[ModelUnit]:
        return self._levels.get(level_path)

    def child_unit(self, system_path: str) -> Optional[ModelUnit]:
        if system_path == ROOT_LEVEL:
            return None
        return self._levels.get(system_path)

    def prefix_of(self, unit: ModelUnit) -> str:
        """Level path of a unit of this model."""
        try:
            return self._prefixes[id(unit)]
        except KeyError:
            raise ValueError(f"unit {unit.name} is not part of this model.")

    def system_at(self, path: str) -> Optional[SystemDecl]:
        found = self._symbols.get(path)
        return found if isinstance(found, SystemDecl) else None

    def iter_systems(self) -> Iterator[Tuple[str, SystemDecl, ModelUnit]]:
        """(qualified path, system, unit) for every system, level by level in unit order."""
        for prefix, unit in self._levels.items():
            for system in unit.systems:
                yield qualify(prefix, system.name), system, unit

    def depth(self) -> int:
        """Number of levels on the longest root-to-leaf chain."""
        if not self._levels:
            return 0
        return 1 + max(len(path.split(".")) if path else 0 for path in self._levels)


def element_path_resolve(model: ResolvedModel, path: Union[ElementPath, str]):
    """The declaration at a fully qualified path, or None.

    :param model: a resolved model
    :param path: ElementPath or dotted text; empty paths resolve to None
    """
    if isinstance(path, str):
        try:
            path = ElementPath.parse(path)
        except ValueError:
            return None
    if len(path) == 0:
        return None
    return model.symbol_table.get(str(path))


def _unit_span(unit: ModelUnit) -> SourceSpan:
    return unit.span if unit.span is not None else SourceSpan.at(unit.source_path)


def _system_span(system: SystemDecl, unit: ModelUnit) -> SourceSpan:
    return system.span if system.span is not None else _unit_span(unit)


class _LevelLinker(object):
    def __init__(self, loader: UnitLoader):
        self.loader = loader
        self.levels: Dict[str, ModelUnit] = {}
        self.loaded: Dict[str, str] = {}  # file -> level path that claimed it
        self.unit_order: List[str] = []
        self.diagnostics: List[Diagnostic] = []

    def visit(self, unit: ModelUnit, prefix: str, stack: List[str]):
        self.levels[prefix] = unit
        self.unit_order.append(unit.source_path)
        for system in unit.systems:
            if system.explode_ref is None:
                continue
            system_path = qualify(prefix, system.name)
            span = _system_span(system, unit)
            try:
                target = resolve_relative(unit.source_path, system.explode_ref)
            except ValueError:
                self.diagnostics.append(Diagnostic.from_code(
                    "E-LVL-001", f"explode target {system.explode_ref!r} of system '{system_path}' is not a "
                                 f"usable path", span))
                continue
            if target in stack:
                cycle = stack[stack.index(target):] + [target]
                self.diagnostics.append(Diagnostic.from_code(
                    "E-LVL-002", f"explode cycle: {' -> '.join(cycle)}", span))
                continue
            if target in self.loaded:
                self.diagnostics.append(Diagnostic.from_code(
                    "E-LVL-004", f"'{target}' is already the level of system '{self.loaded[target]}'; "
                                 f"system '{system_path}' cannot explode into it too", span))
                continue
            self.loaded[target] = system_path
            child = self.load(target, system_path, span)
            if child is None:
                continue
            self.check_names(system, system_path, child, span)
            self.visit(child, system_path, stack + [target])

    def load(self, target: str, system_path: str, span: SourceSpan) -> Optional[ModelUnit]:
        try:
            source = self.loader.load(target)
        except UnitLoadError as err:
            self.diagnostics.append(Diagnostic.from_code(
                "E-LVL-001", f"explode target '{target}' of system '{system_path}' cannot be loaded: "
                             f"{err.reason}", span))
            return None
        child, problems = parse_with_diagnostics(source, target)
        if child is None:
            self.diagnostics.append(Diagnostic.from_code(
                "E-LVL-001", f"explode target '{target}' of system '{system_path}' does not parse "
                             f"({len(problems)} diagnostics)", span, problems))
            return None
        logger.debug("linked level %s from %s", system_path, target)
        return dataclasses.replace(child, level_id=system_path, source_path=target)

    def check_names(self, system: SystemDecl, system_path: str, child: ModelUnit, span: SourceSpan):
        declared = set(child.system_names)
        for name in system.composition:
            if name not in declared:
                self.diagnostics.append(Diagnostic.from_code(
                    "E-LVL-003", f"level '{child.source_path}' does not declare component '{name}' "
                                 f"of system '{system_path}'", span))
        expected = set(system.composition)
        for other in child.systems:
            if other.name not in expected:
                self.diagnostics.append(Diagnostic.from_code(
                    "E-LVL-003", f"level '{child.source_path}' declares system '{other.name}', which is not "
                                 f"a component of system '{system_path}'", _system_span(other, child)))


def resolve_unit(root: ModelUnit, loader: UnitLoader) -> Tuple[Optional[ResolvedModel], List[Diagnostic]]:
    """Links the levels below an already parsed root unit."""
    root_path = normalize_path(root.source_path)
    if root.source_path != root_path or root.level_id != ROOT_LEVEL:
        root = dataclasses.replace(root, source_path=root_path, level_id=ROOT_LEVEL)
    linker = _LevelLinker(loader)
    linker.visit(root, ROOT_LEVEL, [root_path])
    if linker.diagnostics:
        return None, linker.diagnostics
    model = ResolvedModel(root, linker.levels, linker.unit_order)
    logger.debug("resolved %s: %d levels, %d symbols", root_path, len(model.levels), len(model.symbol_table))
    return model, []


def resolve(root_path: str, loader: UnitLoader) -> ResolvedModel:
    """Loads the root file and every level reachable through explode links.

    :param root_path: path of the root file, handed to the loader
    :param loader: where level sources come from
    :raises UnitLoadError: when the root file itself cannot be read
    :raises DiagnosticError: on parse errors in the root or any E-LVL diagnostic
    """
    root_path = normalize_path(root_path)
    source = loader.load(root_path)
    root, problems = parse_with_diagnostics(source, root_path)
    if root is None:
        raise DiagnosticError(problems)
    model, problems = resolve_unit(root, loader)
    if model is None:
        raise DiagnosticError(problems)
    return model


@dataclass(frozen=True)
class LevelView(object):
    """What a drill-down shows: the child level of a system and the system's derived properties."""
    system_path: str
    system: SystemDecl
    unit: ModelUnit
    properties: Tuple[PropertyDecl, ...]

    @property
    def system_names(self) -> List[str]:
        return self.unit.system_names


def drill_down(model: ResolvedModel, system_path: Union[ElementPath, str]) -> LevelView:
    """The child level of an exploded system.

    :raises DiagnosticError: E-QRY-001 when the path names no system, E-QRY-002 when it has no explode link
    """
    text = str(system_path)
    found = element_path_resolve(model, system_path)
    if not isinstance(found, SystemDecl):
        raise DiagnosticError([Diagnostic.from_code("E-QRY-001", f"'{text}' does not name a system",
                                                    _unit_span(model.root))])
    child = model.child_unit(text)
    if child is None:
        raise DiagnosticError([Diagnostic.from_code("E-QRY-002", f"system '{text}' has no explode link",
                                                    found.span or _unit_span(model.root))])
    derived = tuple(p for p in found.properties
                    if p.classification in (PropertyClass.EMERGENT, PropertyClass.AGGREGATE))
    return LevelView(text, found, child, derived)

# validator.py - systemist checks over a resolved model
#
# Each check looks at one system or one association and returns diagnostics;
# validate() runs all of them at every level and returns one sorted list.
# The checks are:
#
#   check_bww_system           the composition is connected by its couplings
#   check_kind_rules           conceptual systems carry no energy
#   check_mapping_completeness mechanism actors have structural counterparts
#   check_property_rules       derivations fit the aggregate/emergent split
#   check_cesm_completeness    structure, mechanism and composition present
#
#  Copyright (c) 2026, scdpyler developers. All rights reserved.

import logging
from typing import List, Optional, Set, Tuple

import networkx as nx

from .analysis import component_graph
from .association import SystemAssociation
from .diagnostic import Diagnostic, sort_diagnostics
from .derivation import FoldOp, is_bare_fold, iter_folds
from .dimension import ActorDecl, EntityDecl, StepDecl
from .model_unit import ModelUnit
from .properties import PropertyClass, ValueType
from .resolver import ROOT_LEVEL, ResolvedModel
from .source_span import SourceSpan
from .system import SystemDecl
from .utils import bipartitions, qualify

logger = logging.getLogger(__name__)

#: largest composition the brute-force bipartition check accepts
MAX_BRUTE_FORCE = 16


def _span(*candidates) -> SourceSpan:
    for candidate in candidates:
        span = getattr(candidate, "span", None)
        if span is not None:
            return span
    return SourceSpan.at("<memory>")


def check_bww_system(system: SystemDecl) -> Optional[Diagnostic]:
    """E-BWW-001 unless the components are connected by component-to-component couplings.

    A composition of zero or one component passes. On failure the message
    names one smallest disconnected part, ties going to the part whose
    smallest name sorts first.
    """
    if len(system.composition) <= 1:
        return None
    parts = [sorted(part) for part in nx.connected_components(component_graph(system))]
    if len(parts) == 1:
        return None
    smallest = min(parts, key=lambda part: (len(part), part[0]))
    return Diagnostic.from_code("E-BWW-001", f"composition of '{system.name}' is not a system: "
                                             f"{{{', '.join(smallest)}}} is not coupled to the other components",
                                _span(system))


def brute_force_bipartition_check(system: SystemDecl) -> bool:
    """True iff every bipartition of the composition is crossed by a coupling.

    Enumerates all 2**(n-1) - 1 bipartitions; only meant as an oracle for
    check_bww_system on small compositions.
    """
    n = len(system.composition)
    if n > MAX_BRUTE_FORCE:
        raise ValueError(f"brute_force_bipartition_check supports at most {MAX_BRUTE_FORCE} components: "
                         f"received {n}.")
    edges = [(c.end_a.party, c.end_b.party) for c in system.internal_couplings()]
    for left, _ in bipartitions(system.composition):
        left = set(left)
        if not any((a in left) != (b in left) for a, b in edges):
            return False
    return True


def classify_boundary(system: SystemDecl) -> Tuple[Set[str], Set[str]]:
    """Splits the composition into boundary components (coupled to the environment) and internal ones."""
    boundary = {c.component_end.party for c in system.structure if not c.is_internal}
    internal = set(system.composition) - boundary
    return boundary, internal


def check_kind_rules(system: SystemDecl) -> List[Diagnostic]:
    if system.is_concrete:
        return []
    return [Diagnostic.from_code("E-KND-001", f"coupling '{coupling}' of conceptual system '{system.name}' "
                                              f"carries {coupling.energy} energy; conceptual systems have none",
                                 _span(coupling, system))
            for coupling in system.structure if coupling.energy is not None]


def _is_element(found) -> bool:
    return isinstance(found, (EntityDecl, ActorDecl, StepDecl))


def check_association_completeness(association: SystemAssociation) -> List[Diagnostic]:
    if association.mappings:
        return []
    return [Diagnostic.from_code("W-CSM-003", f"association {association.system_a} -- {association.system_b} "
                                              f"has no mappings", _span(association))]


def check_mapping_completeness(association: SystemAssociation, model: ResolvedModel,
                               level_path: str = ROOT_LEVEL) -> List[Diagnostic]:
    """E-MAP-002 for dangling mapping paths; E-MAP-001 / W-MAP-010 across a mechanism/structural pair.

    :param association: an association of the unit at level_path
    :param model: the resolved model the association belongs to
    :param level_path: qualified path of the level holding the association ('' for the root)
    """
    diagnostics = []

    def lookup(path):
        return model.symbol_table.get(qualify(level_path, str(path)))

    resolved = []
    for mapping in association.mappings:
        ends = (lookup(mapping.path_a), lookup(mapping.path_b))
        for path, found in zip(mapping.paths, ends):
            if not _is_element(found):
                diagnostics.append(Diagnostic.from_code(
                    "E-MAP-002", f"mapping path '{path}' does not name an element of a dimension of "
                                 f"system '{path.head}'", _span(mapping, association)))
        resolved.append((mapping, ends))

    systems = [model.system_at(qualify(level_path, name)) for name in association.endpoints]
    if any(system is None for system in systems):
        return diagnostics
    for mech_index in (0, 1):
        mech, struct = systems[mech_index], systems[1 - mech_index]
        if not mech.mechanism_dimensions() or not struct.structural_dimensions():
            continue
        covered_actors, covered_entities = set(), set()
        for mapping, ends in resolved:
            if not mapping.is_counterpart:
                continue
            mech_path, struct_path = mapping.paths[mech_index], mapping.paths[1 - mech_index]
            mech_end, struct_end = ends[mech_index], ends[1 - mech_index]
            if isinstance(mech_end, ActorDecl) and isinstance(struct_end, EntityDecl):
                covered_actors.add(str(mech_path))
                covered_entities.add(str(struct_path))
        for fragment in mech.mechanism_dimensions():
            for actor in fragment.actors:
                if f"{mech.name}.{fragment.name}.{actor.name}" not in covered_actors:
                    diagnostics.append(Diagnostic.from_code(
                        "E-MAP-001", f"actor '{actor.name}' of '{mech.name}.{fragment.name}' has no structural "
                                     f"counterpart in '{struct.name}'", _span(actor, association)))
        for fragment in struct.structural_dimensions():
            for entity in fragment.entities:
                if f"{struct.name}.{fragment.name}.{entity.name}" not in covered_entities:
                    diagnostics.append(Diagnostic.from_code(
                        "W-MAP-010", f"entity '{entity.name}' of '{struct.name}.{fragment.name}' plays no "
                                     f"functional role in '{mech.name}'", _span(entity, association)))
    return diagnostics


def check_property_rules(system: SystemDecl, child: Optional[ModelUnit] = None) -> List[Diagnostic]:
    """Aggregate and emergent property rules.

    :param system: the system whose properties are checked
    :param child: the unit the system explodes into; without it the components declare nothing
    """
    diagnostics = []
    for prop in system.properties:
        span = _span(prop, system)
        if prop.classification is PropertyClass.AGGREGATE and prop.derivation is None:
            diagnostics.append(Diagnostic.from_code(
                "E-PRP-001", f"aggregate property '{prop.name}' of '{system.name}' has no derivation", span))
        if prop.derivation is None:
            continue
        for fold in iter_folds(prop.derivation):
            targets = system.composition if fold.path.over_all_components else (fold.path.target,)
            declared = []
            for name in targets:
                component = child.get_system(name) if child is not None and name in system.composition else None
                component_prop = component.get_property(fold.path.prop) if component is not None else None
                if component_prop is not None:
                    declared.append(component_prop)
            if not declared:
                diagnostics.append(Diagnostic.from_code(
                    "E-PRP-002", f"'{fold.path}' in property '{prop.name}' of '{system.name}': no component "
                                 f"declares '{fold.path.prop}'", span))
                continue
            for component_prop in declared:
                wrong_text = component_prop.value_type is ValueType.TEXT
                wrong_flag = component_prop.value_type is ValueType.FLAG and fold.op is not FoldOp.COUNT
                if wrong_text or wrong_flag:
                    diagnostics.append(Diagnostic.from_code(
                        "E-PRP-007", f"{fold.op}({fold.path}) in property '{prop.name}' folds a "
                                     f"{component_prop.value_type} property", span))
                    break
        if prop.classification is PropertyClass.EMERGENT and is_bare_fold(prop.derivation):
            diagnostics.append(Diagnostic.from_code(
                "W-PRP-003", f"emergent property '{prop.name}' of '{system.name}' is a bare fold; "
                             f"it may be an aggregate property", span))
    return diagnostics


def check_cesm_completeness(system: SystemDecl) -> List[Diagnostic]:
    diagnostics = []
    span = _span(system)
    if system.is_concrete and len(system.composition) >= 2 and not system.structure:
        diagnostics.append(Diagnostic.from_code(
            "W-CSM-001", f"concrete system '{system.name}' has {len(system.composition)} components and "
                         f"no structure", span))
    if system.is_concrete and not system.mechanisms:
        diagnostics.append(Diagnostic.from_code(
            "W-CSM-002", f"concrete system '{system.name}' declares no mechanism", span))
    if not system.composition:
        diagnostics.append(Diagnostic.from_code(
            "W-ATOM-001", f"system '{system.name}' has an empty composition (abstraction stop)", span))
    return diagnostics


def validate(model: ResolvedModel) -> List[Diagnostic]:
    """Runs every check on every system and association at every level.

    :return: diagnostics sorted by file, line, column and code; empty for a clean model
    """
    diagnostics: List[Diagnostic] = []
    for system_path, system, _ in model.iter_systems():
        bww = check_bww_system(system)
        if bww is not None:
            diagnostics.append(bww)
        diagnostics.extend(check_kind_rules(system))
        diagnostics.extend(check_property_rules(system, model.child_unit(system_path)))
        diagnostics.extend(check_cesm_completeness(system))
    for level_path, unit in model.levels.items():
        for association in unit.associations:
            diagnostics.extend(check_association_completeness(association))
            diagnostics.extend(check_mapping_completeness(association, model, level_path))
    logger.debug("validated %d levels: %d diagnostics", len(model.levels), len(diagnostics))
    return sort_diagnostics(diagnostics)

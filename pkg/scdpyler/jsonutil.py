# jsonutil.py - JSON export of resolved models
#
# Copyright (c) 2026, scdpyler developers. All rights reserved.

"""
The JSON document has three top-level keys:

    scdVersion  version of the document layout
    root        the root unit; every exploded system nests its child unit
                under explode.unit
    levels      one entry per level in load order: levelPath, file, systems

Object keys are sorted, arrays keep declaration order, and empty sections
are present as empty arrays, so the same model always gives the same bytes.
docs/json-schema.md describes every object.
"""

import json
import logging
from typing import Optional

from .association import MappingPair, SystemAssociation
from .coupling import Coupling, CouplingEnd
from .derivation import render_derivation
from .dimension import DimensionFragment
from .model_unit import ModelUnit
from .properties import PropertyDecl
from .resolver import ROOT_LEVEL, ResolvedModel
from .source_span import SourceSpan
from .system import SystemDecl
from .utils import qualify

logger = logging.getLogger(__name__)

SCD_JSON_VERSION = "1.0"


def span_to_json(span: Optional[SourceSpan]):
    if span is None:
        return None
    return {"file": span.file, "startLine": span.start_line, "startCol": span.start_col,
            "endLine": span.end_line, "endCol": span.end_col}


def _card(card) -> Optional[str]:
    return None if card is None else str(card)


def _end_to_json(end: CouplingEnd) -> dict:
    return {"party": end.party, "scope": str(end.scope)}


def coupling_to_json(coupling: Coupling) -> dict:
    return {
        "endA": _end_to_json(coupling.end_a),
        "endB": _end_to_json(coupling.end_b),
        "energy": None if coupling.energy is None else str(coupling.energy),
        "label": coupling.label,
        "span": span_to_json(coupling.span),
    }


def property_to_json(prop: PropertyDecl) -> dict:
    return {
        "name": prop.name,
        "classification": str(prop.classification),
        "valueType": str(prop.value_type),
        "derivation": None if prop.derivation is None else render_derivation(prop.derivation),
        "span": span_to_json(prop.span),
    }


def dimension_to_json(fragment: DimensionFragment) -> dict:
    return {
        "kind": str(fragment.kind),
        "name": fragment.name,
        "entities": [{"name": e.name,
                      "attributes": [{"name": a, "valueType": str(t)} for a, t in e.attributes],
                      "span": span_to_json(e.span)} for e in fragment.entities],
        "links": [{"entityA": link.entity_a, "cardA": str(link.card_a), "entityB": link.entity_b,
                   "cardB": str(link.card_b), "label": link.label, "span": span_to_json(link.span)}
                  for link in fragment.links],
        "actors": [{"name": a.name, "role": a.role, "span": span_to_json(a.span)} for a in fragment.actors],
        "steps": [{"name": s.name, "performedBy": list(s.performed_by), "span": span_to_json(s.span)}
                  for s in fragment.steps],
        "flows": [{"from": f.from_step, "to": f.to_step, "span": span_to_json(f.span)} for f in fragment.flows],
        "span": span_to_json(fragment.span),
    }


def mapping_to_json(mapping: MappingPair) -> dict:
    return {
        "kind": str(mapping.kind),
        "pathA": str(mapping.path_a),
        "pathB": str(mapping.path_b),
        "cardA": _card(mapping.card_a),
        "cardB": _card(mapping.card_b),
        "span": span_to_json(mapping.span),
    }


def association_to_json(association: SystemAssociation) -> dict:
    return {
        "stereotype": association.stereotype,
        "systemA": association.system_a,
        "systemB": association.system_b,
        "mappings": [mapping_to_json(m) for m in association.mappings],
        "span": span_to_json(association.span),
    }


def system_to_json(system: SystemDecl, model: ResolvedModel, prefix: str) -> dict:
    path = qualify(prefix, system.name)
    explode = None
    if system.explode_ref is not None:
        child = model.child_unit(path)
        explode = {"path": system.explode_ref, "unit": None if child is None else unit_to_json(child, model, path)}
    return {
        "name": system.name,
        "path": path,
        "kind": str(system.kind),
        "composition": list(system.composition),
        "environment": list(system.environment),
        "structure": [coupling_to_json(c) for c in system.structure],
        "mechanisms": [m.name for m in system.mechanisms],
        "properties": [property_to_json(p) for p in system.properties],
        "dimensions": [dimension_to_json(d) for d in system.dimensions],
        "explode": explode,
        "span": span_to_json(system.span),
    }


def unit_to_json(unit: ModelUnit, model: ResolvedModel, prefix: str) -> dict:
    return {
        "name": unit.name,
        "levelPath": prefix,
        "file": unit.source_path,
        "systems": [system_to_json(s, model, prefix) for s in unit.systems],
        "associations": [association_to_json(a) for a in unit.associations],
        "span": span_to_json(unit.span),
    }


def model_to_json(model: ResolvedModel) -> dict:
    return {
        "scdVersion": SCD_JSON_VERSION,
        "root": unit_to_json(model.root, model, ROOT_LEVEL),
        "levels": [{"levelPath": path, "file": unit.source_path, "systems": unit.system_names}
                   for path, unit in model.levels.items()],
    }


def export_json(model: ResolvedModel) -> str:
    """Canonical JSON text of a resolved model, ending with a newline.

    :param model: a resolved model; validation is not required
    :return: byte-deterministic JSON with sorted keys
    """
    text = json.dumps(model_to_json(model), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    logger.debug("exported %d levels as %d bytes of JSON", len(model.levels), len(text))
    return text

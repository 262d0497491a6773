# dotutil.py - Graphviz DOT export of one composition level
#
# Copyright (c) 2026, scdpyler developers. All rights reserved.

import logging
from typing import List, Optional, Union

from .association import ElementPath, SystemAssociation
from .diagnostic import Diagnostic, DiagnosticError
from .resolver import ROOT_LEVEL, ResolvedModel
from .source_span import SourceSpan
from .system import SystemDecl
from .utils import qualify

logger = logging.getLogger(__name__)

SYSTEM_LABEL = "«system»"


def dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _attributes(pairs) -> str:
    return "[" + ", ".join(f"{key}={value}" for key, value in pairs) + "]"


def system_node(system: SystemDecl, prefix: str) -> str:
    attrs = [("label", dot_quote(f"{SYSTEM_LABEL} {system.name}"))]
    if system.is_exploded:
        attrs.append(("peripheries", "2"))
    if system.dimensions:
        attrs.append(("tooltip", dot_quote(", ".join(f"{d.kind}:{d.name}" for d in system.dimensions))))
    return f"{dot_quote(qualify(prefix, system.name))} {_attributes(attrs)};"


def association_edge(association: SystemAssociation, prefix: str) -> str:
    count = len(association.mappings)
    label = f"{count} mapping" if count == 1 else f"{count} mappings"
    return (f"{dot_quote(qualify(prefix, association.system_a))} -- "
            f"{dot_quote(qualify(prefix, association.system_b))} {_attributes([('label', dot_quote(label))])};")


def export_dot(model: ResolvedModel, level_path: Optional[Union[ElementPath, str]] = None) -> str:
    """DOT text of one level: a box per system, an undirected edge per system association.

    :param model: a resolved model
    :param level_path: qualified path of an exploded system; the root level when None or empty
    :raises DiagnosticError: E-QRY-001 when level_path names no exploded system
    """
    prefix = ROOT_LEVEL if level_path is None else str(level_path)
    unit = model.unit_for(prefix)
    if unit is None:
        span = model.root.span if model.root.span is not None else SourceSpan.at(model.root.source_path)
        raise DiagnosticError([Diagnostic.from_code("E-QRY-001", f"'{prefix}' does not name an exploded system",
                                                    span)])
    lines: List[str] = [f"graph {dot_quote(unit.name)} {{", "  node [shape=box];"]
    for system in unit.systems:
        lines.append("  " + system_node(system, prefix))
    for association in unit.associations:
        lines.append("  " + association_edge(association, prefix))
    lines.append("}")
    logger.debug("exported level '%s' as DOT: %d nodes, %d edges", prefix, len(unit.systems),
                 len(unit.associations))
    return "\n".join(lines) + "\n"

# formatter.py - canonical SCDL text
#
# format_unit() renders a ModelUnit as canonical SCDL: two-space indentation,
# one declaration per line, system sections in the fixed order
# composition, environment, structure, mechanism, properties, dimensions,
# explode. Parsing the output gives back an equal unit, and formatting is
# idempotent.
#
#  Copyright (c) 2026, scdpyler developers. All rights reserved.

from typing import Iterable, List, Optional

from .association import MappingPair, SystemAssociation
from .coupling import Coupling
from .derivation import render_derivation
from .dimension import DimensionFragment, EntityAssociation, EntityDecl
from .model_unit import ModelUnit
from .parser import parse
from .properties import PropertyDecl
from .system import SystemDecl

INDENT = "  "


def quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


class _Writer(object):
    def __init__(self):
        self.lines: List[str] = []

    def line(self, depth: int, text: str, comments: Iterable[str] = ()):
        for comment in comments:
            self.lines.append(INDENT * depth + comment)
        self.lines.append(INDENT * depth + text)

    def blank(self):
        self.lines.append("")

    def block(self, depth: int, header: str, body, comments: Iterable[str] = ()):
        """Writes 'header {' body '}' or 'header {}' when body writes nothing."""
        start = len(self.lines)
        self.line(depth, f"{header} {{", comments)
        opened = len(self.lines)
        body(depth + 1)
        if len(self.lines) == opened:
            self.lines[opened - 1] = self.lines[opened - 1] + "}"
        else:
            self.line(depth, "}")
        return start

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def format_coupling(coupling: Coupling) -> str:
    text = f"{coupling.end_a} -- {coupling.end_b}"
    if coupling.energy is not None:
        text += f" [{coupling.energy}]"
    if coupling.label is not None:
        text += f" {quote(coupling.label)}"
    return text + ";"


def format_property(prop: PropertyDecl) -> str:
    text = f"{prop.classification} {prop.name}: {prop.value_type}"
    if prop.derivation is not None:
        text += f" = {render_derivation(prop.derivation)}"
    return text + ";"


def format_link(link: EntityAssociation) -> str:
    text = f"link {link.entity_a} [{link.card_a}] -- {link.entity_b} [{link.card_b}]"
    if link.label is not None:
        text += f" {quote(link.label)}"
    return text + ";"


def format_mapping(mapping: MappingPair) -> str:
    text = f"{mapping.path_a} <-> {mapping.path_b}"
    if mapping.is_counterpart:
        text = "counterpart " + text
    if mapping.card_a is not None:
        text += f" [{mapping.card_a}, {mapping.card_b}]"
    return text + ";"


def _write_entity(out: _Writer, depth: int, entity: EntityDecl):
    def body(d):
        for attr, value_type in entity.attributes:
            out.line(d, f"{attr}: {value_type};")
    out.block(depth, f"entity {entity.name}", body, entity.comments)


def _write_dimension(out: _Writer, depth: int, fragment: DimensionFragment):
    def body(d):
        for entity in fragment.entities:
            _write_entity(out, d, entity)
        for link in fragment.links:
            out.line(d, format_link(link), link.comments)
        for actor in fragment.actors:
            role = f" {quote(actor.role)}" if actor.role else ""
            out.line(d, f"actor {actor.name}{role};", actor.comments)
        for step in fragment.steps:
            by = f" by {', '.join(step.performed_by)}" if step.performed_by else ""
            out.line(d, f"step {step.name}{by};", step.comments)
        for flow in fragment.flows:
            out.line(d, f"flow {flow.from_step} -> {flow.to_step};", flow.comments)
    out.block(depth, f"dimension {fragment.kind} {fragment.name}", body, fragment.comments)


def _write_system(out: _Writer, depth: int, system: SystemDecl):
    def body(d):
        if system.composition:
            out.line(d, f"composition {{ {', '.join(system.composition)} }}")
        if system.environment:
            out.line(d, f"environment {{ {', '.join(system.environment)} }}")
        if system.structure:
            def couplings(dd):
                for coupling in system.structure:
                    out.line(dd, format_coupling(coupling), coupling.comments)
            out.block(d, "structure", couplings)
        for mechanism in system.mechanisms:
            out.line(d, f"mechanism {mechanism.name};", mechanism.comments)
        if system.properties:
            def props(dd):
                for prop in system.properties:
                    out.line(dd, format_property(prop), prop.comments)
            out.block(d, "properties", props)
        for fragment in system.dimensions:
            _write_dimension(out, d, fragment)
        if system.explode_ref is not None:
            out.line(d, f"explode {quote(system.explode_ref)};")
    out.block(depth, f"{system.kind} system {system.name}", body, system.comments)


def _write_association(out: _Writer, depth: int, association: SystemAssociation):
    def body(d):
        for mapping in association.mappings:
            out.line(d, format_mapping(mapping), mapping.comments)
    header = f"association <<{association.stereotype}>> {association.system_a} -- {association.system_b}"
    out.block(depth, header, body, association.comments)


def format_unit(unit: ModelUnit) -> str:
    """Canonical SCDL text of a unit, LF line endings, ending with a newline.

    :param unit: the unit to render
    :return: text that parses back to a unit equal to the input
    """
    if not isinstance(unit, ModelUnit):
        raise TypeError(f"format_unit expects a ModelUnit: received {type(unit)}.")
    out = _Writer()

    def items(depth):
        first = True
        for item in list(unit.systems) + list(unit.associations):
            if not first:
                out.blank()
            first = False
            if isinstance(item, SystemDecl):
                _write_system(out, depth, item)
            else:
                _write_association(out, depth, item)

    out.block(0, f"scd {unit.name}", items, unit.comments)
    return out.text()


def format_source(source: str, file: str = "<memory>") -> str:
    """Parses and re-renders source; raises DiagnosticError when it does not parse."""
    return format_unit(parse(source, file))


def is_canonical(source: str, file: str = "<memory>") -> bool:
    return format_source(source, file) == source


def first_difference(source: str, canonical: str) -> Optional[int]:
    """1-based number of the first line where source and its canonical form differ."""
    a, b = source.split("\n"), canonical.split("\n")
    for number, (left, right) in enumerate(zip(a, b), start=1):
        if left != right:
            return number
    return None if len(a) == len(b) else min(len(a), len(b)) + 1

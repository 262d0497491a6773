# parser.py - SCDL recursive descent parser
#
# The parser reads the token stream produced by the lexer and builds the core
# model. Core-model constructors validate their own invariants; the parser
# turns the ModelError they raise into a diagnostic, so the checks live in one
# place. A syntax error aborts the current statement only: the parser skips
# to the next ';' or '}' at the nesting depth where the statement started and
# carries on, so one run reports every independent error.
#
#  Copyright (c) 2026, scdpyler developers. All rights reserved.

import decimal
import logging
from typing import Callable, List, Optional, Tuple

from .association import ElementPath, MappingKind, MappingPair, SystemAssociation
from .cardinality import Card
from .coupling import Coupling, CouplingEnd, EnergyKind
from .derivation import ALL_COMPONENTS, ArithOp, BinaryOp, ComponentPath, DerivationExpr, Fold, FoldOp, Literal
from .diagnostic import Diagnostic, DiagnosticError, ModelError, sort_diagnostics
from .dimension import (INTERACTION, ActorDecl, DimensionFragment, DimensionKind, EntityAssociation, EntityDecl,
                        FlowDecl, StepDecl)
from .lexer import Token, TokenKind, scan
from .model_unit import ModelUnit
from .properties import PropertyClass, PropertyDecl, ValueType
from .source_span import SourceSpan
from .system import MechanismFragment, SystemDecl, SystemKind

logger = logging.getLogger(__name__)

#: deepest allowed nesting of braces and parentheses
MAX_NESTING = 64

_SECTIONS = ("composition", "environment", "structure", "mechanism", "properties", "dimension", "explode")
_SINGLE_SECTIONS = ("composition", "environment", "structure", "properties", "explode")
_OPENERS, _CLOSERS = ("{", "("), ("}", ")")


class _ParseFailure(Exception):
    """Aborts the statement being parsed; the diagnostic is recorded by the enclosing block loop."""
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic
        Exception.__init__(self, diagnostic.render())


class Parser(object):
    def __init__(self, tokens: List[Token], file: str):
        if len(tokens) == 0 or tokens[-1].kind is not TokenKind.EOF:
            raise ValueError("Parser needs a token list that ends with an end-of-file token.")
        self.tokens = tokens
        self.file = file
        self.pos = 0
        self.nesting = 0
        self.diagnostics: List[Diagnostic] = []

    # -- token helpers -------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    @property
    def previous(self) -> Token:
        return self.tokens[self.pos - 1] if self.pos > 0 else self.tokens[0]

    @property
    def at_end(self) -> bool:
        return self.current.kind is TokenKind.EOF

    def advance(self, checked: bool = True) -> Token:
        token = self.current
        if token.kind is TokenKind.EOF:
            return token
        self.pos += 1
        if token.kind is TokenKind.PUNCTUATION and token.lexeme in _OPENERS:
            self.nesting += 1
            if checked and self.nesting > MAX_NESTING:
                raise self.failure("E-PAR-007", f"nesting is deeper than {MAX_NESTING} levels", token)
        elif token.kind is TokenKind.PUNCTUATION and token.lexeme in _CLOSERS:
            self.nesting = max(0, self.nesting - 1)
        return token

    def check_punct(self, symbol: str) -> bool:
        return self.current.is_punct(symbol)

    def check_keyword(self, word: str) -> bool:
        return self.current.is_keyword(word)

    def match_punct(self, symbol: str) -> bool:
        if self.check_punct(symbol):
            self.advance()
            return True
        return False

    def failure(self, code: str, message: str, token: Optional[Token] = None) -> _ParseFailure:
        token = token if token is not None else self.current
        return _ParseFailure(Diagnostic.from_code(code, message, token.span))

    def unexpected(self, expected: str) -> _ParseFailure:
        return self.failure("E-PAR-001", f"expected {expected}, found {self.current.describe()}")

    def expect_punct(self, symbol: str) -> Token:
        if not self.check_punct(symbol):
            raise self.unexpected(f"'{symbol}'")
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        if not self.check_keyword(word):
            raise self.unexpected(f"'{word}'")
        return self.advance()

    def expect_identifier(self, what: str = "an identifier") -> str:
        if self.current.kind is not TokenKind.IDENTIFIER:
            if self.current.kind is TokenKind.KEYWORD:
                raise self.unexpected(f"{what} (the keyword {self.current.describe()} is reserved)")
            raise self.unexpected(what)
        return self.advance().lexeme

    def expect_string(self) -> str:
        if self.current.kind is not TokenKind.STRING:
            raise self.unexpected("a string literal")
        return self.advance().string_value

    def span_from(self, start: Token) -> SourceSpan:
        end = self.previous if self.pos > 0 else start
        return start.span.to(end.span)

    # -- diagnostics and recovery --------------------------------------

    def report(self, diagnostic: Diagnostic):
        # a cascade of errors at one position (typically end of file) is reported once
        if any(d.span.sort_key == diagnostic.span.sort_key for d in self.diagnostics):
            return
        self.diagnostics.append(diagnostic)

    def synchronize(self, depth: int, start_pos: int):
        """Skips to the end of the failed statement: the next ';' or '}' at the starting depth."""
        while not self.at_end:
            token = self.current
            if self.nesting <= depth:
                if token.is_punct("}"):
                    break
                if token.is_punct(";"):
                    self.advance(checked=False)
                    break
            self.advance(checked=False)
            if token.is_punct("}") and self.nesting <= depth:
                break
        if self.pos == start_pos and not self.at_end and not self.check_punct("}"):
            self.advance(checked=False)

    def statement_complete(self, depth: int, start_pos: int) -> bool:
        """True when the statement was read to its end and only failed to construct."""
        if self.pos == start_pos or self.nesting > depth:
            return False
        return self.previous.is_punct(";") or self.previous.is_punct("}")

    def build(self, constructor: Callable, *args, fallback: Optional[SourceSpan] = None, **kwargs):
        """Calls a core-model constructor, turning a ModelError into a _ParseFailure."""
        try:
            return constructor(*args, **kwargs)
        except ModelError as err:
            span = fallback if fallback is not None else self.previous.span
            raise _ParseFailure(err.to_diagnostic(span))

    def block(self, statement: Callable[[], object]) -> list:
        """Parses '{' statement* '}' with per-statement recovery; returns the statements that parsed."""
        self.expect_punct("{")
        results = []
        while not self.check_punct("}") and not self.at_end:
            depth, start_pos = self.nesting, self.pos
            try:
                result = statement()
                if result is not None:
                    results.append(result)
            except _ParseFailure as failure:
                self.report(failure.diagnostic)
                if not self.statement_complete(depth, start_pos):
                    self.synchronize(depth, start_pos)
        self.expect_punct("}")
        return results

    # -- model ----------------------------------------------------------

    def parse_model(self) -> Optional[ModelUnit]:
        start = self.current
        try:
            self.expect_keyword("scd")
            name = self.expect_identifier("a model name")
            items = self.block(self.parse_item)
        except _ParseFailure as failure:
            self.report(failure.diagnostic)
            return None
        span = self.span_from(start)
        if not self.at_end:
            self.report(Diagnostic.from_code("E-PAR-001", f"unexpected {self.current.describe()} after the end "
                                                          f"of the model", self.current.span))
            return None

        systems, associations, declared = [], [], set()
        for kind, item in items:
            if kind == "system":
                system_name, system = item
                if system_name in declared:
                    span_of = system.span if system is not None else span
                    self.report(Diagnostic.from_code("E-PAR-002", f"system '{system_name}' is declared more "
                                                                  f"than once", span_of))
                    continue
                declared.add(system_name)
                if system is not None:
                    systems.append(system)
        for kind, item in items:
            if kind == "association":
                endpoints_ok = True
                for endpoint in item.endpoints:
                    if endpoint not in declared:
                        endpoints_ok = False
                        self.report(Diagnostic.from_code("E-PAR-004", f"association endpoint '{endpoint}' is not a "
                                                                      f"declared system", item.span))
                if endpoints_ok:
                    associations.append(item)
        if self.diagnostics:
            return None
        try:
            return ModelUnit(name, tuple(systems), tuple(associations), source_path=self.file, span=span,
                             comments=start.leading_comments)
        except ModelError as err:
            self.report(err.to_diagnostic(span))
            return None

    def parse_item(self):
        if self.check_keyword("concrete") or self.check_keyword("conceptual"):
            return "system", self.parse_system()
        if self.check_keyword("association"):
            return "association", self.parse_association()
        raise self.unexpected("a system or association declaration")

    # -- systems --------------------------------------------------------

    def parse_system(self) -> Tuple[str, Optional[SystemDecl]]:
        start = self.advance()
        kind = SystemKind(start.lexeme)
        self.expect_keyword("system")
        name = self.expect_identifier("a system name")
        sections = {"mechanisms": [], "dimensions": []}
        seen = set()
        errors_before = len(self.diagnostics)

        def section():
            token = self.current
            word = token.lexeme
            if token.kind is not TokenKind.KEYWORD or word not in _SECTIONS:
                raise self.failure("E-PAR-003", f"{token.describe()} cannot start a section; expected one of "
                                                f"{', '.join(_SECTIONS)}")
            if word in _SINGLE_SECTIONS and word in seen:
                raise self.failure("E-PAR-006", f"section '{word}' appears twice in system '{name}'")
            self.advance()
            seen.add(word)
            if word == "composition":
                sections["composition"] = self.parse_ident_list()
            elif word == "environment":
                sections["environment"] = self.parse_ident_list()
            elif word == "structure":
                sections["structure"] = self.block(self.parse_coupling)
            elif word == "properties":
                sections["properties"] = self.block(self.parse_property)
            elif word == "mechanism":
                mechanism_name = self.expect_identifier("a mechanism dimension name")
                self.expect_punct(";")
                sections["mechanisms"].append(MechanismFragment(mechanism_name, self.span_from(token),
                                                                token.leading_comments))
            elif word == "dimension":
                sections["dimensions"].append(self.parse_dimension(token))
            elif word == "explode":
                path_token = self.current
                sections["explode_ref"] = self.expect_string()
                if sections["explode_ref"].strip() == "":
                    raise self.failure("E-PAR-001", "explode needs a non-empty file path", path_token)
                self.expect_punct(";")

        self.block(section)
        span = self.span_from(start)
        if len(self.diagnostics) > errors_before:
            return name, None
        try:
            system = SystemDecl(name, kind, span=span, comments=start.leading_comments, **sections)
        except ModelError as err:
            self.report(err.to_diagnostic(span))
            return name, None
        return name, system

    def parse_ident_list(self) -> Tuple[str, ...]:
        self.expect_punct("{")
        names = []
        if not self.check_punct("}"):
            names.append(self.expect_identifier())
            while self.match_punct(","):
                names.append(self.expect_identifier())
        self.expect_punct("}")
        return tuple(names)

    def parse_coupling_end(self) -> CouplingEnd:
        if self.check_keyword("env"):
            self.advance()
            self.expect_punct(".")
            return CouplingEnd.environment(self.expect_identifier("an environment party"))
        return CouplingEnd.component(self.expect_identifier("a component name"))

    def parse_coupling(self) -> Coupling:
        start = self.current
        end_a = self.parse_coupling_end()
        self.expect_punct("--")
        end_b = self.parse_coupling_end()
        energy = label = None
        if self.match_punct("["):
            word = self.current
            kind_name = self.expect_identifier("an energy kind")
            try:
                energy = EnergyKind(kind_name)
            except ValueError:
                raise self.failure("E-PAR-008", f"'{kind_name}' is not an energy kind; expected one of "
                                                f"{', '.join(e.value for e in EnergyKind)}", word)
            self.expect_punct("]")
        if self.current.kind is TokenKind.STRING:
            label = self.expect_string()
        self.expect_punct(";")
        return self.build(Coupling, end_a, end_b, energy, label, self.span_from(start), start.leading_comments,
                          fallback=self.span_from(start))

    # -- properties and derivations ------------------------------------

    def parse_value_type(self) -> ValueType:
        token = self.current
        type_name = self.expect_identifier("a value type (number, text or flag)")
        try:
            return ValueType(type_name)
        except ValueError:
            raise self.failure("E-PAR-001", f"expected a value type (number, text or flag), found '{type_name}'",
                               token)

    def parse_property(self) -> PropertyDecl:
        start = self.current
        if start.kind is not TokenKind.KEYWORD or start.lexeme not in [c.value for c in PropertyClass]:
            raise self.unexpected("'intrinsic', 'aggregate' or 'emergent'")
        classification = PropertyClass(self.advance().lexeme)
        name = self.expect_identifier("a property name")
        self.expect_punct(":")
        value_type = self.parse_value_type()
        derivation = None
        if self.match_punct("="):
            derivation = self.parse_expr()
        self.expect_punct(";")
        return self.build(PropertyDecl, name, classification, value_type, derivation, self.span_from(start),
                          start.leading_comments, fallback=self.span_from(start))

    def parse_expr(self) -> DerivationExpr:
        start = self.current
        left = self.parse_term()
        while self.check_punct("+") or self.check_punct("-"):
            op = ArithOp(self.advance().lexeme)
            right = self.parse_term()
            left = self.build(BinaryOp, op, left, right, self.span_from(start), fallback=self.span_from(start))
        return left

    def parse_term(self) -> DerivationExpr:
        start = self.current
        left = self.parse_factor()
        while self.check_punct("*") or self.check_punct("/"):
            op = ArithOp(self.advance().lexeme)
            right = self.parse_factor()
            left = self.build(BinaryOp, op, left, right, self.span_from(start), fallback=self.span_from(start))
        return left

    def parse_factor(self) -> DerivationExpr:
        start = self.current
        if start.kind is TokenKind.NUMBER:
            self.advance()
            return Literal(decimal.Decimal(start.lexeme), start.span)
        if start.kind is TokenKind.KEYWORD and start.lexeme in [op.value for op in FoldOp]:
            op = FoldOp(self.advance().lexeme)
            self.expect_punct("(")
            if self.check_keyword(ALL_COMPONENTS):
                target = self.advance().lexeme
            else:
                target = self.expect_identifier(f"'{ALL_COMPONENTS}' or a component name")
            self.expect_punct(".")
            prop = self.expect_identifier("a property name")
            self.expect_punct(")")
            return Fold(op, ComponentPath(target, prop), self.span_from(start))
        if self.match_punct("("):
            inner = self.parse_expr()
            self.expect_punct(")")
            return inner
        raise self.unexpected("a number, a fold such as sum(components.p), or '('")

    # -- dimensions -----------------------------------------------------

    def parse_dimension(self, start: Token) -> DimensionFragment:
        kind_token = self.current
        if kind_token.is_keyword(INTERACTION):
            raise self.failure("E-DIM-009", "interaction dimensions are not supported; use structural or mechanism",
                               kind_token)
        if not (kind_token.is_keyword("structural") or kind_token.is_keyword("mechanism")):
            raise self.unexpected("'structural' or 'mechanism'")
        kind = DimensionKind(self.advance().lexeme)
        name = self.expect_identifier("a dimension name")
        content = {"entities": [], "links": [], "actors": [], "steps": [], "flows": []}
        allowed = ("entity", "link") if kind is DimensionKind.STRUCTURAL else ("actor", "step", "flow")
        parsers = {"entity": ("entities", self.parse_entity), "link": ("links", self.parse_link),
                   "actor": ("actors", self.parse_actor), "step": ("steps", self.parse_step),
                   "flow": ("flows", self.parse_flow)}

        def statement():
            token = self.current
            if token.kind is TokenKind.KEYWORD and token.lexeme in parsers and token.lexeme not in allowed:
                other = "mechanism" if kind is DimensionKind.STRUCTURAL else "structural"
                raise self.failure("E-PAR-003", f"'{token.lexeme}' declarations belong in a {other} dimension")
            if token.kind is not TokenKind.KEYWORD or token.lexeme not in allowed:
                raise self.failure("E-PAR-003", f"{token.describe()} cannot start a declaration in {kind} "
                                                f"dimension '{name}'; expected {' or '.join(allowed)}")
            key, parse = parsers[token.lexeme]
            content[key].append(parse())

        self.block(statement)
        span = self.span_from(start)
        return self.build(DimensionFragment, kind, name, span=span, comments=start.leading_comments,
                          fallback=span, **content)

    def parse_entity(self) -> EntityDecl:
        start = self.advance()
        name = self.expect_identifier("an entity name")

        def attribute():
            attr = self.expect_identifier("an attribute name")
            self.expect_punct(":")
            value_type = self.parse_value_type()
            self.expect_punct(";")
            return attr, value_type

        attributes = self.block(attribute)
        return self.build(EntityDecl, name, tuple(attributes), self.span_from(start), start.leading_comments,
                          fallback=self.span_from(start))

    def parse_card(self) -> Card:
        token = self.current
        if token.kind in (TokenKind.CARDINALITY, TokenKind.NUMBER) or token.is_punct("*"):
            self.advance()
            return self.build(Card.parse, token.lexeme, fallback=token.span)
        raise self.unexpected("a cardinality (0..1, 1, 0..* or 1..*)")

    def parse_link(self) -> EntityAssociation:
        start = self.advance()
        entity_a = self.expect_identifier("an entity name")
        self.expect_punct("[")
        card_a = self.parse_card()
        self.expect_punct("]")
        self.expect_punct("--")
        entity_b = self.expect_identifier("an entity name")
        self.expect_punct("[")
        card_b = self.parse_card()
        self.expect_punct("]")
        label = self.expect_string() if self.current.kind is TokenKind.STRING else None
        self.expect_punct(";")
        return self.build(EntityAssociation, entity_a, card_a, entity_b, card_b, label, self.span_from(start),
                          start.leading_comments, fallback=self.span_from(start))

    def parse_actor(self) -> ActorDecl:
        start = self.advance()
        name = self.expect_identifier("an actor name")
        role = self.expect_string() if self.current.kind is TokenKind.STRING else ""
        self.expect_punct(";")
        return ActorDecl(name, role, self.span_from(start), start.leading_comments)

    def parse_step(self) -> StepDecl:
        start = self.advance()
        name = self.expect_identifier("a step name")
        actors = []
        if self.check_keyword("by"):
            self.advance()
            actors.append(self.expect_identifier("an actor name"))
            while self.match_punct(","):
                actors.append(self.expect_identifier("an actor name"))
        self.expect_punct(";")
        return StepDecl(name, tuple(actors), self.span_from(start), start.leading_comments)

    def parse_flow(self) -> FlowDecl:
        start = self.advance()
        from_step = self.expect_identifier("a step name")
        self.expect_punct("->")
        to_step = self.expect_identifier("a step name")
        self.expect_punct(";")
        return self.build(FlowDecl, from_step, to_step, self.span_from(start), start.leading_comments,
                          fallback=self.span_from(start))

    # -- associations ---------------------------------------------------

    def parse_association(self) -> SystemAssociation:
        start = self.advance()
        self.expect_punct("<<")
        stereotype = self.current
        if not stereotype.is_keyword("system"):
            raise self.unexpected("the stereotype 'system'")
        self.advance()
        self.expect_punct(">>")
        system_a = self.expect_identifier("a system name")
        self.expect_punct("--")
        system_b = self.expect_identifier("a system name")
        mappings = self.block(self.parse_mapping)
        span = self.span_from(start)
        return self.build(SystemAssociation, system_a, system_b, tuple(mappings), span, start.leading_comments,
                          fallback=span)

    def parse_path(self) -> ElementPath:
        segments = [self.expect_identifier("a path segment")]
        while self.match_punct("."):
            segments.append(self.expect_identifier("a path segment"))
        return ElementPath(tuple(segments))

    def parse_mapping(self) -> MappingPair:
        start = self.current
        kind = MappingKind.ASSOCIATION
        if self.check_keyword("counterpart"):
            self.advance()
            kind = MappingKind.COUNTERPART
        path_a = self.parse_path()
        self.expect_punct("<->")
        path_b = self.parse_path()
        card_a = card_b = None
        if self.match_punct("["):
            card_a = self.parse_card()
            self.expect_punct(",")
            card_b = self.parse_card()
            self.expect_punct("]")
        self.expect_punct(";")
        span = self.span_from(start)
        return self.build(MappingPair, path_a, path_b, kind, card_a, card_b, span, start.leading_comments,
                          fallback=span)


def parse_with_diagnostics(source: str, file: str = "<memory>") -> Tuple[Optional[ModelUnit], List[Diagnostic]]:
    """Parses SCDL source, returning the unit (None on failure) and every diagnostic found."""
    tokens, lexical = scan(source, file)
    parser = Parser(tokens, file)
    unit = parser.parse_model()
    diagnostics = sort_diagnostics(lexical + parser.diagnostics)
    if diagnostics:
        unit = None
    logger.debug("parsed %s: %s", file, "ok" if unit is not None else f"{len(diagnostics)} diagnostics")
    return unit, diagnostics


def parse(source: str, file: str = "<memory>") -> ModelUnit:
    """Parses SCDL source text into a ModelUnit.

    :param source: SCDL text (LF or CRLF line endings)
    :param file: path recorded in spans and as the unit's source_path
    :raises DiagnosticError: carrying the lexical and syntax diagnostics when the text does not parse
    """
    unit, diagnostics = parse_with_diagnostics(source, file)
    if unit is None:
        raise DiagnosticError(diagnostics)
    return unit

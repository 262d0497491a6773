# diagnostic.py - diagnostics and the published code catalog
#
# Every pass of the toolkit reports problems as Diagnostic values. A
# Diagnostic is a severity, a stable code, a message and a source span. The
# codes and their severities are frozen in CATALOG below; docs/diagnostics.md
# lists the same table for users.
#
#  Copyright (c) 2026, scdpyler developers. All rights reserved.

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

from .source_span import SourceSpan


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"

    def __str__(self):
        return self.value


_E, _W = Severity.ERROR, Severity.WARNING

#: code -> (severity, short title)
CATALOG = {
    # lexical
    "E-LEX-001": (_E, "unrecognized character"),
    "E-LEX-002": (_E, "unterminated string or block comment"),
    # syntax and construction
    "E-PAR-001": (_E, "unexpected token"),
    "E-PAR-002": (_E, "duplicate system name"),
    "E-PAR-003": (_E, "unknown keyword in section position"),
    "E-PAR-004": (_E, "association endpoint is not a declared system"),
    "E-PAR-005": (_E, "coupling end is not declared"),
    "E-PAR-006": (_E, "duplicate or clashing declaration"),
    "E-PAR-007": (_E, "nesting too deep"),
    "E-PAR-008": (_E, "malformed coupling or cardinality"),
    "E-PAR-009": (_E, "malformed association"),
    # dimension fragments
    "E-DIM-001": (_E, "duplicate name in dimension fragment"),
    "E-DIM-002": (_E, "link end is not an entity of the fragment"),
    "E-DIM-003": (_E, "step performed by an undeclared actor"),
    "E-DIM-004": (_E, "flow references an undeclared step or loops on itself"),
    "E-DIM-005": (_E, "mechanism names a missing or non-mechanism fragment"),
    "E-DIM-006": (_E, "duplicate entity attribute"),
    "E-DIM-009": (_E, "interaction dimension not supported"),
    # levels
    "E-LVL-001": (_E, "explode target fails to load or parse"),
    "E-LVL-002": (_E, "explode cycle"),
    "E-LVL-003": (_E, "child level does not match the parent composition"),
    "E-LVL-004": (_E, "explode target shared by two systems"),
    # queries
    "E-QRY-001": (_E, "path does not resolve"),
    "E-QRY-002": (_E, "system has no explode link"),
    # systemist semantics
    "E-BWW-001": (_E, "composition is not a system under the BWW criterion"),
    "E-KND-001": (_E, "energy-typed coupling on a conceptual system"),
    "E-MAP-001": (_E, "mechanism actor without structural counterpart"),
    "E-MAP-002": (_E, "dangling mapping path"),
    "W-MAP-010": (_W, "structural entity without functional role"),
    "E-PRP-001": (_E, "aggregate property without derivation"),
    "E-PRP-002": (_E, "derivation references an undeclared component property"),
    "W-PRP-003": (_W, "emergent property derived by a bare fold"),
    "E-PRP-004": (_E, "derivation nested too deep"),
    "E-PRP-005": (_E, "intrinsic property with a derivation"),
    "E-PRP-006": (_E, "derivation on a non-number property"),
    "E-PRP-007": (_E, "fold over a property of the wrong value type"),
    "W-CSM-001": (_W, "concrete system without structure"),
    "W-CSM-002": (_W, "concrete system without mechanism"),
    "W-CSM-003": (_W, "system association without mappings"),
    "W-ATOM-001": (_W, "system with empty composition (abstraction stop)"),
    # evaluation
    "E-EVL-001": (_E, "missing valuation entry"),
    "E-EVL-002": (_E, "division by zero"),
    "E-EVL-003": (_E, "min/max/avg over an empty component set"),
    "E-EVL-004": (_E, "derivation reference cycle"),
    "E-EVL-005": (_E, "arithmetic result out of the evaluation range"),
}

_CODE_PATTERN = re.compile(r"^[EW]-[A-Z]{3,4}-[0-9]{3}$")


@dataclass(frozen=True)
class Diagnostic(object):
    """A single finding attached to a source location.

    notes holds nested diagnostics, for example the parse errors of a child
    level that failed to load.
    """
    severity: Severity
    code: str
    message: str
    span: SourceSpan
    notes: Tuple["Diagnostic", ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.code, str) or not _CODE_PATTERN.match(self.code):
            raise ValueError(f"Diagnostic code must look like E-XXX-nnn or W-XXX-nnn: received {self.code}.")
        if self.code not in CATALOG:
            raise ValueError(f"Diagnostic code {self.code} is not part of the published catalog.")
        if CATALOG[self.code][0] is not self.severity:
            raise ValueError(f"Diagnostic code {self.code} has severity {CATALOG[self.code][0]}, "
                             f"not {self.severity}.")
        if not isinstance(self.span, SourceSpan):
            raise TypeError(f"Diagnostic span must be a SourceSpan: received {type(self.span)}.")
        object.__setattr__(self, "notes", tuple(self.notes))

    @staticmethod
    def from_code(code: str, message: str, span: SourceSpan, notes: Iterable["Diagnostic"] = ()) -> "Diagnostic":
        """Creates a Diagnostic whose severity is looked up in the catalog."""
        if code not in CATALOG:
            raise ValueError(f"Diagnostic code {code} is not part of the published catalog.")
        return Diagnostic(CATALOG[code][0], code, message, span, tuple(notes))

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    @property
    def sort_key(self):
        return self.span.sort_key + (self.code, self.message)

    def render(self) -> str:
        """FILE:LINE:COL: SEVERITY[CODE]: MESSAGE"""
        return f"{self.span}: {self.severity}[{self.code}]: {self.message}"

    def to_dict(self) -> dict:
        return {
            "file": self.span.file,
            "line": self.span.start_line,
            "col": self.span.start_col,
            "severity": str(self.severity),
            "code": self.code,
            "message": self.message,
        }

    def __str__(self):
        return self.render()


def sort_diagnostics(diagnostics: Iterable[Diagnostic]) -> List[Diagnostic]:
    """Canonical order: file, start line, start column, code."""
    return sorted(diagnostics, key=lambda d: d.sort_key)


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)


class DiagnosticError(Exception):
    """Raised by a pass that cannot produce its result.

    The diagnostics that explain the failure are kept in canonical order.
    """
    def __init__(self, diagnostics: Iterable[Diagnostic]):
        self.diagnostics = sort_diagnostics(diagnostics)
        if len(self.diagnostics) == 0:
            raise ValueError("DiagnosticError needs at least one diagnostic.")
        Exception.__init__(self, "\n".join(d.render() for d in self.diagnostics))

    @property
    def codes(self) -> List[str]:
        return [d.code for d in self.diagnostics]


class ModelError(ValueError):
    """A core-model invariant was violated during construction.

    code is a catalog code; span, when known, points at the offending
    declaration.
    """
    def __init__(self, code: str, message: str, span: Optional[SourceSpan] = None):
        if code not in CATALOG:
            raise ValueError(f"ModelError code {code} is not part of the published catalog.")
        self.code = code
        self.message = message
        self.span = span
        ValueError.__init__(self, f"[{code}] {message}")

    def to_diagnostic(self, fallback_span: SourceSpan) -> Diagnostic:
        return Diagnostic.from_code(self.code, self.message, self.span if self.span is not None else fallback_span)

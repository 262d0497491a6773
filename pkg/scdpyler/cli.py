# cli.py - the scd command line
#
#   scd check ROOT [ROOT ...] [--json-diagnostics] [--deny-warnings]
#   scd fmt FILE [FILE ...] [--check]
#   scd export ROOT --format json|dot [--level PATH]
#   scd query ROOT boundary|drill|eval [TARGET] [--values FILE]
#
# Exit status: 0 success, 1 error diagnostics, 2 usage or I/O failure.
# Documents and query results go to standard output; diagnostics and log
# records go to standard error.
#
# Copyright (c) 2026, scdpyler developers. All rights reserved.

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, TextIO

from .analysis import evaluate_aggregates, format_decimal
from .diagnostic import Diagnostic, DiagnosticError, Severity, has_errors
from .dotutil import export_dot
from .formatter import first_difference, format_unit
from .jsonutil import export_json
from .loader import FileUnitLoader, UnitLoadError
from .parser import parse_with_diagnostics
from .resolver import ResolvedModel, drill_down, element_path_resolve, resolve
from .source_span import SourceSpan
from .system import SystemDecl
from .validator import classify_boundary, validate
from .valuation import Valuation

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2

PROG = "scd"
_COLORS = {Severity.ERROR: "\033[31m", Severity.WARNING: "\033[33m"}
_RESET = "\033[0m"


class _UsageError(Exception):
    """Bad arguments or unreadable input; maps to exit status 2."""


@dataclass
class _Outcome(object):
    """Everything one unit of work wants to print, emitted in one piece."""
    status: int = EXIT_OK
    diagnostics: List[Diagnostic] = field(default_factory=list)
    messages: List[str] = field(default_factory=list)
    output: List[str] = field(default_factory=list)


def use_color(stream: TextIO) -> bool:
    if "NO_COLOR" in os.environ:
        return False
    isatty = getattr(stream, "isatty", None)
    return bool(isatty and isatty())


def render_diagnostic(diagnostic: Diagnostic, color: bool = False) -> str:
    severity = str(diagnostic.severity)
    if color:
        severity = f"{_COLORS[diagnostic.severity]}{severity}{_RESET}"
    return f"{diagnostic.span}: {severity}[{diagnostic.code}]: {diagnostic.message}"


def diagnostic_lines(diagnostics: Sequence[Diagnostic], as_json: bool = False, color: bool = False) -> List[str]:
    lines = []
    for diagnostic in diagnostics:
        if as_json:
            lines.append(json.dumps(diagnostic.to_dict(), sort_keys=True, ensure_ascii=False))
            continue
        lines.append(render_diagnostic(diagnostic, color))
        lines.extend("  " + render_diagnostic(note, color) for note in diagnostic.notes)
    return lines


def _emit(outcome: _Outcome, args, out: TextIO, err: TextIO):
    color = use_color(err) and not getattr(args, "json_diagnostics", False)
    for line in diagnostic_lines(outcome.diagnostics, getattr(args, "json_diagnostics", False), color):
        print(line, file=err)
    for line in outcome.messages:
        print(f"{PROG}: {line}", file=err)
    for text in outcome.output:
        out.write(text)


def _load_model(root: str) -> ResolvedModel:
    if root.strip() == "":
        raise _UsageError("root file path is empty")
    try:
        return resolve(root, FileUnitLoader())
    except UnitLoadError as error:
        raise _UsageError(str(error))


def _status(diagnostics: Sequence[Diagnostic], deny_warnings: bool) -> int:
    if has_errors(diagnostics) or (deny_warnings and diagnostics):
        return EXIT_DIAGNOSTICS
    return EXIT_OK


def check_root(root: str, deny_warnings: bool = False) -> _Outcome:
    """Parse, resolve and validate one root file."""
    outcome = _Outcome()
    try:
        model = _load_model(root)
    except _UsageError as error:
        outcome.status = EXIT_USAGE
        outcome.messages.append(str(error))
        return outcome
    except DiagnosticError as error:
        outcome.diagnostics = error.diagnostics
        outcome.status = EXIT_DIAGNOSTICS
        return outcome
    outcome.diagnostics = validate(model)
    outcome.status = _status(outcome.diagnostics, deny_warnings)
    logger.debug("checked %s: %d diagnostics, status %d", root, len(outcome.diagnostics), outcome.status)
    return outcome


def cmd_check(args, out: TextIO, err: TextIO) -> int:
    workers = max(1, min(len(args.roots), os.cpu_count() or 1))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        outcomes = list(pool.map(lambda root: check_root(root, args.deny_warnings), args.roots))
    for outcome in outcomes:
        _emit(outcome, args, out, err)
    return max(outcome.status for outcome in outcomes)


def format_file(path: str, check_only: bool) -> _Outcome:
    outcome = _Outcome()
    try:
        with open(path, encoding="utf-8", newline="") as handle:
            source = handle.read()
    except (OSError, UnicodeDecodeError, ValueError) as error:
        outcome.status = EXIT_USAGE
        outcome.messages.append(f"cannot read '{path}': {error}")
        return outcome
    unit, diagnostics = parse_with_diagnostics(source, path)
    if unit is None or has_errors(diagnostics):
        outcome.status = EXIT_USAGE
        outcome.diagnostics = diagnostics
        outcome.messages.append(f"'{path}' does not parse; not formatting it")
        return outcome
    canonical = format_unit(unit)
    if canonical == source:
        return outcome
    if check_only:
        outcome.status = EXIT_DIAGNOSTICS
        outcome.messages.append(f"'{path}' is not canonical (first difference on line "
                                f"{first_difference(source, canonical)})")
        return outcome
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(canonical)
    except OSError as error:
        outcome.status = EXIT_USAGE
        outcome.messages.append(f"cannot write '{path}': {error}")
        return outcome
    logger.debug("reformatted %s", path)
    return outcome


def cmd_fmt(args, out: TextIO, err: TextIO) -> int:
    status = EXIT_OK
    for path in args.files:
        outcome = format_file(path, args.check)
        _emit(outcome, args, out, err)
        status = max(status, outcome.status)
    return status


def cmd_export(args, out: TextIO, err: TextIO) -> int:
    outcome = _Outcome()
    try:
        model = _load_model(args.root)
        if args.format == "json":
            outcome.output.append(export_json(model))
        else:
            outcome.output.append(export_dot(model, args.level))
    except _UsageError as error:
        outcome.status = EXIT_USAGE
        outcome.messages.append(str(error))
    except DiagnosticError as error:
        outcome.status = EXIT_DIAGNOSTICS
        outcome.diagnostics = error.diagnostics
    _emit(outcome, args, out, err)
    return outcome.status


def _boundary_lines(model: ResolvedModel, target: str) -> List[str]:
    system = element_path_resolve(model, target)
    if not isinstance(system, SystemDecl):
        span = model.root.span if model.root.span is not None else SourceSpan.at(model.root.source_path)
        raise DiagnosticError([Diagnostic.from_code("E-QRY-001", f"'{target}' does not name a system", span)])
    boundary, internal = classify_boundary(system)
    return [f"boundary: {', '.join(c for c in system.composition if c in boundary)}\n",
            f"internal: {', '.join(c for c in system.composition if c in internal)}\n"]


def _eval_lines(model: ResolvedModel, values_file: Optional[str]) -> List[str]:
    valuation = Valuation()
    if values_file is not None:
        try:
            valuation.load_values_from_file(values_file)
        except (OSError, ValueError) as error:
            raise _UsageError(f"cannot use valuation file '{values_file}': {error}")
    results = evaluate_aggregates(model, valuation)
    return [f"{path}={format_decimal(value)}\n" for path, value in results.items()]


def cmd_query(args, out: TextIO, err: TextIO) -> int:
    outcome = _Outcome()
    try:
        if args.kind == "eval" and args.target is not None:
            raise _UsageError("query eval takes no target")
        if args.kind != "eval" and args.target is None:
            raise _UsageError(f"query {args.kind} needs a target system path")
        model = _load_model(args.root)
        diagnostics = validate(model)
        if has_errors(diagnostics):
            outcome.status = EXIT_DIAGNOSTICS
            outcome.diagnostics = diagnostics
        elif args.kind == "boundary":
            outcome.output.extend(_boundary_lines(model, args.target))
        elif args.kind == "drill":
            outcome.output.extend(f"{name}\n" for name in drill_down(model, args.target).system_names)
        else:
            outcome.output.extend(_eval_lines(model, args.values))
    except _UsageError as error:
        outcome.status = EXIT_USAGE
        outcome.messages.append(str(error))
    except DiagnosticError as error:
        outcome.status = EXIT_DIAGNOSTICS
        outcome.diagnostics = error.diagnostics
    _emit(outcome, args, out, err)
    return outcome.status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description="Check, format, export and query SCDL system "
                                                            "composition models.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress at DEBUG level to stderr")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    check = commands.add_parser("check", help="parse, resolve and validate models")
    check.add_argument("roots", nargs="+", metavar="ROOT", help="root .scd file(s)")
    check.add_argument("--json-diagnostics", action="store_true", help="one JSON object per diagnostic")
    check.add_argument("--deny-warnings", action="store_true", help="warnings also give exit status 1")
    check.set_defaults(handler=cmd_check)

    fmt = commands.add_parser("fmt", help="rewrite files in canonical form")
    fmt.add_argument("files", nargs="+", metavar="FILE")
    fmt.add_argument("--check", action="store_true", help="write nothing; exit 1 if a file is not canonical")
    fmt.set_defaults(handler=cmd_fmt)

    export = commands.add_parser("export", help="print a JSON or DOT rendering of a model")
    export.add_argument("root", metavar="ROOT")
    export.add_argument("--format", required=True, choices=("json", "dot"))
    export.add_argument("--level", default=None, metavar="PATH", help="exploded system whose level is drawn (dot)")
    export.set_defaults(handler=cmd_export)

    query = commands.add_parser("query", help="boundary, drill-down and property evaluation queries")
    query.add_argument("root", metavar="ROOT")
    query.add_argument("kind", choices=("boundary", "drill", "eval"))
    query.add_argument("target", nargs="?", default=None, metavar="TARGET")
    query.add_argument("--values", default=None, metavar="FILE", help="valuation file for eval")
    query.set_defaults(handler=cmd_query)
    return parser


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    """Runs one scd invocation and returns its exit status."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return exit_request.code if isinstance(exit_request.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.handler(args, out, err)

# analysis.py - coupling graphs and derived property values
#
# Copyright (c) 2026, scdpyler developers. All rights reserved.

import decimal
import logging
from typing import Dict, List, Optional, Set, Tuple
from warnings import warn

import networkx as nx

from .derivation import ArithOp, DerivationExpr, Fold, FoldOp, Literal
from .diagnostic import Diagnostic, DiagnosticError
from .properties import PropertyDecl, ValueType
from .resolver import ResolvedModel
from .source_span import SourceSpan
from .system import SystemDecl
from .utils import qualify
from .valuation import Valuation

logger = logging.getLogger(__name__)

#: arithmetic context for evaluation; well beyond 15 significant digits
EVALUATION_CONTEXT = decimal.Context(prec=34)

# sums of values already inside EVALUATION_CONTEXT's range are exact here
_EXACT_CONTEXT = decimal.Context(prec=decimal.MAX_PREC, Emax=decimal.MAX_EMAX, Emin=decimal.MIN_EMIN)


def coupling_graph(system: SystemDecl) -> nx.MultiGraph:
    """The undirected coupling graph of a system.

    Nodes are the components and environment parties (node attribute
    "scope"); every coupling becomes one edge carrying "energy" (an
    EnergyKind or None) and "label".
    """
    graph = nx.MultiGraph(name=system.name)
    for component in system.composition:
        graph.add_node(component, scope="component")
    for party in system.environment:
        graph.add_node(party, scope="environment")
    for coupling in system.structure:
        graph.add_edge(coupling.end_a.party, coupling.end_b.party, energy=coupling.energy, label=coupling.label)
    return graph


def component_graph(system: SystemDecl) -> nx.Graph:
    """Components only, one edge per coupled pair; the graph the BWW criterion is decided on."""
    graph = nx.Graph()
    graph.add_nodes_from(system.composition)
    for coupling in system.internal_couplings():
        graph.add_edge(coupling.end_a.party, coupling.end_b.party)
    return graph


def format_decimal(value: decimal.Decimal) -> str:
    """Plain (never scientific) text of a value without trailing zeros."""
    if value == 0:
        return "0"
    return format(value.normalize(EVALUATION_CONTEXT), "f")


class _EvaluationFailed(Exception):
    """A value could not be computed; the diagnostic (if any) has already been recorded."""


class _Evaluator(object):
    def __init__(self, model: ResolvedModel, valuation: Valuation):
        self.model = model
        self.valuation = valuation
        self.values: Dict[str, decimal.Decimal] = {}
        self.failed: Set[str] = set()
        self.stack: List[str] = []
        self.diagnostics: List[Diagnostic] = []

    def fail(self, code: str, message: str, span: Optional[SourceSpan]):
        self.diagnostics.append(Diagnostic.from_code(code, message, span or SourceSpan.at(self.model.root.source_path)))
        raise _EvaluationFailed()

    def property_value(self, system_path: str, prop: PropertyDecl) -> decimal.Decimal:
        path = qualify(system_path, prop.name)
        if path in self.values:
            return self.values[path]
        if path in self.failed:
            raise _EvaluationFailed()
        if path in self.stack:
            cycle = self.stack[self.stack.index(path):] + [path]
            self.fail("E-EVL-004", f"derivation cycle: {' -> '.join(cycle)}", prop.span)
        self.stack.append(path)
        try:
            if prop.derivation is not None:
                value = self.expression(system_path, prop.derivation)
            elif path in self.valuation:
                value = self.valuation[path]
            else:
                self.fail("E-EVL-001", f"no value for '{path}' in the valuation", prop.span)
        except _EvaluationFailed:
            self.failed.add(path)
            raise
        finally:
            self.stack.pop()
        self.values[path] = value
        return value

    def fold_inputs(self, system_path: str, fold: Fold) -> List[Tuple[str, PropertyDecl]]:
        """(component path, property) for the components a fold ranges over, in composition order."""
        system = self.model.system_at(system_path)
        child = self.model.child_unit(system_path)
        if system is None or child is None:
            return []
        targets = system.composition if fold.path.over_all_components else (fold.path.target,)
        inputs = []
        for name in targets:
            component = child.get_system(name) if name in system.composition else None
            prop = component.get_property(fold.path.prop) if component is not None else None
            if prop is not None:
                inputs.append((qualify(system_path, name), prop))
        return inputs

    def checked(self, where: str, span: Optional[SourceSpan], operation, *operands) -> decimal.Decimal:
        """Runs one EVALUATION_CONTEXT operation, reporting E-EVL-005 when the result leaves its range."""
        try:
            return operation(*operands)
        except (decimal.Overflow, decimal.InvalidOperation) as error:
            self.fail("E-EVL-005", f"{where} is out of the evaluation range ({type(error).__name__})", span)

    def input_values(self, inputs: List[Tuple[str, PropertyDecl]]) -> List[decimal.Decimal]:
        """Values of all inputs rounded to EVALUATION_CONTEXT; every failing one is reported before failing."""
        values, failed = [], False
        for path, prop in inputs:
            try:
                value = self.property_value(path, prop)
                values.append(self.checked(f"the value of '{qualify(path, prop.name)}'", prop.span,
                                           EVALUATION_CONTEXT.plus, value))
            except _EvaluationFailed:
                failed = True
        if failed:
            raise _EvaluationFailed()
        return values

    def exact_sum(self, system_path: str, fold: Fold, values: List[decimal.Decimal]) -> decimal.Decimal:
        total = decimal.Decimal(0)
        for value in values:
            total = _EXACT_CONTEXT.add(total, value)
        return self.checked(f"{fold.op}({fold.path}) in '{system_path}'", fold.span, EVALUATION_CONTEXT.plus, total)

    def fold(self, system_path: str, fold: Fold) -> decimal.Decimal:
        inputs = self.fold_inputs(system_path, fold)
        if fold.op is FoldOp.COUNT:
            flags = [(path, prop) for path, prop in inputs if prop.value_type is ValueType.FLAG]
            count = len(inputs) - len(flags)
            count += sum(1 for value in self.input_values(flags) if value != 0)
            return decimal.Decimal(count)
        values = self.input_values(inputs)
        if fold.op is FoldOp.SUM:
            return self.exact_sum(system_path, fold, values)
        if not values:
            self.fail("E-EVL-003", f"{fold.op}({fold.path}) in '{system_path}' ranges over no components",
                      fold.span)
        if fold.op is FoldOp.MIN:
            return min(values)
        if fold.op is FoldOp.MAX:
            return max(values)
        return self.checked(f"{fold.op}({fold.path}) in '{system_path}'", fold.span, EVALUATION_CONTEXT.divide,
                            self.exact_sum(system_path, fold, values), decimal.Decimal(len(values)))

    def expression(self, system_path: str, expr: DerivationExpr) -> decimal.Decimal:
        where = f"a derivation of '{system_path}'"
        if isinstance(expr, Literal):
            return self.checked(where, expr.span, EVALUATION_CONTEXT.plus, expr.value)
        if isinstance(expr, Fold):
            return self.fold(system_path, expr)
        left = self.expression(system_path, expr.left)
        right = self.expression(system_path, expr.right)
        if expr.op is ArithOp.ADD:
            return self.checked(where, expr.span, EVALUATION_CONTEXT.add, left, right)
        if expr.op is ArithOp.SUB:
            return self.checked(where, expr.span, EVALUATION_CONTEXT.subtract, left, right)
        if expr.op is ArithOp.MUL:
            return self.checked(where, expr.span, EVALUATION_CONTEXT.multiply, left, right)
        if right == 0:
            self.fail("E-EVL-002", f"division by zero in {where}", expr.span)
        return self.checked(where, expr.span, EVALUATION_CONTEXT.divide, left, right)


def check_valuation_keys(model: ResolvedModel, valuation: Valuation):
    """Warns about valuation entries that no evaluation will read."""
    for key in valuation:
        found = model.symbol_table.get(key)
        if not isinstance(found, PropertyDecl):
            warn(f"valuation entry {key} matches no declared property and is ignored.")
        elif found.derivation is not None:
            warn(f"valuation entry {key} names a derived property; the derivation is used instead.")


def evaluate_aggregates(model: ResolvedModel, valuation: Optional[Valuation] = None) -> Dict[str, decimal.Decimal]:
    """Evaluates every derived property of the model, bottom-up through the levels.

    :param model: a resolved model, ideally free of validator errors
    :param valuation: values of the non-derived properties the derivations read
    :return: fully qualified property path -> value, for every property with a derivation
    :raises DiagnosticError: with E-EVL-001..004 diagnostics
    """
    valuation = valuation if valuation is not None else Valuation()
    check_valuation_keys(model, valuation)
    evaluator = _Evaluator(model, valuation)
    results = {}
    for system_path, system, _ in model.iter_systems():
        for prop in system.properties:
            if prop.derivation is None:
                continue
            try:
                results[qualify(system_path, prop.name)] = evaluator.property_value(system_path, prop)
            except _EvaluationFailed:
                pass
    if evaluator.diagnostics:
        raise DiagnosticError(evaluator.diagnostics)
    logger.debug("evaluated %d derived properties", len(results))
    return dict(sorted(results.items()))

#  Copyright (c) 2026, scdpyler developers. All rights reserved.

import decimal
import os
import warnings
from unittest import TestCase

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from scdpyler import (DEFAULT_CORPUS_DIR, DiagnosticError, FileUnitLoader, MemoryUnitLoader, Valuation,
                      EnergyKind, check_valuation_keys, component_graph, corpus_entry, coupling_graph,
                      evaluate_aggregates, format_decimal, load_corpus_model, parse, resolve)

D = decimal.Decimal

NESTED = {
    "root.scd": """
        scd r {
          concrete system H {
            composition { a, b }
            properties {
              aggregate total: number = sum(components.w);
              emergent spread: number = max(components.w) - min(components.w);
              emergent mean: number = avg(components.w);
              aggregate parts: number = count(components.w);
            }
            explode "level.scd";
          }
        }
    """,
    "level.scd": """
        scd l {
          concrete system a {
            composition { x, y }
            properties { aggregate w: number = sum(components.w); }
            explode "a.scd";
          }
          concrete system b {
            composition { z, u }
            properties { aggregate w: number = sum(components.w); }
            explode "b.scd";
          }
        }
    """,
    "a.scd": "scd a { concrete system x { properties { intrinsic w: number; } } "
             "concrete system y { properties { intrinsic w: number; } } }",
    "b.scd": "scd b { concrete system z { properties { intrinsic w: number; } } "
             "concrete system u { properties { intrinsic w: number; } } }",
}

LEAVES = {"H.a.x.w": 1, "H.a.y.w": 2, "H.b.z.w": 3, "H.b.u.w": 4}


def single_level(text, values=None):
    model = resolve("root.scd", MemoryUnitLoader({"root.scd": text}))
    return evaluate_aggregates(model, Valuation(values))


def two_level(properties, values, composition, level_order=None):
    """S composed of leaf systems that each carry an intrinsic w, evaluated with the given leaf values."""
    root = (f"scd r {{ concrete system S {{ composition {{ {', '.join(composition)} }} "
            f"properties {{ {properties} }} explode \"level.scd\"; }} }}")
    level = "scd l { " + " ".join(f"concrete system {n} {{ properties {{ intrinsic w: number; }} }}"
                                  for n in (level_order or composition)) + " }"
    model = resolve("root.scd", MemoryUnitLoader({"root.scd": root, "level.scd": level}))
    return evaluate_aggregates(model, Valuation(values))


class TestGraphs(TestCase):

    def test_coupling_graph(self):
        cell = parse(FileUnitLoader(DEFAULT_CORPUS_DIR).load("cell/root.scd")).systems[0]
        graph = coupling_graph(cell)
        self.assertEqual(sorted(graph.nodes), ["Blood", "cytoplasm", "membrane"])
        self.assertEqual(graph.nodes["Blood"]["scope"], "environment")
        self.assertEqual(graph.number_of_edges(), 2)
        self.assertEqual({data["energy"] for _, _, data in graph.edges(data=True)}, {EnergyKind.CHEMICAL})
        components = component_graph(cell)
        self.assertEqual(sorted(components.nodes), ["cytoplasm", "membrane"])
        self.assertEqual(components.number_of_edges(), 1)

    def test_format_decimal(self):
        self.assertEqual(format_decimal(D("10.50")), "10.5")
        self.assertEqual(format_decimal(D("1E+2")), "100")
        self.assertEqual(format_decimal(D("0.000")), "0")
        self.assertEqual(format_decimal(D("-2.25")), "-2.25")


class TestEvaluate(TestCase):

    def test_nested_fold(self):
        model = resolve("root.scd", MemoryUnitLoader(NESTED))
        results = evaluate_aggregates(model, Valuation(LEAVES))
        self.assertEqual(results, {"H.a.w": D(3), "H.b.w": D(7), "H.mean": D(5), "H.parts": D(2),
                                   "H.spread": D(4), "H.total": D(10)})
        self.assertEqual(list(results), sorted(results))

    def test_healthcare(self):
        entry = corpus_entry("healthcare")
        model = load_corpus_model(entry)
        values = Valuation(value_file=os.path.join(os.path.dirname(entry.root), "values.txt"))
        results = evaluate_aggregates(model, values)
        self.assertEqual(results["Person.variantCount"], D(3))
        self.assertEqual(results["Person.PersonAsGenome.Variants.variantCount"], D(3))

        values["Person.PersonAsGenome.Variants.rs7412.isVariant"] = False
        self.assertEqual(evaluate_aggregates(model, values)["Person.variantCount"], D(2))

        with self.assertRaises(DiagnosticError) as info:
            evaluate_aggregates(model)
        self.assertEqual(info.exception.codes, ["E-EVL-001"] * 3)

    def test_body_location(self):
        entry = corpus_entry("body-location")
        model = load_corpus_model(entry)
        values = Valuation(value_file=os.path.join(os.path.dirname(entry.root), "values.txt"))
        self.assertEqual({k: format_decimal(v) for k, v in evaluate_aggregates(model, values).items()},
                         {"Heart.Myocardium.weight": "5", "Heart.totalWeight": "10"})

    def test_missing_value(self):
        model = resolve("root.scd", MemoryUnitLoader(NESTED))
        partial = dict(LEAVES)
        del partial["H.b.u.w"]
        with self.assertRaises(DiagnosticError) as info:
            evaluate_aggregates(model, Valuation(partial))
        self.assertEqual(info.exception.codes, ["E-EVL-001"])
        self.assertIn("'H.b.u.w'", info.exception.diagnostics[0].message)

    def test_division_by_zero(self):
        with self.assertRaises(DiagnosticError) as info:
            single_level("scd r { concrete system A { properties { emergent r: number = 1 / (2 - 2); } } }")
        self.assertEqual(info.exception.codes, ["E-EVL-002"])

    def test_empty_fold(self):
        results = single_level("scd r { concrete system A { properties { aggregate s: number = sum(components.w); "
                               "aggregate c: number = count(components.w); } } }")
        self.assertEqual(results, {"A.c": D(0), "A.s": D(0)})
        with self.assertRaises(DiagnosticError) as info:
            single_level("scd r { concrete system A { properties { emergent m: number = 1 + avg(components.w); } } }")
        self.assertEqual(info.exception.codes, ["E-EVL-003"])

    def test_exact_arithmetic(self):
        results = single_level("scd r { concrete system A { properties { emergent a: number = 0.1 + 0.2; "
                               "emergent b: number = 10 / 4 * 2; emergent c: number = 1 / 3; } } }")
        self.assertEqual(results["A.a"], D("0.3"))
        self.assertEqual(format_decimal(results["A.b"]), "5")
        self.assertEqual(str(results["A.c"]), "0." + "3" * 34)

    def test_out_of_range_arithmetic(self):
        with self.assertRaises(DiagnosticError) as info:
            two_level("emergent p: number = max(components.w) * 2;", {"S.a.w": "9E999999", "S.b.w": 1}, ["a", "b"])
        self.assertEqual(info.exception.codes, ["E-EVL-005"])
        self.assertIn("'S'", info.exception.diagnostics[0].message)

        with self.assertRaises(DiagnosticError) as info:
            two_level("aggregate t: number = sum(components.w);", {"S.a.w": "9E999999", "S.b.w": "9E999999"},
                      ["a", "b"])
        self.assertEqual(info.exception.codes, ["E-EVL-005"])

        with self.assertRaises(DiagnosticError) as info:
            two_level("emergent hi: number = max(components.w);", {"S.a.w": "1E1000000", "S.b.w": "1E1000000"},
                      ["a", "b"])
        self.assertEqual(info.exception.codes, ["E-EVL-005", "E-EVL-005"])
        self.assertIn("'S.a.w'", " ".join(d.message for d in info.exception.diagnostics))

        results = two_level("emergent hi: number = max(components.w);", {"S.a.w": "9E999999", "S.b.w": 1},
                            ["a", "b"])
        self.assertEqual(results["S.hi"], D("9E999999"))

    def test_cancelling_sum(self):
        values = {"S.a.w": 10 ** 28, "S.b.w": 1, "S.c.w": -10 ** 28}
        properties = "aggregate t: number = sum(components.w); emergent mean: number = avg(components.w);"
        for order in (["a", "b", "c"], ["a", "c", "b"], ["b", "c", "a"]):
            results = two_level(properties, values, order)
            self.assertEqual(format_decimal(results["S.t"]), "1")
            self.assertEqual(results["S.mean"], decimal.Context(prec=34).divide(D(1), D(3)))

    def test_valuation_key_warnings(self):
        model = resolve("root.scd", MemoryUnitLoader(NESTED))
        with pytest.warns(UserWarning, match="matches no declared property"):
            check_valuation_keys(model, Valuation({"H.nothing": 1}))
        with pytest.warns(UserWarning, match="names a derived property"):
            check_valuation_keys(model, Valuation({"H.total": 1}))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            check_valuation_keys(model, Valuation(LEAVES))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.one_of(st.integers(0, 1000), st.integers(-10 ** 30, 10 ** 30),
                          st.sampled_from([10 ** 28, -10 ** 28, 1, -1])), min_size=1, max_size=8), st.data())
def test_fold_is_order_independent(weights, data):
    names = [f"c{i}" for i in range(len(weights))]
    values = {f"S.{name}.w": w for name, w in zip(names, weights)}
    properties = ("aggregate t: number = sum(components.w); emergent lo: number = min(components.w); "
                  "emergent hi: number = max(components.w); emergent mean: number = avg(components.w);")

    expected = two_level(properties, values, names)
    shuffled = two_level(properties, values, data.draw(st.permutations(names)), data.draw(st.permutations(names)))
    assert shuffled == expected
    assert expected["S.t"] == sum(weights)
    assert expected["S.lo"] == min(weights)
    assert expected["S.hi"] == max(weights)
    assert expected["S.mean"] == decimal.Context(prec=34).divide(D(sum(weights)), D(len(weights)))

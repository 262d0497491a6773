#  Copyright (c) 2026, scdpyler developers. All rights reserved.

import json
import re
from unittest import TestCase

import hypothesis.strategies as st
from hypothesis import given, settings

from scdpyler import (SCD_JSON_VERSION, DiagnosticError, MemoryUnitLoader, corpus_entry, dot_quote, export_dot,
                      export_json, load_corpus_model, model_to_json, resolve)

DOT_LINE = re.compile(r'^(graph "[^"]*" \{'
                      r'|  node \[shape=box\];'
                      r'|  "[A-Za-z0-9_.]+" \[label="«system» [A-Za-z0-9_]+"(, peripheries=2)?(, tooltip="[^"]*")?\];'
                      r'|  "[A-Za-z0-9_.]+" -- "[A-Za-z0-9_.]+" \[label="\d+ mappings?"\];'
                      r'|\})$')


def corpus(name):
    return load_corpus_model(corpus_entry(name))


def memory_model(text):
    return resolve("root.scd", MemoryUnitLoader({"root.scd": text}))


def node_lines(dot):
    return [line for line in dot.splitlines() if "[label=\"«system»" in line]


def edge_lines(dot):
    return [line for line in dot.splitlines() if " -- " in line]


class TestJSON(TestCase):

    def test_healthcare(self):
        model = corpus("healthcare")
        text = export_json(model)
        self.assertTrue(text.endswith("}\n"))
        document = json.loads(text)
        self.assertEqual(document["scdVersion"], SCD_JSON_VERSION)
        self.assertEqual([level["levelPath"] for level in document["levels"]],
                         ["", "Person", "Person.PersonAsGenome", "Person.PersonAsGenome.Variants"])
        person = document["root"]["systems"][0]
        self.assertEqual(person["path"], "Person")
        self.assertEqual(person["kind"], "concrete")
        self.assertEqual(person["mechanisms"], ["Care"])
        self.assertEqual(person["properties"][0]["derivation"], "sum(PersonAsGenome.variantCount)")
        level = person["explode"]["unit"]
        self.assertEqual(person["explode"]["path"], "person.scd")
        self.assertEqual(len(document["root"]["systems"]) + len(level["systems"]), 3)
        self.assertEqual([s["path"] for s in level["systems"]], ["Person.PersonAsEHR", "Person.PersonAsGenome"])
        mapping = level["associations"][0]["mappings"][0]
        self.assertEqual(mapping["kind"], "association")
        self.assertEqual((mapping["cardA"], mapping["cardB"]), ("0..*", "0..*"))
        self.assertEqual(level["associations"][0]["stereotype"], "system")
        self.assertEqual(person["structure"][0]["label"], "same patient")
        self.assertEqual(person["structure"][0]["energy"], None)
        self.assertEqual(person["span"]["startLine"], 4)

    def test_deterministic(self):
        first, second = corpus("coronavirus"), corpus("coronavirus")
        self.assertEqual(export_json(first), export_json(second))
        self.assertEqual(export_json(first), export_json(first))
        self.assertEqual(model_to_json(first), json.loads(export_json(first)))

    def test_coronavirus_counterparts(self):
        document = json.loads(export_json(corpus("coronavirus")))
        association = document["root"]["associations"][0]
        self.assertEqual([m["kind"] for m in association["mappings"]], ["counterpart"] * 6)
        self.assertEqual(association["mappings"][0]["cardA"], None)
        pad = document["root"]["systems"][0]["dimensions"][0]
        self.assertEqual(pad["kind"], "mechanism")
        self.assertEqual(len(pad["actors"]), 6)
        self.assertEqual(pad["steps"][0], {"name": "Attach", "performedBy": ["SpikeProtein", "ACE2"],
                                           "span": pad["steps"][0]["span"]})


class TestDOT(TestCase):

    def check_grammar(self, dot):
        self.assertTrue(dot.endswith("}\n"))
        for line in dot.splitlines():
            self.assertRegex(line, DOT_LINE)

    def test_healthcare_person_level(self):
        dot = export_dot(corpus("healthcare"), "Person")
        self.check_grammar(dot)
        self.assertEqual(len(node_lines(dot)), 2)
        self.assertEqual(edge_lines(dot), ['  "Person.PersonAsEHR" -- "Person.PersonAsGenome" [label="1 mapping"];'])
        self.assertIn('"Person.PersonAsGenome" [label="«system» PersonAsGenome", peripheries=2, '
                      'tooltip="structural:GenomeSchema"];', dot)

    def test_root_level(self):
        dot = export_dot(corpus("coronavirus"))
        self.check_grammar(dot)
        self.assertTrue(dot.startswith('graph "Coronavirus" {\n  node [shape=box];\n'))
        self.assertEqual(len(node_lines(dot)), 2)
        self.assertEqual(len(edge_lines(dot)), 1)
        self.assertIn('[label="6 mappings"]', dot)
        self.assertEqual(export_dot(corpus("coronavirus"), ""), dot)

    def test_empty_unit(self):
        self.assertEqual(export_dot(memory_model("scd x { }")), 'graph "x" {\n  node [shape=box];\n}\n')

    def test_unknown_level(self):
        model = corpus("healthcare")
        for level in ["Nobody", "Person.PersonAsEHR"]:
            with self.assertRaises(DiagnosticError) as info:
                export_dot(model, level)
            self.assertEqual(info.exception.codes, ["E-QRY-001"])

    def test_quote(self):
        self.assertEqual(dot_quote('a "b" \\c'), '"a \\"b\\" \\\\c"')


@st.composite
def association_units(draw):
    names = [f"S{i}" for i in range(draw(st.integers(0, 6)))]
    systems = " ".join(f"conceptual system {n} {{ }}" for n in names)
    associations = []
    if len(names) >= 2:
        for _ in range(draw(st.integers(0, 4))):
            a, b = draw(st.lists(st.sampled_from(names), min_size=2, max_size=2, unique=True))
            mappings = " ".join(f"{a}.F.E{i} <-> {b}.F.E{i};" for i in range(draw(st.integers(0, 3))))
            associations.append(f"association <<system>> {a} -- {b} {{ {mappings} }}")
    return f"scd u {{ {systems} {' '.join(associations)} }}", len(names), len(associations)


@settings(max_examples=200, deadline=None)
@given(association_units())
def test_dot_conserves_nodes_and_edges(case):
    text, systems, associations = case
    dot = export_dot(memory_model(text))
    assert len(node_lines(dot)) == systems
    assert len(edge_lines(dot)) == associations
    assert all(DOT_LINE.match(line) for line in dot.splitlines())
    document = json.loads(export_json(memory_model(text)))
    assert len(document["root"]["systems"]) == systems
    assert len(document["root"]["associations"]) == associations

#  Copyright (c) 2026, scdpyler developers. All rights reserved.

from unittest import TestCase

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from scdpyler import (DEFAULT_CORPUS_DIR, Coupling, CouplingEnd, FileUnitLoader, MemoryUnitLoader, SystemDecl,
                      SystemKind, brute_force_bipartition_check, check_association_completeness, check_bww_system,
                      check_cesm_completeness, check_kind_rules, check_mapping_completeness, check_property_rules,
                      classify_boundary, corpus_codes, corpus_entry, corpus_manifest, load_corpus_model, parse,
                      resolve, validate)


def system(text):
    return parse(f"scd t {{ {text} }}").systems[0]


def codes(diagnostics):
    return [d.code for d in diagnostics]


class TestBWW(TestCase):

    def test_connected(self):
        cell = system("concrete system Cell { composition { a, b, c } structure { a -- b; b -- c; } }")
        self.assertIsNone(check_bww_system(cell))
        self.assertTrue(brute_force_bipartition_check(cell))

    def test_disconnected(self):
        cell = system("concrete system Cell { composition { a, b, c } structure { a -- b; } }")
        diagnostic = check_bww_system(cell)
        self.assertEqual(diagnostic.code, "E-BWW-001")
        self.assertIn("{c} is not coupled", diagnostic.message)
        self.assertFalse(brute_force_bipartition_check(cell))

    def test_environment_couplings_do_not_connect(self):
        cell = system("concrete system Cell { composition { a, b } environment { E } "
                      "structure { a -- env.E; b -- env.E; } }")
        self.assertEqual(check_bww_system(cell).code, "E-BWW-001")

    def test_small_compositions(self):
        self.assertIsNone(check_bww_system(system("concrete system A { }")))
        self.assertIsNone(check_bww_system(system("concrete system A { composition { x } }")))

    def test_brute_force_limit(self):
        names = ", ".join(f"c{i}" for i in range(17))
        with self.assertRaisesRegex(ValueError, "at most 16"):
            brute_force_bipartition_check(system(f"concrete system A {{ composition {{ {names} }} }}"))


@st.composite
def random_systems(draw, min_size=2, max_size=12, environment=()):
    n = draw(st.integers(min_size, max_size))
    names = [f"c{i}" for i in range(n)]
    pairs = st.lists(st.sampled_from(names), min_size=2, max_size=2, unique=True)
    couplings = [Coupling(CouplingEnd.component(a), CouplingEnd.component(b))
                 for a, b in draw(st.lists(pairs, max_size=2 * n))]
    for party in environment:
        for name in draw(st.lists(st.sampled_from(names), unique=True)):
            couplings.append(Coupling(CouplingEnd.component(name), CouplingEnd.environment(party)))
    return SystemDecl("S", SystemKind.CONCRETE, tuple(names), tuple(environment), tuple(couplings))


@settings(max_examples=1000, deadline=None)
@given(random_systems())
def test_bww_matches_bipartition_oracle(sys_decl):
    assert (check_bww_system(sys_decl) is None) == brute_force_bipartition_check(sys_decl)


@settings(max_examples=1000, deadline=None)
@given(random_systems(environment=("E", "F")))
def test_boundary_partition(sys_decl):
    boundary, internal = classify_boundary(sys_decl)
    assert boundary | internal == set(sys_decl.composition)
    assert boundary & internal == set()
    coupled = {c.component_end.party for c in sys_decl.structure if not c.is_internal}
    assert boundary == coupled


class TestRules(TestCase):

    def test_boundary_of_cell(self):
        cell = system("concrete system Cell { composition { membrane, cytoplasm } environment { Blood } "
                      "structure { membrane -- cytoplasm [chemical]; membrane -- env.Blood [chemical]; } }")
        self.assertEqual(classify_boundary(cell), ({"membrane"}, {"cytoplasm"}))

    def test_kind_rules(self):
        text = "system C { composition { a, b } structure { a -- b [chemical]; a -- b; } }"
        self.assertEqual(codes(check_kind_rules(system("conceptual " + text))), ["E-KND-001"])
        self.assertEqual(check_kind_rules(system("concrete " + text)), [])

    def test_cesm_completeness(self):
        self.assertEqual(codes(check_cesm_completeness(system("concrete system A { composition { a, b } }"))),
                         ["W-CSM-001", "W-CSM-002"])
        self.assertEqual(codes(check_cesm_completeness(system("concrete system A { }"))),
                         ["W-CSM-002", "W-ATOM-001"])
        self.assertEqual(codes(check_cesm_completeness(system("conceptual system A { composition { a, b } }"))),
                         [])
        mechanized = system("concrete system A { composition { a } mechanism M; dimension mechanism M { } }")
        self.assertEqual(check_cesm_completeness(mechanized), [])

    def test_property_rules(self):
        parent = system("""
            concrete system H {
              composition { a, b }
              properties {
                aggregate w: number = sum(components.w);
                aggregate bad: number;
                emergent e: number = max(components.w);
                aggregate f: number = sum(components.alive);
                aggregate n: number = count(components.alive);
                aggregate m: number = avg(components.missing);
                emergent ratio: number = sum(a.w) / 2;
              }
            }
        """)
        child = parse("""
            scd c {
              concrete system a { properties { intrinsic w: number; intrinsic alive: flag; } }
              concrete system b { properties { intrinsic w: number; } }
            }
        """)
        self.assertEqual(codes(check_property_rules(parent, child)),
                         ["E-PRP-001", "W-PRP-003", "E-PRP-007", "E-PRP-002"])
        without_child = codes(check_property_rules(parent))
        self.assertEqual(without_child.count("E-PRP-002"), 6)

    def test_text_fold(self):
        parent = system("concrete system H { composition { a } properties { aggregate n: number = "
                        "count(components.label); aggregate s: number = sum(components.label); } }")
        child = parse("scd c { concrete system a { properties { intrinsic label: text; } } }")
        self.assertEqual(codes(check_property_rules(parent, child)), ["E-PRP-007", "E-PRP-007"])


MAPPED = """
scd t {
  concrete system M {
    composition { a }
    mechanism P;
    dimension mechanism P {
      actor X;
      actor Y;
      step S by X;
    }
  }
  conceptual system V {
    composition { b }
    dimension structural D {
      entity E {}
      entity F {}
    }
  }
  association <<system>> M -- V {
    counterpart M.P.X <-> V.D.E;
    M.P.Y <-> V.D.Nope;
  }
}
"""


class TestMappings(TestCase):

    def model(self, text):
        return resolve("t.scd", MemoryUnitLoader({"t.scd": text}))

    def test_mapping_completeness(self):
        model = self.model(MAPPED)
        association = model.root.associations[0]
        found = check_mapping_completeness(association, model)
        self.assertEqual(sorted(codes(found)), ["E-MAP-001", "E-MAP-002", "W-MAP-010"])
        self.assertTrue(any("'Y'" in d.message for d in found if d.code == "E-MAP-001"))
        self.assertTrue(any("'F'" in d.message for d in found if d.code == "W-MAP-010"))

    def test_complete_mapping(self):
        text = MAPPED.replace("M.P.Y <-> V.D.Nope;", "counterpart M.P.Y <-> V.D.F;")
        model = self.model(text)
        self.assertEqual(check_mapping_completeness(model.root.associations[0], model), [])
        self.assertEqual(validate(model), [])

    def test_reversed_association(self):
        text = MAPPED.replace("M -- V", "V -- M").replace("counterpart M.P.X <-> V.D.E;",
                                                           "counterpart V.D.E <-> M.P.X;")
        text = text.replace("M.P.Y <-> V.D.Nope;", "counterpart V.D.F <-> M.P.Y;")
        model = self.model(text)
        self.assertEqual(check_mapping_completeness(model.root.associations[0], model), [])

    def test_association_completeness(self):
        text = MAPPED.replace("counterpart M.P.X <-> V.D.E;\n    M.P.Y <-> V.D.Nope;\n", "")
        association = parse(text).associations[0]
        self.assertEqual(codes(check_association_completeness(association)), ["W-CSM-003"])
        model = self.model(text)
        self.assertEqual(sorted(codes(validate(model))), ["E-MAP-001", "E-MAP-001", "W-CSM-003",
                                                          "W-MAP-010", "W-MAP-010"])

    def test_validate_is_sorted(self):
        diagnostics = validate(self.model(MAPPED))
        keys = [d.sort_key for d in diagnostics]
        self.assertEqual(keys, sorted(keys))


@pytest.mark.parametrize("name, expected", [
    ("healthcare", []),
    ("healthcare-extended", []),
    ("coronavirus", []),
    ("coronavirus-broken", ["E-MAP-001"]),
    ("body-location", []),
    ("cell", []),
])
def test_corpus_diagnostics(name, expected):
    assert corpus_codes(corpus_entry(name)) == expected


@pytest.mark.parametrize("name", [entry.name for entry in corpus_manifest()])
def test_validate_is_repeatable(name):
    model = load_corpus_model(corpus_entry(name))
    first, second = validate(model), validate(model)
    assert first == second
    assert [(d.sort_key, d.message) for d in first] == [(d.sort_key, d.message) for d in second]


def unmapped_count(text):
    model = resolve("root.scd", MemoryUnitLoader({"root.scd": text}))
    return codes(validate(model)).count("E-MAP-001")


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_removing_counterparts_never_lowers_unmapped_count(data):
    text = FileUnitLoader(DEFAULT_CORPUS_DIR).load("coronavirus/root.scd")
    mappings = [line for line in text.splitlines(keepends=True) if line.strip().startswith("counterpart ")]
    order = data.draw(st.permutations(mappings))
    removed = data.draw(st.integers(1, len(order)))
    previous = unmapped_count(text)
    assert previous == 0
    for line in order[:removed]:
        text = text.replace(line, "", 1)
        count = unmapped_count(text)
        assert count >= previous
        previous = count
    assert previous == removed

#  Copyright (c) 2026, scdpyler developers. All rights reserved.

import os
from unittest import TestCase

import pytest

from scdpyler import (DEFAULT_CORPUS_DIR, DiagnosticError, EntityDecl, FileUnitLoader, MemoryUnitLoader,
                      ModelUnit, PropertyDecl, ResolvedModel, SystemDecl, UnitLoadError, drill_down,
                      element_path_resolve, normalize_path, resolve, resolve_relative)

ROOT = """
scd r {
  concrete system A {
    composition { x, y }
    explode "a.scd";
  }
}
"""

LEVEL_A = """
scd a {
  concrete system x {}
  concrete system y {}
}
"""


def corpus_model(name):
    return resolve(os.path.join(DEFAULT_CORPUS_DIR, name, "root.scd"), FileUnitLoader())


def body_location_sources():
    loader = FileUnitLoader(os.path.join(DEFAULT_CORPUS_DIR, "body-location"))
    return {name: loader.load(name) for name in ("root.scd", "tissue.scd", "cell.scd")}


def resolve_codes(sources, root="root.scd"):
    with pytest.raises(DiagnosticError) as info:
        resolve(root, MemoryUnitLoader(sources))
    return info.value.codes


class TestPaths(TestCase):

    def test_normalize(self):
        self.assertEqual(normalize_path("a/./b.scd"), "a/b.scd")
        self.assertEqual(normalize_path("a\\b.scd"), "a/b.scd")
        with self.assertRaisesRegex(ValueError, "non-empty string"):
            normalize_path("")

    def test_relative(self):
        self.assertEqual(resolve_relative("root.scd", "a.scd"), "a.scd")
        self.assertEqual(resolve_relative("models/root.scd", "sub/a.scd"), "models/sub/a.scd")
        self.assertEqual(resolve_relative("models/x/root.scd", "../shared.scd"), "models/shared.scd")
        self.assertEqual(resolve_relative("models/root.scd", "/abs/a.scd"), "/abs/a.scd")

    def test_memory_loader(self):
        loader = MemoryUnitLoader({"a/./b.scd": "scd b {}"})
        self.assertIn("a/b.scd", loader)
        self.assertEqual(len(loader), 1)
        self.assertEqual(loader("a/b.scd"), "scd b {}")
        with self.assertRaisesRegex(UnitLoadError, "cannot load 'c.scd': no such level"):
            loader.load("c.scd")
        with self.assertRaises(TypeError):
            loader.add("d.scd", None)

    def test_file_loader(self):
        loader = FileUnitLoader(DEFAULT_CORPUS_DIR)
        self.assertTrue(loader.load("cell/root.scd").startswith("//"))
        with self.assertRaises(UnitLoadError) as info:
            loader.load("cell/missing.scd")
        self.assertEqual(info.exception.path, "cell/missing.scd")
        self.assertIsInstance(info.exception, OSError)


class TestResolve(TestCase):

    def test_two_levels(self):
        model = resolve("root.scd", MemoryUnitLoader({"root.scd": ROOT, "a.scd": LEVEL_A}))
        self.assertEqual(list(model.levels), ["", "A"])
        self.assertEqual(model.unit_order, ("root.scd", "a.scd"))
        self.assertEqual(model.depth(), 2)
        child = model.child_unit("A")
        self.assertEqual(child.name, "a")
        self.assertEqual(child.level_id, "A")
        self.assertEqual(child.source_path, "a.scd")
        self.assertEqual(model.prefix_of(child), "A")
        self.assertIsNone(model.child_unit(""))
        self.assertEqual(list(model.level_tree), ["A"])
        self.assertEqual([path for path, _, _ in model.iter_systems()], ["A", "A.x", "A.y"])
        self.assertIsInstance(model.system_at("A.x"), SystemDecl)
        self.assertIsNone(model.system_at("A.z"))
        with self.assertRaisesRegex(ValueError, "not part of this model"):
            model.prefix_of(ModelUnit("other"))

    def test_levels_must_hold_root(self):
        root = ModelUnit("r")
        with self.assertRaises(ValueError):
            ResolvedModel(root, {}, [])
        self.assertEqual(ResolvedModel(root, {"": root}, ["<memory>"]).depth(), 1)

    def test_corpus_depths(self):
        self.assertEqual(corpus_model("body-location").depth(), 3)
        self.assertEqual(corpus_model("healthcare").depth(), 4)
        self.assertEqual(corpus_model("cell").depth(), 1)
        model = corpus_model("healthcare")
        self.assertEqual(list(model.levels), ["", "Person", "Person.PersonAsGenome",
                                              "Person.PersonAsGenome.Variants"])
        self.assertEqual([os.path.basename(p) for p in model.unit_order],
                         ["root.scd", "person.scd", "genome.scd", "variants.scd"])

    def test_shared_level_across_directories(self):
        path = os.path.join(DEFAULT_CORPUS_DIR, "healthcare-extended", "root.scd")
        model = resolve(path, FileUnitLoader())
        genome = model.unit_for("Person.PersonAsGenome")
        self.assertEqual(genome.source_path, normalize_path(os.path.join(DEFAULT_CORPUS_DIR, "healthcare",
                                                                         "genome.scd")))

    def test_cycle(self):
        cyclic = LEVEL_A.replace("concrete system x {}", 'concrete system x { explode "root.scd"; }')
        codes = resolve_codes({"root.scd": ROOT, "a.scd": cyclic})
        self.assertEqual(codes, ["E-LVL-002"])

    def test_self_cycle(self):
        source = 'scd r { concrete system A { explode "root.scd"; } }'
        with self.assertRaises(DiagnosticError) as info:
            resolve("root.scd", MemoryUnitLoader({"root.scd": source}))
        self.assertEqual(info.exception.codes, ["E-LVL-002"])
        self.assertIn("root.scd -> root.scd", info.exception.diagnostics[0].message)

    def test_body_location_back_reference(self):
        sources = body_location_sources()
        self.assertEqual(len(resolve("root.scd", MemoryUnitLoader(sources)).unit_order), 3)
        sources["cell.scd"] = sources["cell.scd"].replace(
            "\n  }\n\n  concrete system Fibroblast", '\n    explode "root.scd";\n  }\n\n  concrete system Fibroblast')
        self.assertIn('explode "root.scd"', sources["cell.scd"])
        with self.assertRaises(DiagnosticError) as info:
            resolve("root.scd", MemoryUnitLoader(sources))
        self.assertEqual(info.exception.codes, ["E-LVL-002"])
        self.assertIn("root.scd -> tissue.scd -> cell.scd -> root.scd", info.exception.diagnostics[0].message)

    def test_body_location_deleted_component(self):
        sources = body_location_sources()
        cell = sources["cell.scd"]
        start = cell.index("  concrete system Fibroblast {")
        sources["cell.scd"] = cell[:start] + cell[cell.index("\n  }\n", start) + len("\n  }\n"):]
        with self.assertRaises(DiagnosticError) as info:
            resolve("root.scd", MemoryUnitLoader(sources))
        self.assertEqual(info.exception.codes, ["E-LVL-003"])
        self.assertIn("component 'Fibroblast'", info.exception.diagnostics[0].message)

    def test_missing_component(self):
        codes = resolve_codes({"root.scd": ROOT, "a.scd": LEVEL_A.replace("concrete system y {}", "")})
        self.assertEqual(codes, ["E-LVL-003"])

    def test_extra_system(self):
        extra = LEVEL_A.replace("concrete system y {}", "concrete system y {}\nconcrete system z {}")
        self.assertEqual(resolve_codes({"root.scd": ROOT, "a.scd": extra}), ["E-LVL-003"])

    def test_missing_level(self):
        with self.assertRaises(DiagnosticError) as info:
            resolve("root.scd", MemoryUnitLoader({"root.scd": ROOT}))
        self.assertEqual(info.exception.codes, ["E-LVL-001"])
        self.assertIn("no such level", info.exception.diagnostics[0].message)

    def test_level_does_not_parse(self):
        with self.assertRaises(DiagnosticError) as info:
            resolve("root.scd", MemoryUnitLoader({"root.scd": ROOT, "a.scd": "scd a { concrete system x {"}))
        self.assertEqual(info.exception.codes, ["E-LVL-001"])
        self.assertTrue(len(info.exception.diagnostics[0].notes) >= 1)

    def test_shared_target(self):
        source = """
        scd r {
          concrete system A { composition { x, y } explode "a.scd"; }
          concrete system B { composition { x, y } explode "./a.scd"; }
        }
        """
        self.assertEqual(resolve_codes({"root.scd": source, "a.scd": LEVEL_A}), ["E-LVL-004"])

    def test_root_failures(self):
        with self.assertRaises(UnitLoadError):
            resolve("root.scd", MemoryUnitLoader())
        with self.assertRaises(DiagnosticError) as info:
            resolve("root.scd", MemoryUnitLoader({"root.scd": "scd r {"}))
        self.assertEqual(info.exception.codes, ["E-PAR-001"])

    def test_nested_directories(self):
        sources = {"models/root.scd": ROOT.replace('"a.scd"', '"levels/a.scd"'),
                   "models/levels/a.scd": LEVEL_A}
        model = resolve("models/root.scd", MemoryUnitLoader(sources))
        self.assertEqual(model.unit_order, ("models/root.scd", "models/levels/a.scd"))


class TestQueries(TestCase):

    @classmethod
    def setUpClass(cls):
        cls.model = corpus_model("healthcare")

    def test_element_path_resolve(self):
        self.assertIsInstance(element_path_resolve(self.model, "Person"), SystemDecl)
        self.assertIsInstance(element_path_resolve(self.model, "Person.PersonAsEHR"), SystemDecl)
        self.assertIsInstance(element_path_resolve(self.model, "Person.PersonAsEHR.EHRSchema.Diagnosis"),
                              EntityDecl)
        self.assertIsInstance(element_path_resolve(self.model, "Person.variantCount"), PropertyDecl)
        self.assertEqual(element_path_resolve(self.model, "Person.PersonAsGenome.GenomeSchema.Chromosome.index")[0],
                         "index")
        for missing in ["Nobody", "", "Person..PersonAsEHR", "Person.PersonAsEHR.Nope"]:
            self.assertIsNone(element_path_resolve(self.model, missing), missing)

    def test_symbol_table_paths(self):
        table = self.model.symbol_table
        self.assertIn("Person.PersonAsGenome.Variants.rs7412.isVariant", table)
        self.assertIn("Person.Care.Clinician", table)
        with self.assertRaises(TypeError):
            table["x"] = 1

    def test_drill_down(self):
        view = drill_down(self.model, "Person")
        self.assertEqual(view.system_names, ["PersonAsEHR", "PersonAsGenome"])
        self.assertEqual([p.name for p in view.properties], ["variantCount"])
        self.assertEqual(view.unit.level_id, "Person")
        self.assertEqual(drill_down(self.model, "Person.PersonAsGenome.Variants").system_names,
                         ["rs429358", "rs7412", "rs1801133"])

    def test_drill_down_errors(self):
        with self.assertRaises(DiagnosticError) as info:
            drill_down(self.model, "Nobody")
        self.assertEqual(info.exception.codes, ["E-QRY-001"])
        with self.assertRaises(DiagnosticError) as info:
            drill_down(self.model, "Person.PersonAsEHR")
        self.assertEqual(info.exception.codes, ["E-QRY-002"])
        with self.assertRaises(DiagnosticError) as info:
            drill_down(self.model, "Person.variantCount")
        self.assertEqual(info.exception.codes, ["E-QRY-001"])

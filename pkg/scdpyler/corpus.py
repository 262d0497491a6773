# corpus.py - the golden model corpus and its manifest
#
# corpus/MANIFEST.tsv has one row per model, tab separated:
#
#   name    root path (relative to the corpus directory)
#   codes   expected diagnostic codes, comma separated, '-' for none
#   levels  expected number of levels, the root included
#
# Copyright (c) 2026, scdpyler developers. All rights reserved.

import csv
import logging
import os
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .diagnostic import DiagnosticError
from .loader import FileUnitLoader
from .resolver import ResolvedModel, resolve
from .validator import validate

logger = logging.getLogger(__name__)

MANIFEST_NAME = "MANIFEST.tsv"
_COLUMNS = ("name", "root", "codes", "levels")

#: corpus/ next to the package in a source checkout
DEFAULT_CORPUS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "corpus")


@dataclass(frozen=True)
class CorpusEntry(object):
    name: str
    root: str
    codes: Tuple[str, ...]
    levels: int

    @property
    def is_clean(self) -> bool:
        return len(self.codes) == 0


def corpus_manifest(corpus_dir: Optional[str] = None) -> List[CorpusEntry]:
    """Reads the manifest of a corpus directory.

    :param corpus_dir: directory holding MANIFEST.tsv; the checkout's corpus/ when None
    :return: entries in manifest order, root paths joined onto corpus_dir
    :raises ValueError: on a malformed row
    """
    corpus_dir = corpus_dir if corpus_dir is not None else DEFAULT_CORPUS_DIR
    manifest = os.path.join(corpus_dir, MANIFEST_NAME)
    entries = []
    with open(manifest, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle, delimiter="\t")
        if tuple(reader.fieldnames or ()) != _COLUMNS:
            raise ValueError(f"{manifest} must have the columns {', '.join(_COLUMNS)}: "
                             f"received {reader.fieldnames}.")
        for row in reader:
            codes = () if row["codes"].strip() == "-" else tuple(c.strip() for c in row["codes"].split(","))
            try:
                levels = int(row["levels"])
            except (TypeError, ValueError):
                raise ValueError(f"{manifest}:{reader.line_num}: levels must be an integer: received "
                                 f"{row['levels']!r}.")
            entries.append(CorpusEntry(row["name"], os.path.join(corpus_dir, row["root"]), codes, levels))
    logger.debug("read %d corpus entries from %s", len(entries), manifest)
    return entries


def corpus_entry(name: str, corpus_dir: Optional[str] = None) -> CorpusEntry:
    for entry in corpus_manifest(corpus_dir):
        if entry.name == name:
            return entry
    raise ValueError(f"no corpus model named {name!r}.")


def load_corpus_model(entry: CorpusEntry) -> ResolvedModel:
    """Resolves a corpus model; raises DiagnosticError when it does not resolve."""
    return resolve(entry.root, FileUnitLoader())


def corpus_codes(entry: CorpusEntry) -> List[str]:
    """The diagnostic codes a full check of the model produces, in report order."""
    try:
        model = load_corpus_model(entry)
    except DiagnosticError as error:
        return error.codes
    return [d.code for d in validate(model)]

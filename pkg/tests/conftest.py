from __future__ import annotations

from pathlib import Path

import pytest

from lexgram import LexiconDocument, generate_base, load_class_matrix, load_table, resolve_features
from lexgram.realizer import MorphoRules, load_morpho_rules
from lexgram.script import ExtractionScript, load_script

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

TABLE_IDS = ("ADVMP", "ADVMS", "ADVPF", "ADVPS", "PAC", "PC", "PCA", "PCDC", "PCDN")


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load_fixture_script() -> ExtractionScript:
    return load_script(fixture_path("extract.lgs"))


def load_fixture_morpho() -> MorphoRules:
    return load_morpho_rules(fixture_path("morpho.rules"))


def compile_corpus() -> LexiconDocument:
    """Build the base lexicon from the bundled corpus, one entry per row."""
    script = load_fixture_script()
    matrix = load_class_matrix(fixture_path("classes.lgm"))
    morpho = load_fixture_morpho()
    entries = []
    for table_id in TABLE_IDS:
        table = resolve_features(load_table(fixture_path(table_id + ".lgt")), matrix)
        entries.extend(generate_base(table, script, rules=morpho))
    return LexiconDocument(
        entries=entries,
        table_ids=TABLE_IDS,
        script_source=fixture_path("extract.lgs").read_text(encoding="utf-8"),
    )


@pytest.fixture()
def corpus_doc() -> LexiconDocument:
    return compile_corpus()

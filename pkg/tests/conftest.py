from __future__ import annotations

from pathlib import Path

import pytest

from stakegraph import annotator as annotator_mod
from stakegraph import corpus as corpus_mod
from stakegraph import relations as relations_mod
from stakegraph import taxonomy as taxonomy_mod

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "stakegraph" / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def taxonomy():
    return taxonomy_mod.load_taxonomy(DATA_DIR / "taxonomy.json")


@pytest.fixture(scope="session")
def corpus():
    return corpus_mod.ingest_corpus(DATA_DIR / "corpus.jsonl")


@pytest.fixture(scope="session")
def annotations(corpus, taxonomy):
    return annotator_mod.annotate(corpus, taxonomy)


@pytest.fixture(scope="session")
def triples(corpus, annotations, taxonomy):
    return relations_mod.extract_triples(corpus, annotations, taxonomy)


@pytest.fixture(scope="session")
def gold_triples():
    return relations_mod.load_triples(DATA_DIR / "mechanism_triples.jsonl")

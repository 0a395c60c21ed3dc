"""Shared fixtures: the bundled mini corpus and its precomputed suite runs."""

from __future__ import annotations

from pathlib import Path

import pytest

from argquality.corpus import ColumnMapping, load_corpus
from argquality.eval import EvalSettings, run_experiments

DATA_DIR = Path(__file__).parent / "data"
MINI_CORPUS_PATH = DATA_DIR / "mini_corpus.csv"


@pytest.fixture(scope="session")
def mini_corpus():
    return load_corpus(MINI_CORPUS_PATH, ColumnMapping.from_template())


@pytest.fixture(scope="session")
def mini_reports(mini_corpus):
    """All three suites on the mini corpus, computed once per session."""
    return run_experiments(mini_corpus, EvalSettings(), ("q1", "q2", "q3"))

"""Readability scores against hand-applied published formulas.

Both fixture sentences were counted by hand: words, sentences, syllables,
letters, and the complex/long/monosyllable word tallies each formula needs.
The expected values below are the formulas applied to those hand counts.
"""

from __future__ import annotations

import math

import pytest

from argquality.features import readability_scores
from argquality.textproc import analyze

# "The cat sat on the mat." -> 6 words, 1 sentence, 6 syllables,
# 17 letters, 0 complex words (3+ syllables), 0 long words (> 6 chars),
# 6 monosyllables, 6 easy words (<= 2 syllables).
SIMPLE = "The cat sat on the mat."

# "Universities celebrate independence." -> 3 words, 1 sentence,
# 12 syllables (5 + 3 + 4), 33 letters, 3 complex words, 3 long words,
# 0 monosyllables, 0 easy words.
DENSE = "Universities celebrate independence."

SIMPLE_EXPECTED = {
    "flesch_reading_ease": 206.835 - 1.015 * (6 / 1) - 84.6 * (6 / 6),
    "flesch_kincaid_grade": 0.39 * (6 / 1) + 11.8 * (6 / 6) - 15.59,
    "gunning_fog": 0.4 * ((6 / 1) + 100 * (0 / 6)),
    "lix": 6 / 1 + 100 * (0 / 6),
    "rix": 0 / 1,
    "smog": 1.0430 * math.sqrt(0 * 30 / 1) + 3.1291,
    "coleman_liau": 0.0588 * (100 * 17 / 6) - 0.296 * (100 * 1 / 6) - 15.8,
    "automated_readability": 4.71 * (17 / 6) + 0.5 * (6 / 1) - 21.43,
    "forcast": 20 - (6 * 150 / 6) / 10,
    "linsear_write": (6 + 3 * 0) / 1 / 2 - 1,
}

DENSE_EXPECTED = {
    "flesch_reading_ease": 206.835 - 1.015 * (3 / 1) - 84.6 * (12 / 3),
    "flesch_kincaid_grade": 0.39 * (3 / 1) + 11.8 * (12 / 3) - 15.59,
    "gunning_fog": 0.4 * ((3 / 1) + 100 * (3 / 3)),
    "lix": 3 / 1 + 100 * (3 / 3),
    "rix": 3 / 1,
    "smog": 1.0430 * math.sqrt(3 * 30 / 1) + 3.1291,
    "coleman_liau": 0.0588 * (100 * 33 / 3) - 0.296 * (100 * 1 / 3) - 15.8,
    "automated_readability": 4.71 * (33 / 3) + 0.5 * (3 / 1) - 21.43,
    "forcast": 20 - (0 * 150 / 3) / 10,
    "linsear_write": (0 + 3 * 3) / 1 / 2 - 1,
}


@pytest.mark.parametrize("score_id,expected", sorted(SIMPLE_EXPECTED.items()))
def test_simple_sentence(score_id, expected):
    result = readability_scores(analyze(SIMPLE))
    assert not result.degenerate
    assert result.scores[score_id] == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("score_id,expected", sorted(DENSE_EXPECTED.items()))
def test_dense_sentence(score_id, expected):
    result = readability_scores(analyze(DENSE))
    assert not result.degenerate
    assert result.scores[score_id] == pytest.approx(expected, abs=1e-9)


def test_spot_values():
    """A few fully hand-computed decimals, independent of the dicts above."""
    scores = readability_scores(analyze(SIMPLE)).scores
    assert scores["flesch_reading_ease"] == pytest.approx(116.145, abs=1e-9)
    assert scores["gunning_fog"] == pytest.approx(2.4, abs=1e-9)
    assert scores["lix"] == pytest.approx(6.0, abs=1e-9)
    assert scores["flesch_kincaid_grade"] == pytest.approx(-1.45, abs=1e-9)
    assert scores["automated_readability"] == pytest.approx(-5.085, abs=1e-9)
    assert scores["forcast"] == pytest.approx(5.0, abs=1e-9)
    assert scores["linsear_write"] == pytest.approx(2.0, abs=1e-9)


def test_exactly_ten_scores():
    result = readability_scores(analyze(SIMPLE))
    assert len(result.scores) == 10
    assert sorted(result.scores) == sorted(DENSE_EXPECTED)


def test_degenerate_inputs():
    for text in ("", "   ", "..."):
        result = readability_scores(analyze(text))
        assert result.degenerate
        assert all(v == 0.0 for v in result.scores.values())
        assert len(result.scores) == 10


def test_linsear_long_text_branch():
    # 21 easy monosyllabic words in one sentence: points 21, r 21 > 20,
    # so the grade is r / 2 without the subtraction.
    text = " ".join(["a"] * 21) + "."
    scores = readability_scores(analyze(text)).scores
    assert scores["linsear_write"] == pytest.approx(21 / 2, abs=1e-9)

"""Ten classic readability formulas over one document analysis.

Word counts use word-kind tokens only; letter counts sum the alphanumeric
characters inside those words; syllables come from the analysis. Degenerate
input (no words or no sentences) yields all-zero scores with a flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..textproc import DocumentAnalysis
from .config import READABILITY_SCORE_IDS


@dataclass(frozen=True)
class ReadabilityResult:
    scores: dict  # score id -> value, keys = READABILITY_SCORE_IDS
    degenerate: bool


def readability_scores(analysis: DocumentAnalysis) -> ReadabilityResult:
    words = analysis.word_tokens()
    word_count = len(words)
    sentence_count = len(analysis.sentences)
    if word_count == 0 or sentence_count == 0:
        return ReadabilityResult({sid: 0.0 for sid in READABILITY_SCORE_IDS},
                                 degenerate=True)

    syllables = sum(analysis.syllable_counts)
    letter_count = sum(sum(ch.isalnum() for ch in t.surface) for t in words)
    complex_words = sum(1 for s in analysis.syllable_counts if s >= 3)
    long_words = sum(1 for t in words if len(t.surface) > 6)
    monosyllables = sum(1 for s in analysis.syllable_counts if s == 1)

    words_per_sentence = word_count / sentence_count
    syllables_per_word = syllables / word_count

    linsear_points = (word_count - complex_words) + 3 * complex_words
    linsear_ratio = linsear_points / sentence_count
    if linsear_ratio > 20:
        linsear = linsear_ratio / 2
    else:
        linsear = linsear_ratio / 2 - 1

    scores = {
        "flesch_reading_ease": (206.835 - 1.015 * words_per_sentence
                                - 84.6 * syllables_per_word),
        "flesch_kincaid_grade": (0.39 * words_per_sentence
                                 + 11.8 * syllables_per_word - 15.59),
        "gunning_fog": 0.4 * (words_per_sentence
                              + 100.0 * complex_words / word_count),
        "lix": words_per_sentence + 100.0 * long_words / word_count,
        "rix": long_words / sentence_count,
        "smog": 1.0430 * math.sqrt(complex_words * 30.0 / sentence_count) + 3.1291,
        "coleman_liau": (0.0588 * (100.0 * letter_count / word_count)
                         - 0.296 * (100.0 * sentence_count / word_count) - 15.8),
        "automated_readability": (4.71 * (letter_count / word_count)
                                  + 0.5 * words_per_sentence - 21.43),
        "forcast": 20.0 - (monosyllables * 150.0 / word_count) / 10.0,
        "linsear_write": linsear,
    }
    return ReadabilityResult(scores, degenerate=False)

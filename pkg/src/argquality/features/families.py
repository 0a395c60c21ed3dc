"""Per-family feature computations shared by the pipeline and extract ops.

Gram conventions: word n-grams run over all token kinds, case-folded, and
are valued as count per token count; POS and character n-grams are valued
as count per slot count (length - n + 1); character grams use the
lower-cased raw text including whitespace. Multi-token gram names join
their parts with a single space (tokens never contain whitespace).
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

import numpy as np

from ..textproc import DocumentAnalysis
from .config import READABILITY_SCORE_IDS
from .embeddings import EmbeddingTable
from .lexicons import LexiconSet, count_phrase_matches
from .readability import readability_scores
from .spelling import SpellCounts

LENGTH_UNITS = ("chars", "syllables", "tokens", "phrases", "sentences",
                "paragraphs")

LENGTH_RATIO_PAIRS = tuple(
    (LENGTH_UNITS[i], LENGTH_UNITS[j])
    for i in range(len(LENGTH_UNITS))
    for j in range(i + 1, len(LENGTH_UNITS)))

PRONOUN_FEATURES = ("1sg", "1pl", "2sg", "2pl", "3sg", "3pl")
LEXICON_FEATURES = ("positivity", "negativity", "hedging")
CASE_FEATURES = ("lower", "upper", "other")
CHAR_CLASS_FEATURES = ("letter", "digit", "whitespace", "other")
SPELL_FEATURES = ("hints_abs", "hints_rel", "unknown_words_abs",
                  "unknown_words_rel", "other_abs", "other_rel")


def sequence_grams(parts: Sequence[str], n: int) -> Counter:
    """Counts of joined n-grams over a token or tag sequence."""
    counts = Counter()
    for i in range(len(parts) - n + 1):
        counts[" ".join(parts[i:i + n])] += 1
    return counts


def char_grams(text_lower: str, n: int) -> Counter:
    counts = Counter()
    for i in range(len(text_lower) - n + 1):
        counts[text_lower[i:i + n]] += 1
    return counts


def first_gram(parts: Sequence[str], n: int) -> str | None:
    if len(parts) < n:
        return None
    return " ".join(parts[:n])


def word_gram_denominator(analysis: DocumentAnalysis) -> int:
    return len(analysis.tokens)


def slot_denominator(length: int, n: int) -> int:
    return max(length - n + 1, 0)


def extract_content(analysis: DocumentAnalysis, pipeline) -> dict:
    """Relative frequencies of the retained word 1- to 3-grams present."""
    lowers = [t.lower for t in analysis.tokens]
    denominator = word_gram_denominator(analysis)
    values = {}
    for n in (1, 2, 3):
        vocabulary = pipeline.vocabulary_set(f"w{n}")
        if not vocabulary or denominator == 0:
            continue
        for gram, count in sequence_grams(lowers, n).items():
            if gram in vocabulary:
                values[f"content:w{n}:{gram}"] = count / denominator
    return values


def extract_style(analysis: DocumentAnalysis, pipeline) -> dict:
    """Retained POS n-gram and character n-gram relative frequencies."""
    values = {}
    tags = list(analysis.pos_tags)
    for n in (1, 2, 3):
        vocabulary = pipeline.vocabulary_set(f"p{n}")
        denominator = slot_denominator(len(tags), n)
        if not vocabulary or denominator == 0:
            continue
        for gram, count in sequence_grams(tags, n).items():
            if gram in vocabulary:
                values[f"style:p{n}:{gram}"] = count / denominator
    text_lower = analysis.text.lower()
    for n in (1, 2, 3):
        vocabulary = pipeline.vocabulary_set(f"c{n}")
        denominator = slot_denominator(len(text_lower), n)
        if not vocabulary or denominator == 0:
            continue
        for gram, count in char_grams(text_lower, n).items():
            if gram in vocabulary:
                values[f"style:c{n}:{gram}"] = count / denominator
    return values


def enumeration_per_sentence(analysis: DocumentAnalysis,
                             lexicons: LexiconSet) -> float:
    sentence_count = len(analysis.sentences)
    if sentence_count == 0:
        return 0.0
    matches = 0
    for start, end in analysis.sentences:
        lowers = [t.lower for t in analysis.tokens[start:end]]
        matches += count_phrase_matches(lowers, lexicons.enumeration)
    return matches / sentence_count


def extract_structure(analysis: DocumentAnalysis, pipeline) -> dict:
    """Enumeration density plus first-token n-gram one-hots."""
    values = {
        "structure:enum_per_sentence": enumeration_per_sentence(
            analysis, pipeline.resources.lexicons),
    }
    lowers = [t.lower for t in analysis.tokens]
    for n in (1, 2, 3):
        vocabulary = pipeline.vocabulary_set(f"first{n}")
        gram = first_gram(lowers, n)
        if gram is not None and gram in vocabulary:
            values[f"structure:first{n}:{gram}"] = 1.0
    return values


def extract_length(analysis: DocumentAnalysis) -> dict:
    """The 6 unit counts and 15 finer-per-coarser ratios, always emitted."""
    counts = analysis.counts()
    values = {f"length:count:{unit}": float(counts[unit])
              for unit in LENGTH_UNITS}
    for finer, coarser in LENGTH_RATIO_PAIRS:
        denominator = counts[coarser]
        ratio = counts[finer] / denominator if denominator else 0.0
        values[f"length:ratio:{finer}_per_{coarser}"] = ratio
    return values


def extract_embedding(analysis: DocumentAnalysis,
                      table: EmbeddingTable) -> dict:
    """Mean word vector, one feature per dimension."""
    words = [t.lower for t in analysis.word_tokens()]
    vector = table.document_vector(words)
    width = len(str(table.dim - 1))
    return {f"embedding:d{i:0{width}d}": float(v) for i, v in enumerate(vector)}


def extract_textquality(analysis: DocumentAnalysis,
                        spell_counts: SpellCounts) -> dict:
    """Readability scores, the degenerate flag, and spell error counts."""
    readability = readability_scores(analysis)
    values = {f"textquality:read:{sid}": readability.scores[sid]
              for sid in READABILITY_SCORE_IDS}
    values["textquality:degenerate"] = 1.0 if readability.degenerate else 0.0
    relative = spell_counts.relative(len(analysis.tokens))
    for name in SPELL_FEATURES:
        values[f"textquality:spell:{name}"] = relative[name]
    return values


def extract_subjectivity(analysis: DocumentAnalysis,
                         lexicons: LexiconSet) -> dict:
    """Pronoun/lexicon/emoji frequencies plus word-case and char shares."""
    token_count = len(analysis.tokens)
    words = analysis.word_tokens()
    values = {}

    pronoun_counts = dict.fromkeys(PRONOUN_FEATURES, 0)
    positivity = negativity = hedging = 0
    for token in words:
        klass = lexicons.pronouns.get(token.lower)
        if klass is not None:
            pronoun_counts[klass] += 1
        if token.lower in lexicons.positivity:
            positivity += 1
        if token.lower in lexicons.negativity:
            negativity += 1
        if token.lower in lexicons.hedging:
            hedging += 1
    for klass in PRONOUN_FEATURES:
        values[f"subjectivity:pronoun:{klass}"] = (
            pronoun_counts[klass] / token_count if token_count else 0.0)
    for name, count in zip(LEXICON_FEATURES, (positivity, negativity, hedging)):
        values[f"subjectivity:lex:{name}"] = (
            count / token_count if token_count else 0.0)

    for emoji in lexicons.emojis:
        count = analysis.text.count(emoji)
        values[f"subjectivity:emoji:{emoji}"] = (
            count / token_count if token_count else 0.0)

    lower = sum(1 for t in words if t.surface.islower())
    upper = sum(1 for t in words if t.surface.isupper() and len(t.surface) >= 2)
    other = len(words) - lower - upper
    for name, count in zip(CASE_FEATURES, (lower, upper, other)):
        values[f"subjectivity:case:{name}"] = (
            count / len(words) if words else 0.0)

    total_chars = len(analysis.text)
    for klass in CHAR_CLASS_FEATURES:
        values[f"subjectivity:chars:{klass}"] = (
            analysis.char_counts[klass] / total_chars if total_chars else 0.0)
    return values

"""Spelling/typo error counts in three buckets: hints, unknown words, other.

Offline mode is a self-contained approximation: unknown words come from a
shipped word list, hints from doubled-word and sentence-capitalization
heuristics, and the "other" bucket stays 0. Service mode posts the text to
a LanguageTool-compatible HTTP check endpoint and maps the returned rule
categories onto the same three buckets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import requests

from ..textproc import DocumentAnalysis
from .config import ConfigurationError, ExtractorConfig
from .lexicons import LexiconSet

BUCKETS = ("hints", "unknown_words", "other")


class SpellServiceError(Exception):
    """The configured spell-check service could not be used."""


@dataclass(frozen=True)
class SpellCounts:
    hints: int
    unknown_words: int
    other: int

    def relative(self, token_count: int) -> dict:
        """Absolute and per-token counts as the six feature values."""
        divisor = float(token_count) if token_count else 0.0
        values = {}
        for bucket in BUCKETS:
            count = getattr(self, bucket)
            values[f"{bucket}_abs"] = float(count)
            values[f"{bucket}_rel"] = count / divisor if divisor else 0.0
        return values


def _offline_counts(analysis: DocumentAnalysis, lexicons: LexiconSet) -> SpellCounts:
    unknown = sum(1 for token in analysis.tokens
                  if token.kind == "word" and token.lower not in lexicons.wordlist)
    hints = 0
    words = [t for t in analysis.tokens if t.kind == "word"]
    for previous, current in zip(words, words[1:]):
        if previous.lower == current.lower:
            hints += 1
    for start, end in analysis.sentences:
        for token in analysis.tokens[start:end]:
            if token.kind == "word":
                if token.surface[0].islower():
                    hints += 1
                break
    return SpellCounts(hints=hints, unknown_words=unknown, other=0)


def _service_counts(text: str, config: ExtractorConfig) -> SpellCounts:
    try:
        response = requests.post(
            config.spellcheck_url,
            data={"text": text, "language": config.spellcheck_language},
            timeout=30,
        )
        response.raise_for_status()
        payload = response.json()
    except (requests.RequestException, json.JSONDecodeError, ValueError) as error:
        raise SpellServiceError(
            f"spell-check service at {config.spellcheck_url} failed: {error}")
    matches = payload.get("matches") if isinstance(payload, dict) else None
    if not isinstance(matches, list):
        raise SpellServiceError(
            f"spell-check service at {config.spellcheck_url} returned no "
            "'matches' list")
    counts = {bucket: 0 for bucket in BUCKETS}
    for match in matches:
        category = (match.get("rule", {}).get("category", {}) or {}).get("id", "")
        bucket = config.spellcheck_category_map.get(category, "other")
        counts[bucket] += 1
    return SpellCounts(**counts)


def spell_errors(analysis: DocumentAnalysis, config: ExtractorConfig,
                 lexicons: LexiconSet | None = None) -> SpellCounts:
    """Count spelling problems in the three buckets for one document."""
    if config.spellcheck_mode == "offline":
        if lexicons is None:
            raise ConfigurationError("offline spell-check needs the lexicon set")
        return _offline_counts(analysis, lexicons)
    return _service_counts(analysis.text, config)

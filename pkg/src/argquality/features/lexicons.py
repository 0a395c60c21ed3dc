"""Loading and token-sequence matching for the shipped lexicons."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..datafiles import file_sha256, read_lexicon_entries
from ..textproc import tokenize
from .config import ConfigurationError, ExtractorConfig, resolve_path

PRONOUN_CLASSES = ("1sg", "1pl", "2sg", "2pl", "3sg", "3pl")


def _tokenized_phrases(entries: Sequence[str]) -> tuple[tuple[str, ...], ...]:
    """Each entry as the tuple of its lower-cased token surfaces."""
    phrases = []
    for entry in entries:
        tokens = tuple(t.lower for t in tokenize(entry))
        if tokens:
            phrases.append(tokens)
    return tuple(phrases)


@dataclass(frozen=True)
class LexiconSet:
    """All word/phrase resources used by the extractors, plus file hashes."""

    positivity: frozenset
    negativity: frozenset
    hedging: frozenset
    enumeration: tuple[tuple[str, ...], ...]
    emojis: tuple[str, ...]
    pronouns: dict  # word -> class in PRONOUN_CLASSES
    premise_markers: tuple[tuple[str, ...], ...]
    conclusion_markers: tuple[tuple[str, ...], ...]
    wordlist: frozenset
    hashes: dict  # role -> sha256 of the source file


def _load_pronouns(path) -> dict:
    table = {}
    for entry in read_lexicon_entries(path):
        parts = entry.split()
        if len(parts) != 2:
            raise ConfigurationError(
                f"pronoun table {path}: expected 'word class', got {entry!r}")
        word, klass = parts
        if klass not in PRONOUN_CLASSES:
            raise ConfigurationError(
                f"pronoun table {path}: unknown class {klass!r} for {word!r}")
        table[word.lower()] = klass
    if not table:
        raise ConfigurationError(f"pronoun table {path} is empty")
    return table


def load_lexicons(config: ExtractorConfig) -> LexiconSet:
    """Read every configured lexicon file, validating as we go."""
    paths = {role: resolve_path(path)
             for role, path in config.lexicon_paths().items()}
    emojis = tuple(read_lexicon_entries(paths["emoji"]))
    if not emojis:
        raise ConfigurationError(f"emoji list {paths['emoji']} is empty")
    if len(set(emojis)) != len(emojis):
        raise ConfigurationError(f"emoji list {paths['emoji']} has duplicates")
    return LexiconSet(
        positivity=frozenset(w.lower() for w in read_lexicon_entries(paths["positivity"])),
        negativity=frozenset(w.lower() for w in read_lexicon_entries(paths["negativity"])),
        hedging=frozenset(w.lower() for w in read_lexicon_entries(paths["hedging"])),
        enumeration=_tokenized_phrases(read_lexicon_entries(paths["enumeration"])),
        emojis=emojis,
        pronouns=_load_pronouns(paths["pronoun"]),
        premise_markers=_tokenized_phrases(read_lexicon_entries(paths["premise_markers"])),
        conclusion_markers=_tokenized_phrases(read_lexicon_entries(paths["conclusion_markers"])),
        wordlist=frozenset(w.lower() for w in read_lexicon_entries(paths["wordlist"])),
        hashes={role: file_sha256(path) for role, path in sorted(paths.items())},
    )


def count_phrase_matches(token_lowers: Sequence[str],
                         phrases: Sequence[tuple[str, ...]]) -> int:
    """Occurrences of any phrase as a contiguous token subsequence.

    Each phrase is counted independently, scanning left to right without
    overlap of its own matches.
    """
    total = 0
    n = len(token_lowers)
    for phrase in phrases:
        width = len(phrase)
        if width == 0 or width > n:
            continue
        i = 0
        while i <= n - width:
            if tuple(token_lowers[i:i + width]) == phrase:
                total += 1
                i += width
            else:
                i += 1
    return total


def has_phrase_match(token_lowers: Sequence[str],
                     phrases: Sequence[tuple[str, ...]]) -> bool:
    n = len(token_lowers)
    for phrase in phrases:
        width = len(phrase)
        if width == 0 or width > n:
            continue
        for i in range(n - width + 1):
            if tuple(token_lowers[i:i + width]) == phrase:
                return True
    return False

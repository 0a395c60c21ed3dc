"""Deterministic linguistic primitives shared by all feature extractors.

Tokenization, sentence/paragraph/phrase segmentation, syllable counting,
rule-based POS tagging over a 12-tag set, and character classification.
Everything here is a pure function of its inputs; identical text yields a
byte-identical serialized DocumentAnalysis.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .datafiles import read_lexicon_entries, packaged_path

TOKEN_KINDS = ("word", "number", "punctuation", "url", "emoji", "other")

POS_TAGS = ("NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "NUM",
            "CONJ", "PRT", "PUNCT", "X")

_SENTENCE_FINAL = frozenset(".!?")
# tokens that may trail the final punctuation of a sentence without opening a new one
_SENTENCE_CLOSERS = frozenset([")", "]", '"', "'", "”", "’"])
_PHRASE_SEPARATORS = frozenset([",", ";", ":", "-", "–", "—"])

_TOKEN_RE = re.compile(
    r"""(?P<url>(?:https?://|www\.)[^\s<>"']+)
      | (?P<emoji>(?:[:;=][-'o^]?[)(\[\]dDpP/\\|*3cCoO]|<3|\^\^)(?![^\W_])
                  |[☀-➿\U0001f000-\U0001faff️])
      | (?P<abbrev>(?:[^\W\d_]\.){2,})
      | (?P<number>\d+(?:[.,]\d+)*)
      | (?P<word>[^\W\d_]+(?:['’-][^\W\d_]+)*)
      | (?P<other>\S)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    surface: str
    lower: str
    char_span: tuple[int, int]
    kind: str


@dataclass(frozen=True)
class DocumentAnalysis:
    """All linguistic units of one text, aligned by index ranges.

    sentences and phrases are (start, end) token index ranges, paragraphs are
    (start, end) sentence index ranges; all ranges are half-open. pos_tags is
    aligned to tokens; syllable_counts is aligned to the word-kind tokens in
    order of appearance. char_counts maps the four character classes to counts
    in Unicode scalar values.
    """

    text: str
    tokens: tuple[Token, ...]
    sentences: tuple[tuple[int, int], ...]
    paragraphs: tuple[tuple[int, int], ...]
    phrases: tuple[tuple[int, int], ...]
    pos_tags: tuple[str, ...]
    syllable_counts: tuple[int, ...]
    char_counts: dict

    def word_tokens(self) -> list[Token]:
        return [t for t in self.tokens if t.kind == "word"]

    def sentence_tokens(self, sentence: tuple[int, int]) -> Sequence[Token]:
        start, end = sentence
        return self.tokens[start:end]

    def counts(self) -> dict:
        """The six length-unit counts (characters ... paragraphs)."""
        return {
            "chars": len(self.text),
            "syllables": sum(self.syllable_counts),
            "tokens": len(self.tokens),
            "phrases": len(self.phrases),
            "sentences": len(self.sentences),
            "paragraphs": len(self.paragraphs),
        }

    def to_json(self) -> str:
        record = {
            "text": self.text,
            "tokens": [[t.surface, t.char_span[0], t.char_span[1], t.kind]
                       for t in self.tokens],
            "sentences": [list(r) for r in self.sentences],
            "paragraphs": [list(r) for r in self.paragraphs],
            "phrases": [list(r) for r in self.phrases],
            "pos_tags": list(self.pos_tags),
            "syllable_counts": list(self.syllable_counts),
            "char_counts": self.char_counts,
        }
        return json.dumps(record, sort_keys=True, ensure_ascii=True)


def tokenize(text: str) -> list[Token]:
    """Split text into tokens; URLs, emoticons, and dotted abbreviations stay whole."""
    tokens = []
    for match in _TOKEN_RE.finditer(text):
        surface = match.group()
        kind = match.lastgroup
        if kind == "abbrev":
            kind = "word"
        elif kind == "other":
            category = unicodedata.category(surface)
            kind = "punctuation" if category.startswith("P") else "other"
        tokens.append(Token(surface, surface.lower(), match.span(), kind))
    return tokens


def classify_chars(text: str) -> dict:
    """Counts over {letter, digit, whitespace, other}, summing to len(text)."""
    counts = {"letter": 0, "digit": 0, "whitespace": 0, "other": 0}
    for ch in text:
        if ch.isalpha():
            counts["letter"] += 1
        elif ch.isdigit():
            counts["digit"] += 1
        elif ch.isspace():
            counts["whitespace"] += 1
        else:
            counts["other"] += 1
    return counts


@lru_cache(maxsize=1)
def default_abbreviations() -> frozenset:
    return frozenset(read_lexicon_entries(packaged_path("abbreviations.txt")))


def split_sentences(tokens: Sequence[Token],
                    abbreviations: frozenset | None = None) -> list[tuple[int, int]]:
    """Token index ranges of sentences.

    A boundary falls after a run of sentence-final punctuation (plus closing
    quotes/brackets), except after a period that follows a known
    abbreviation. Trailing material forms a final sentence.
    """
    if abbreviations is None:
        abbreviations = default_abbreviations()
    sentences = []
    start = 0
    i = 0
    n = len(tokens)
    while i < n:
        token = tokens[i]
        if token.surface in _SENTENCE_FINAL:
            if token.surface == "." and i > 0:
                previous = tokens[i - 1]
                if previous.kind == "word" and previous.lower in abbreviations:
                    i += 1
                    continue
            # swallow the whole punctuation run plus trailing closers
            j = i + 1
            while j < n and (tokens[j].surface in _SENTENCE_FINAL
                             or tokens[j].surface in _SENTENCE_CLOSERS):
                j += 1
            sentences.append((start, j))
            start = j
            i = j
        else:
            i += 1
    if start < n:
        sentences.append((start, n))
    return sentences


def split_paragraphs(text: str,
                     sentences: Sequence[tuple[int, int]],
                     tokens: Sequence[Token]) -> list[tuple[int, int]]:
    """Sentence index ranges of paragraphs; boundaries are blank-line runs."""
    if not sentences:
        return []
    # character offsets where a new paragraph segment begins
    segment_starts = [0]
    for match in re.finditer(r"\n[ \t\r]*\n(?:[ \t\r]*\n)*", text):
        segment_starts.append(match.end())
    ranges = []
    current_segment = 0
    start = 0
    for index, (tok_start, _) in enumerate(sentences):
        offset = tokens[tok_start].char_span[0]
        segment = current_segment
        while segment + 1 < len(segment_starts) and offset >= segment_starts[segment + 1]:
            segment += 1
        if segment != current_segment and index > start:
            ranges.append((start, index))
            start = index
        current_segment = segment
    ranges.append((start, len(sentences)))
    return ranges


def split_phrases(tokens: Sequence[Token],
                  sentences: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Token index ranges of phrases: comma/semicolon/colon/dash segments."""
    phrases = []
    for sent_start, sent_end in sentences:
        segment_start = None
        for i in range(sent_start, sent_end):
            if tokens[i].surface in _PHRASE_SEPARATORS:
                if segment_start is not None:
                    phrases.append((segment_start, i))
                    segment_start = None
            elif segment_start is None:
                segment_start = i
        if segment_start is not None:
            phrases.append((segment_start, sent_end))
    return phrases


_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")


def count_syllables(word: str) -> int:
    """Heuristic syllable count: vowel groups, silent final e, minimum 1.

    The final "e" is dropped unless preceded by consonant+l ("table" keeps
    both syllables, "make" has one).
    """
    letters = "".join(ch for ch in word.lower() if ch.isalpha())
    if not word:
        return 0
    groups = len(_VOWEL_GROUP_RE.findall(letters))
    if groups > 1 and letters.endswith("e"):
        keeps_final_e = (len(letters) >= 3 and letters[-2] == "l"
                         and letters[-3] not in "aeiouy")
        if not keeps_final_e:
            groups -= 1
    return max(groups, 1)


class RuleTagger:
    """Closed-class lexicon + suffix rules + default NOUN, over 12 tags.

    A deterministic stand-in for a statistical tagger; the pipeline accepts
    any callable with the same tag(tokens) signature.
    """

    def __init__(self, lexicon_path=None, suffix_path=None):
        lexicon_path = lexicon_path or packaged_path("pos_lexicon.txt")
        suffix_path = suffix_path or packaged_path("pos_suffixes.txt")
        self.lexicon = {}
        for entry in read_lexicon_entries(lexicon_path):
            word, tag = entry.split()
            if tag not in POS_TAGS:
                raise ValueError(f"unknown POS tag {tag!r} in {lexicon_path}")
            self.lexicon[word] = tag
        self.suffix_rules = []
        for entry in read_lexicon_entries(suffix_path):
            suffix, tag = entry.split()
            if tag not in POS_TAGS:
                raise ValueError(f"unknown POS tag {tag!r} in {suffix_path}")
            self.suffix_rules.append((suffix, tag))

    def tag(self, tokens: Sequence[Token]) -> list[str]:
        tags = []
        for token in tokens:
            if token.kind == "number":
                tags.append("NUM")
            elif token.kind == "punctuation":
                tags.append("PUNCT")
            elif token.kind != "word":
                tags.append("X")
            else:
                tags.append(self._tag_word(token.lower))
        return tags

    def _tag_word(self, word: str) -> str:
        tag = self.lexicon.get(word)
        if tag is not None:
            return tag
        for suffix, suffix_tag in self.suffix_rules:
            # demand at least two extra characters so the suffix is a real affix
            if len(word) > len(suffix) + 1 and word.endswith(suffix):
                return suffix_tag
        return "NOUN"


@lru_cache(maxsize=1)
def default_tagger() -> RuleTagger:
    return RuleTagger()


def pos_tag(tokens: Sequence[Token], tagger=None) -> list[str]:
    """Tag tokens with the given tagger (an object with .tag or a callable)."""
    if tagger is None:
        tagger = default_tagger()
    tag = getattr(tagger, "tag", tagger)
    return list(tag(tokens))


def analyze(text: str,
            tagger=None,
            abbreviations: frozenset | None = None) -> DocumentAnalysis:
    """Run the full pipeline of primitives over one text."""
    tokens = tuple(tokenize(text))
    sentences = tuple(split_sentences(tokens, abbreviations))
    paragraphs = tuple(split_paragraphs(text, sentences, tokens))
    phrases = tuple(split_phrases(tokens, sentences))
    tags = tuple(pos_tag(tokens, tagger))
    syllables = tuple(count_syllables(t.surface)
                      for t in tokens if t.kind == "word")
    return DocumentAnalysis(
        text=text,
        tokens=tokens,
        sentences=sentences,
        paragraphs=paragraphs,
        phrases=phrases,
        pos_tags=tags,
        syllable_counts=syllables,
        char_counts=classify_chars(text),
    )

"""Scored argument corpus: loading, validation, gold scores, topic-wise splits.

Each argument carries a topic id, its text, and integer scores in {1, 2, 3}
from three annotators on 15 quality dimensions. All orderings (arguments,
topics, folds) are lexicographic so downstream experiments are reproducible.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping


class QualityDimension(Enum):
    """The 15 quality dimensions, in report column order."""

    # logical quality
    COGENCY = "Cog"
    LOCAL_ACCEPTABILITY = "LAc"
    LOCAL_RELEVANCE = "LRe"
    LOCAL_SUFFICIENCY = "LSu"
    # rhetorical quality
    EFFECTIVENESS = "Eff"
    CLARITY = "Cla"
    CREDIBILITY = "Cre"
    APPROPRIATENESS = "App"
    EMOTIONAL_APPEAL = "Emo"
    ARRANGEMENT = "Arr"
    # dialectical quality
    REASONABLENESS = "Rea"
    GLOBAL_ACCEPTABILITY = "GAc"
    GLOBAL_RELEVANCE = "GRe"
    GLOBAL_SUFFICIENCY = "GSu"
    # overall
    OVERALL = "OvQ"


DIMENSIONS = tuple(QualityDimension)

DIMENSION_GROUPS = (
    ("Logical quality", DIMENSIONS[0:4]),
    ("Rhetorical quality", DIMENSIONS[4:10]),
    ("Dialectical quality", DIMENSIONS[10:14]),
    ("", DIMENSIONS[14:15]),
)

EXPERTS = (1, 2, 3)

#: Scores of the three annotators for one dimension, ordered by annotator id.
ScoreTriple = tuple[int, int, int]


class CorpusError(Exception):
    """Base class for corpus loading problems."""


class SchemaError(CorpusError):
    """The input file does not have the expected columns."""


class ValidationError(CorpusError):
    """A row violates the corpus invariants (score range, duplicate id, ...)."""


@dataclass(frozen=True)
class Argument:
    """One argument text with its per-annotator score sheet."""

    id: str
    topic: str
    text: str
    scores: Mapping[QualityDimension, ScoreTriple]

    def score(self, dimension: QualityDimension, expert: int) -> int:
        return self.scores[dimension][expert - 1]


@dataclass(frozen=True)
class Corpus:
    """Immutable argument collection, sorted by argument id."""

    arguments: tuple[Argument, ...]
    by_id: Mapping[str, Argument] = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "by_id", {a.id: a for a in self.arguments})

    @property
    def topics(self) -> tuple[str, ...]:
        return tuple(sorted({a.topic for a in self.arguments}))

    def __len__(self) -> int:
        return len(self.arguments)

    def __iter__(self):
        return iter(self.arguments)


@dataclass(frozen=True)
class TopicFold:
    """One leave-one-topic-out (or inner CV) fold."""

    held_out_topic: str
    train: tuple[str, ...]
    test: tuple[str, ...]


@dataclass(frozen=True)
class ColumnMapping:
    """Maps corpus-file columns to the loader's logical fields.

    score_columns must cover all 45 (dimension, expert) pairs. The optional
    filter keeps only rows whose filter_column cell equals filter_value
    (string comparison), for source files that mark a usable subset.
    """

    id: str
    topic: str
    text: str
    score_columns: Mapping[tuple[QualityDimension, int], str]
    filter_column: str | None = None
    filter_value: str | None = None

    @classmethod
    def from_template(
        cls,
        id_column: str = "id",
        topic_column: str = "topic",
        text_column: str = "text",
        score_template: str = "{dim}:{expert}",
        filter_column: str | None = None,
        filter_value: str | None = None,
    ) -> "ColumnMapping":
        """Build the 45 score-column names from a template.

        The template may use {dim} (dimension abbreviation, e.g. "Cog") and
        {expert} (annotator id 1..3).
        """
        columns = {
            (dim, expert): score_template.format(dim=dim.value, expert=expert)
            for dim in DIMENSIONS
            for expert in EXPERTS
        }
        return cls(id_column, topic_column, text_column, columns,
                   filter_column, filter_value)


def _parse_score(raw: str, row_id: str, column: str) -> int:
    value = raw.strip()
    try:
        # accept integer-valued floats ("2.0"), common in exported sheets
        number = float(value)
    except ValueError:
        raise ValidationError(
            f"row {row_id!r}: score column {column!r} has non-numeric value {raw!r}")
    score = int(number)
    if score != number or score not in (1, 2, 3):
        raise ValidationError(
            f"row {row_id!r}: score column {column!r} has value {raw!r}, "
            "expected an integer in {1, 2, 3}")
    return score


def load_corpus(path: str | Path, mapping: ColumnMapping) -> Corpus:
    """Load a delimited corpus file (comma or tab, auto-detected by header)."""
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"corpus file not found: {path}")
    with open(path, encoding="utf-8", newline="") as handle:
        header_line = handle.readline()
        if not header_line:
            raise SchemaError(f"corpus file is empty: {path}")
        delimiter = "\t" if "\t" in header_line else ","
        handle.seek(0)
        reader = csv.DictReader(handle, delimiter=delimiter)
        columns = reader.fieldnames or []
        needed = [mapping.id, mapping.topic, mapping.text]
        needed += [mapping.score_columns[(dim, ex)]
                   for dim in DIMENSIONS for ex in EXPERTS]
        if mapping.filter_column:
            needed.append(mapping.filter_column)
        for column in needed:
            if column not in columns:
                raise SchemaError(f"corpus file {path} is missing column {column!r}")
        arguments = []
        for row in reader:
            if mapping.filter_column:
                if row[mapping.filter_column] != mapping.filter_value:
                    continue
            arg_id = (row[mapping.id] or "").strip()
            if not arg_id:
                raise ValidationError("row with empty id column")
            topic = (row[mapping.topic] or "").strip()
            if not topic:
                raise ValidationError(f"row {arg_id!r}: empty topic")
            text = row[mapping.text] or ""
            if not text.strip():
                raise ValidationError(f"row {arg_id!r}: empty text")
            scores = {}
            for dim in DIMENSIONS:
                triple = tuple(
                    _parse_score(row[mapping.score_columns[(dim, ex)]], arg_id,
                                 mapping.score_columns[(dim, ex)])
                    for ex in EXPERTS)
                scores[dim] = triple
            arguments.append(Argument(arg_id, topic, text, scores))
    return build_corpus(arguments)


def build_corpus(arguments: Iterable[Argument]) -> Corpus:
    """Sort, check invariants, and freeze a corpus."""
    ordered = tuple(sorted(arguments, key=lambda a: a.id))
    if not ordered:
        raise ValidationError("corpus has no arguments")
    seen = set()
    for arg in ordered:
        if arg.id in seen:
            raise ValidationError(f"duplicate argument id {arg.id!r}")
        seen.add(arg.id)
        missing = [d.value for d in DIMENSIONS if d not in arg.scores]
        if missing:
            raise ValidationError(f"row {arg.id!r}: missing scores for {missing}")
    return Corpus(ordered)


def mean_score(argument: Argument, dimension: QualityDimension) -> float:
    """Arithmetic mean of the three annotator scores."""
    triple = argument.scores[dimension]
    return sum(triple) / 3.0


def majority_score(argument: Argument, dimension: QualityDimension) -> int:
    """Mode of the three annotator scores; the (1,2,3) three-way tie resolves to 2."""
    triple = argument.scores[dimension]
    for value in triple:
        if triple.count(value) >= 2:
            return value
    # all three distinct; on the 1-3 scale that is exactly {1,2,3} -> median 2
    return sorted(triple)[1]


def loto_splits(corpus: Corpus) -> list[TopicFold]:
    """One leave-one-topic-out fold per topic, ordered by topic id."""
    topics = corpus.topics
    if len(topics) < 2:
        raise ValidationError("leave-one-topic-out needs at least 2 topics")
    folds = []
    for topic in topics:
        test = tuple(a.id for a in corpus.arguments if a.topic == topic)
        train = tuple(a.id for a in corpus.arguments if a.topic != topic)
        folds.append(TopicFold(topic, train, test))
    return folds


def inner_cv_splits(train_ids: Iterable[str], corpus: Corpus) -> list[TopicFold]:
    """Topic-wise inner CV folds over a training set: one fold per topic."""
    train_ids = sorted(train_ids)
    args = [corpus.by_id[i] for i in train_ids]
    topics = sorted({a.topic for a in args})
    if len(topics) < 2:
        raise ValidationError("inner CV needs at least 2 training topics")
    folds = []
    for topic in topics:
        validation = tuple(a.id for a in args if a.topic == topic)
        rest = tuple(a.id for a in args if a.topic != topic)
        folds.append(TopicFold(topic, rest, validation))
    return folds


def _argument_record(argument: Argument) -> dict:
    return {
        "id": argument.id,
        "topic": argument.topic,
        "text": argument.text,
        "scores": {d.value: list(argument.scores[d]) for d in DIMENSIONS},
    }


def dump_jsonl(corpus: Corpus, path: str | Path) -> None:
    """Write the canonical JSON-lines dump (one argument per line, sorted by id)."""
    with open(path, "w", encoding="utf-8") as handle:
        for argument in corpus.arguments:
            handle.write(json.dumps(_argument_record(argument),
                                    sort_keys=True, ensure_ascii=True))
            handle.write("\n")


def load_jsonl(path: str | Path) -> Corpus:
    """Load a corpus from its canonical JSON-lines dump."""
    arguments = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            record = json.loads(line)
            scores = {}
            for dim in DIMENSIONS:
                triple = record["scores"][dim.value]
                for value in triple:
                    if value not in (1, 2, 3):
                        raise ValidationError(
                            f"row {record['id']!r}: score {value!r} out of range")
                scores[dim] = tuple(triple)
            arguments.append(Argument(record["id"], record["topic"],
                                      record["text"], scores))
    return build_corpus(arguments)


def corpus_fingerprint(corpus: Corpus) -> str:
    """sha256 over the canonical dump; identifies the exact corpus content."""
    digest = hashlib.sha256()
    for argument in corpus.arguments:
        digest.update(json.dumps(_argument_record(argument), sort_keys=True,
                                 ensure_ascii=True).encode("ascii"))
        digest.update(b"\n")
    return digest.hexdigest()

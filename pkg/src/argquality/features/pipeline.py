"""Fitting the extractor families on a training fold and transforming text.

A FittedPipeline is a pure function of (config, training arguments): it
retains the n-gram vocabularies whose training document frequency clears
the configured thresholds, and standardizes every feature with training
moments. A CorpusIndex precomputes each document's gram counts and
training-independent feature values once, so that the many per-fold refits
of an experiment stay cheap; fitting through an index and fitting from the
raw arguments produce identical pipelines.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ..corpus import Argument
from ..textproc import DocumentAnalysis, analyze
from .config import FAMILIES, ConfigurationError, ExtractorConfig
from .embeddings import EmbeddingTable, load_embeddings
from .evidence import extract_evidence
from .families import (
    CASE_FEATURES,
    CHAR_CLASS_FEATURES,
    LENGTH_RATIO_PAIRS,
    LENGTH_UNITS,
    LEXICON_FEATURES,
    PRONOUN_FEATURES,
    SPELL_FEATURES,
    char_grams,
    enumeration_per_sentence,
    extract_content,
    extract_embedding,
    extract_length,
    extract_structure,
    extract_style,
    extract_subjectivity,
    extract_textquality,
    first_gram,
    sequence_grams,
    slot_denominator,
)
from .lexicons import LexiconSet, load_lexicons
from .readability import READABILITY_SCORE_IDS
from .spelling import spell_errors

#: Feature name -> value; the in-memory form of one extracted vector.
FeatureVector = dict

_DF_EPSILON = 1e-9

STATIC_FAMILIES = ("embedding", "length", "textquality", "evidence",
                   "subjectivity")
DYNAMIC_FAMILIES = ("content", "style", "structure")


@dataclass(frozen=True)
class GramType:
    type_id: str
    family: str
    prefix: str
    source: str  # "words" | "tags" | "chars" | "first"
    n: int
    threshold_attr: str
    fractional: bool


GRAM_TYPES = (
    GramType("w1", "content", "content:w1:", "words", 1, "content_min_df", True),
    GramType("w2", "content", "content:w2:", "words", 2, "content_min_df", True),
    GramType("w3", "content", "content:w3:", "words", 3, "content_min_df", True),
    GramType("p1", "style", "style:p1:", "tags", 1, "style_pos_min_df", True),
    GramType("p2", "style", "style:p2:", "tags", 2, "style_pos_min_df", True),
    GramType("p3", "style", "style:p3:", "tags", 3, "style_pos_min_df", True),
    GramType("c1", "style", "style:c1:", "chars", 1, "style_char_min_df", True),
    GramType("c2", "style", "style:c2:", "chars", 2, "style_char_min_df", True),
    GramType("c3", "style", "style:c3:", "chars", 3, "style_char_min_df", True),
    GramType("first1", "structure", "structure:first1:", "first", 1,
             "structure_first_min_count", False),
    GramType("first2", "structure", "structure:first2:", "first", 2,
             "structure_first_min_count", False),
    GramType("first3", "structure", "structure:first3:", "first", 3,
             "structure_first_min_count", False),
)

GRAM_TYPES_BY_ID = {g.type_id: g for g in GRAM_TYPES}

FAMILY_GRAM_TYPES = {
    "content": ("w1", "w2", "w3"),
    "style": ("p1", "p2", "p3", "c1", "c2", "c3"),
    "structure": ("first1", "first2", "first3"),
}


@dataclass(frozen=True)
class Resources:
    """Loaded lexicons and the optional embedding table."""

    lexicons: LexiconSet
    embedding: EmbeddingTable | None

    @property
    def embedding_hash(self) -> str | None:
        return self.embedding.content_hash if self.embedding else None


def load_resources(config: ExtractorConfig) -> Resources:
    lexicons = load_lexicons(config)
    embedding = None
    if config.embedding_path:
        embedding = load_embeddings(config.embedding_path, config.embedding_dim)
    return Resources(lexicons, embedding)


def available_families(resources: Resources) -> tuple[str, ...]:
    """All families the loaded resources can support."""
    if resources.embedding is None:
        return tuple(f for f in FAMILIES if f != "embedding")
    return FAMILIES


def static_feature_names(family: str, config: ExtractorConfig,
                         resources: Resources) -> tuple[str, ...]:
    """The fixed (training-independent) feature names of a static family."""
    if family == "embedding":
        table = resources.embedding
        if table is None:
            raise ConfigurationError("embedding family needs an embedding file")
        width = len(str(table.dim - 1))
        return tuple(f"embedding:d{i:0{width}d}" for i in range(table.dim))
    if family == "length":
        names = [f"length:count:{u}" for u in LENGTH_UNITS]
        names += [f"length:ratio:{a}_per_{b}" for a, b in LENGTH_RATIO_PAIRS]
        return tuple(names)
    if family == "textquality":
        names = [f"textquality:read:{sid}" for sid in READABILITY_SCORE_IDS]
        names.append("textquality:degenerate")
        names += [f"textquality:spell:{s}" for s in SPELL_FEATURES]
        return tuple(names)
    if family == "evidence":
        return ("evidence:share:thesis", "evidence:share:conclusion",
                "evidence:share:premise", "evidence:share:none",
                "evidence:links_per_sentence")
    if family == "subjectivity":
        names = [f"subjectivity:pronoun:{k}" for k in PRONOUN_FEATURES]
        names += [f"subjectivity:lex:{k}" for k in LEXICON_FEATURES]
        names += [f"subjectivity:emoji:{e}" for e in resources.lexicons.emojis]
        names += [f"subjectivity:case:{k}" for k in CASE_FEATURES]
        names += [f"subjectivity:chars:{k}" for k in CHAR_CLASS_FEATURES]
        return tuple(names)
    raise ValueError(f"{family!r} is not a static family")


def static_feature_values(family: str, analysis: DocumentAnalysis,
                          config: ExtractorConfig,
                          resources: Resources) -> FeatureVector:
    if family == "embedding":
        return extract_embedding(analysis, resources.embedding)
    if family == "length":
        return extract_length(analysis)
    if family == "textquality":
        counts = spell_errors(analysis, config, resources.lexicons)
        return extract_textquality(analysis, counts)
    if family == "evidence":
        return extract_evidence(analysis, resources.lexicons)
    if family == "subjectivity":
        return extract_subjectivity(analysis, resources.lexicons)
    raise ValueError(f"{family!r} is not a static family")


class CorpusIndex:
    """Per-document gram counts and static features, computed once.

    Rows follow the order of the arguments given to build(). All values
    are training-independent; fold fitting only selects vocabulary rows
    and standardizes.
    """

    def __init__(self, arg_ids, gram_names, doc_gram_ids, doc_gram_counts,
                 doc_denominators, first_ids, enum_density, static_names,
                 static_matrix, static_slices, families, config, resources):
        self.arg_ids = arg_ids
        self.row_of = {arg_id: row for row, arg_id in enumerate(arg_ids)}
        self.enum_density = enum_density        # per-row enumeration density
        self.gram_names = gram_names            # type_id -> list of gram strings
        self.doc_gram_ids = doc_gram_ids        # type_id -> list of int arrays
        self.doc_gram_counts = doc_gram_counts  # type_id -> list of float arrays
        self.doc_denominators = doc_denominators  # type_id -> float array
        self.first_ids = first_ids              # type_id -> int array (-1 = none)
        self.static_names = static_names
        self.static_matrix = static_matrix
        self.static_slices = static_slices      # family -> slice
        self.families = families
        self.config = config
        self.resources = resources
        self._gram_id_maps = {}

    @classmethod
    def build(cls, arguments: Sequence[Argument], config: ExtractorConfig,
              resources: Resources | None = None,
              analyses: Mapping[str, DocumentAnalysis] | None = None,
              families: Sequence[str] | None = None) -> "CorpusIndex":
        if not arguments:
            raise ConfigurationError("cannot index an empty argument set")
        resources = resources or load_resources(config)
        families = tuple(families or available_families(resources))
        unknown = set(families) - set(FAMILIES)
        if unknown:
            raise ConfigurationError(f"unknown families: {sorted(unknown)}")
        if "embedding" in families and resources.embedding is None:
            raise ConfigurationError("embedding family needs an embedding file")

        arg_ids = tuple(a.id for a in arguments)
        gram_ids: dict[str, dict] = {g.type_id: {} for g in GRAM_TYPES}
        doc_gram_ids = {g.type_id: [] for g in GRAM_TYPES}
        doc_gram_counts = {g.type_id: [] for g in GRAM_TYPES}
        doc_denominators = {g.type_id: [] for g in GRAM_TYPES}
        first_ids = {g.type_id: [] for g in GRAM_TYPES if g.source == "first"}
        enum_density = []

        static_families = tuple(f for f in STATIC_FAMILIES if f in families)
        static_names = []
        static_slices = {}
        for family in static_families:
            names = static_feature_names(family, config, resources)
            static_slices[family] = slice(len(static_names),
                                          len(static_names) + len(names))
            static_names.extend(names)
        static_matrix = np.zeros((len(arguments), len(static_names)))

        for row, argument in enumerate(arguments):
            if analyses is not None:
                analysis = analyses[argument.id]
            else:
                analysis = analyze(argument.text)
            lowers = [t.lower for t in analysis.tokens]
            tags = list(analysis.pos_tags)
            text_lower = analysis.text.lower()
            token_count = len(analysis.tokens)

            for gram_type in GRAM_TYPES:
                ids_of = gram_ids[gram_type.type_id]
                if gram_type.source == "first":
                    gram = first_gram(lowers, gram_type.n)
                    if gram is None:
                        first_ids[gram_type.type_id].append(-1)
                    else:
                        first_ids[gram_type.type_id].append(
                            ids_of.setdefault(gram, len(ids_of)))
                    continue
                if gram_type.source == "words":
                    counts = sequence_grams(lowers, gram_type.n)
                    denominator = float(token_count)
                elif gram_type.source == "tags":
                    counts = sequence_grams(tags, gram_type.n)
                    denominator = float(slot_denominator(len(tags), gram_type.n))
                else:
                    counts = char_grams(text_lower, gram_type.n)
                    denominator = float(slot_denominator(len(text_lower),
                                                         gram_type.n))
                ids = np.fromiter(
                    (ids_of.setdefault(g, len(ids_of)) for g in counts),
                    dtype=np.int64, count=len(counts))
                values = np.fromiter(counts.values(), dtype=np.float64,
                                     count=len(counts))
                doc_gram_ids[gram_type.type_id].append(ids)
                doc_gram_counts[gram_type.type_id].append(values)
                doc_denominators[gram_type.type_id].append(denominator)

            enum_density.append(enumeration_per_sentence(analysis,
                                                         resources.lexicons))

            for family in static_families:
                block = static_slices[family]
                values = static_feature_values(family, analysis, config,
                                               resources)
                names = static_names[block]
                static_matrix[row, block] = [values[name] for name in names]

        gram_names = {}
        for gram_type in GRAM_TYPES:
            ordered = [""] * len(gram_ids[gram_type.type_id])
            for gram, gram_id in gram_ids[gram_type.type_id].items():
                ordered[gram_id] = gram
            gram_names[gram_type.type_id] = ordered

        return cls(
            arg_ids=arg_ids,
            gram_names=gram_names,
            doc_gram_ids=doc_gram_ids,
            doc_gram_counts=doc_gram_counts,
            doc_denominators={k: np.array(v) for k, v in doc_denominators.items()},
            first_ids={k: np.array(v, dtype=np.int64)
                       for k, v in first_ids.items()},
            enum_density=np.array(enum_density),
            static_names=tuple(static_names),
            static_matrix=static_matrix,
            static_slices=static_slices,
            families=families,
            config=config,
            resources=resources,
        )

    def rows_for(self, arg_ids: Sequence[str]) -> np.ndarray:
        return np.array([self.row_of[i] for i in arg_ids], dtype=np.int64)

    def gram_id_map(self, type_id: str) -> dict:
        cached = self._gram_id_maps.get(type_id)
        if cached is None:
            cached = {g: i for i, g in enumerate(self.gram_names[type_id])}
            self._gram_id_maps[type_id] = cached
        return cached

    def document_frequencies(self, type_id: str, rows: np.ndarray) -> np.ndarray:
        """How many of the given documents contain each gram id."""
        size = len(self.gram_names[type_id])
        gram_type = GRAM_TYPES_BY_ID[type_id]
        if gram_type.source == "first":
            ids = self.first_ids[type_id][rows]
            ids = ids[ids >= 0]
        else:
            per_doc = self.doc_gram_ids[type_id]
            arrays = [per_doc[r] for r in rows]
            ids = np.concatenate(arrays) if arrays else np.empty(0, np.int64)
        if size == 0 or len(ids) == 0:
            return np.zeros(size, dtype=np.int64)
        return np.bincount(ids, minlength=size)

    def select_vocabulary(self, type_id: str, rows: np.ndarray) -> tuple[str, ...]:
        """Grams clearing the configured threshold, sorted by name."""
        gram_type = GRAM_TYPES_BY_ID[type_id]
        frequencies = self.document_frequencies(type_id, rows)
        threshold = getattr(self.config, gram_type.threshold_attr)
        if gram_type.fractional:
            minimum = threshold * len(rows) - _DF_EPSILON
        else:
            minimum = float(threshold)
        names = self.gram_names[type_id]
        selected = [names[i] for i in np.nonzero(frequencies >= minimum)[0]]
        return tuple(sorted(selected))

    def gram_value_matrix(self, type_id: str, rows: np.ndarray,
                          vocabulary: Sequence[str]) -> np.ndarray:
        """Dense (rows x vocabulary) matrix of normalized gram values."""
        gram_type = GRAM_TYPES_BY_ID[type_id]
        id_map = self.gram_id_map(type_id)
        matrix = np.zeros((len(rows), len(vocabulary)))
        if not vocabulary:
            return matrix
        column_of = np.full(len(id_map) + 1, -1, dtype=np.int64)
        for column, gram in enumerate(vocabulary):
            gram_id = id_map.get(gram)
            if gram_id is not None:
                column_of[gram_id] = column
        if gram_type.source == "first":
            ids = self.first_ids[type_id][rows]
            for r, gram_id in enumerate(ids):
                if gram_id >= 0 and column_of[gram_id] >= 0:
                    matrix[r, column_of[gram_id]] = 1.0
            return matrix
        denominators = self.doc_denominators[type_id][rows]
        for r, row in enumerate(rows):
            if denominators[r] == 0:
                continue
            ids = self.doc_gram_ids[type_id][row]
            counts = self.doc_gram_counts[type_id][row]
            columns = column_of[ids]
            mask = columns >= 0
            matrix[r, columns[mask]] = counts[mask] / denominators[r]
        return matrix


@dataclass(frozen=True)
class FittedPipeline:
    """Immutable result of fitting the extractors on one training fold."""

    config: ExtractorConfig
    resources: Resources = field(repr=False, compare=False)
    enabled_families: tuple[str, ...] = ()
    training_ids: tuple[str, ...] = ()
    vocabularies: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    feature_names: tuple[str, ...] = ()
    family_slices: Mapping[str, slice] = field(default_factory=dict)
    means: np.ndarray = field(default=None, repr=False)
    scales: np.ndarray = field(default=None, repr=False)
    fingerprint: str = ""
    train_matrix: np.ndarray | None = field(default=None, repr=False,
                                            compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_vocabulary_sets", {})
        object.__setattr__(
            self, "_column_of",
            {name: i for i, name in enumerate(self.feature_names)})

    def vocabulary_set(self, type_id: str) -> frozenset:
        cached = self._vocabulary_sets.get(type_id)
        if cached is None:
            cached = frozenset(self.vocabularies.get(type_id, ()))
            self._vocabulary_sets[type_id] = cached
        return cached

    def family_feature_names(self, family: str) -> tuple[str, ...]:
        return self.feature_names[self.family_slices[family]]

    def serialize(self) -> str:
        """Canonical JSON identifying this pipeline bit-exactly."""
        record = {
            "settings": self.config.scalar_settings(),
            "lexicon_hashes": self.resources.lexicons.hashes,
            "embedding_hash": self.resources.embedding_hash,
            "enabled_families": list(self.enabled_families),
            "training_ids": list(self.training_ids),
            "vocabularies": {k: list(v)
                             for k, v in sorted(self.vocabularies.items())},
            "means": self.means.tolist(),
            "scales": self.scales.tolist(),
        }
        return json.dumps(record, sort_keys=True, ensure_ascii=False)


def _require_families(pipeline_families, requested) -> tuple[str, ...]:
    requested = tuple(requested)
    missing = set(requested) - set(pipeline_families)
    if missing:
        raise ConfigurationError(
            f"families not fitted in this pipeline: {sorted(missing)}")
    # canonical order regardless of how the subset was written
    return tuple(f for f in FAMILIES if f in requested)


def raw_family_matrix(index: CorpusIndex, rows: np.ndarray, family: str,
                      vocabularies: Mapping[str, Sequence[str]]) -> np.ndarray:
    """Unstandardized feature block of one family for the given rows."""
    if family in STATIC_FAMILIES:
        return index.static_matrix[rows][:, index.static_slices[family]]
    blocks = []
    if family == "structure":
        blocks.append(index.enum_density[rows].reshape(-1, 1))
    for type_id in FAMILY_GRAM_TYPES[family]:
        blocks.append(index.gram_value_matrix(type_id, rows,
                                              vocabularies.get(type_id, ())))
    return np.hstack(blocks)


def fit(config: ExtractorConfig, training_arguments: Sequence[Argument],
        families: Sequence[str] | None = None,
        analyses: Mapping[str, DocumentAnalysis] | None = None,
        resources: Resources | None = None,
        index: CorpusIndex | None = None,
        keep_train_matrix: bool = False) -> FittedPipeline:
    """Fit vocabularies and standardization on the training arguments."""
    training_arguments = list(training_arguments)
    if not training_arguments:
        raise ConfigurationError("fit needs at least one training argument")
    if index is None:
        resources = resources or load_resources(config)
        enabled = tuple(families or available_families(resources))
        index = CorpusIndex.build(training_arguments, config, resources,
                                  analyses, enabled)
    else:
        resources = index.resources
        enabled = tuple(families or index.families)
        missing = set(enabled) - set(index.families)
        if missing:
            raise ConfigurationError(
                f"index was built without families: {sorted(missing)}")
    if "embedding" in enabled and resources.embedding is None:
        raise ConfigurationError("embedding family needs an embedding file")
    enabled = tuple(f for f in FAMILIES if f in enabled)

    training_ids = tuple(a.id for a in training_arguments)
    rows = index.rows_for(training_ids)

    vocabularies = {}
    for family in enabled:
        for type_id in FAMILY_GRAM_TYPES.get(family, ()):
            vocabularies[type_id] = index.select_vocabulary(type_id, rows)

    feature_names: list[str] = []
    family_slices = {}
    blocks = []
    for family in enabled:
        start = len(feature_names)
        if family in STATIC_FAMILIES:
            feature_names.extend(index.static_names[index.static_slices[family]])
        else:
            if family == "structure":
                feature_names.append("structure:enum_per_sentence")
            for type_id in FAMILY_GRAM_TYPES[family]:
                prefix = GRAM_TYPES_BY_ID[type_id].prefix
                feature_names.extend(prefix + g for g in vocabularies[type_id])
        family_slices[family] = slice(start, len(feature_names))
        blocks.append(raw_family_matrix(index, rows, family, vocabularies))

    matrix = np.hstack(blocks) if blocks else np.zeros((len(rows), 0))
    means = matrix.mean(axis=0) if matrix.size else np.zeros(matrix.shape[1])
    stds = matrix.std(axis=0) if matrix.size else np.zeros(matrix.shape[1])
    scales = np.where(stds == 0.0, 1.0, stds)

    pipeline = FittedPipeline(
        config=config,
        resources=resources,
        enabled_families=enabled,
        training_ids=training_ids,
        vocabularies=vocabularies,
        feature_names=tuple(feature_names),
        family_slices=family_slices,
        means=means,
        scales=scales,
    )
    fingerprint = hashlib.sha256(pipeline.serialize().encode("utf-8")).hexdigest()
    object.__setattr__(pipeline, "fingerprint", fingerprint)
    if keep_train_matrix:
        object.__setattr__(pipeline, "train_matrix",
                           (matrix - means) / scales)
    return pipeline


def restore_pipeline(record: Mapping, config: ExtractorConfig,
                     resources: Resources | None = None) -> FittedPipeline:
    """Rebuild a fitted pipeline from its parsed serialize() record.

    Feature names and family layout are reconstructed with the same rules
    fit() uses; the fingerprint is recomputed from the restored state, so a
    caller holding the original fingerprint can detect any drift in
    settings, lexicon files, or vocabulary since the pipeline was saved.
    Stored enabled_families/vocabulary order is preserved verbatim.
    """
    resources = resources or load_resources(config)
    enabled = tuple(record["enabled_families"])
    unknown = set(enabled) - set(FAMILIES)
    if unknown:
        raise ConfigurationError(f"unknown families in record: {sorted(unknown)}")
    if "embedding" in enabled and resources.embedding is None:
        raise ConfigurationError("embedding family needs an embedding file")
    vocabularies = {type_id: tuple(grams)
                    for type_id, grams in record["vocabularies"].items()}

    feature_names: list[str] = []
    family_slices = {}
    for family in enabled:
        start = len(feature_names)
        if family in STATIC_FAMILIES:
            feature_names.extend(static_feature_names(family, config, resources))
        else:
            if family == "structure":
                feature_names.append("structure:enum_per_sentence")
            for type_id in FAMILY_GRAM_TYPES[family]:
                prefix = GRAM_TYPES_BY_ID[type_id].prefix
                feature_names.extend(prefix + g
                                     for g in vocabularies.get(type_id, ()))
        family_slices[family] = slice(start, len(feature_names))

    means = np.asarray(record["means"], dtype=np.float64)
    scales = np.asarray(record["scales"], dtype=np.float64)
    if means.shape != (len(feature_names),) or scales.shape != means.shape:
        raise ConfigurationError(
            f"stored moments have {means.shape[0] if means.ndim else 0} "
            f"values but the restored layout has {len(feature_names)} features")

    pipeline = FittedPipeline(
        config=config,
        resources=resources,
        enabled_families=enabled,
        training_ids=tuple(record["training_ids"]),
        vocabularies=vocabularies,
        feature_names=tuple(feature_names),
        family_slices=family_slices,
        means=means,
        scales=scales,
    )
    fingerprint = hashlib.sha256(pipeline.serialize().encode("utf-8")).hexdigest()
    object.__setattr__(pipeline, "fingerprint", fingerprint)
    return pipeline


def transform_matrix(pipeline: FittedPipeline, index: CorpusIndex,
                     rows: np.ndarray,
                     families: Sequence[str] | None = None) -> np.ndarray:
    """Standardized feature matrix for the given index rows."""
    families = _require_families(pipeline.enabled_families,
                                 families or pipeline.enabled_families)
    blocks = []
    for family in families:
        block = raw_family_matrix(index, rows, family, pipeline.vocabularies)
        columns = pipeline.family_slices[family]
        blocks.append((block - pipeline.means[columns])
                      / pipeline.scales[columns])
    return np.hstack(blocks) if blocks else np.zeros((len(rows), 0))


def assemble(document: Argument | DocumentAnalysis, pipeline: FittedPipeline,
             families: Sequence[str] | None = None) -> FeatureVector:
    """Standardized feature vector of one document for the chosen families."""
    families = _require_families(pipeline.enabled_families,
                                 families or pipeline.enabled_families)
    if isinstance(document, DocumentAnalysis):
        analysis = document
    else:
        analysis = analyze(document.text)

    raw: FeatureVector = {}
    for family in families:
        if family in STATIC_FAMILIES:
            raw.update(static_feature_values(family, analysis, pipeline.config,
                                             pipeline.resources))
        elif family == "content":
            raw.update(extract_content(analysis, pipeline))
        elif family == "style":
            raw.update(extract_style(analysis, pipeline))
        else:
            raw.update(extract_structure(analysis, pipeline))

    values: FeatureVector = {}
    for family in families:
        columns = pipeline.family_slices[family]
        names = pipeline.feature_names[columns]
        means = pipeline.means[columns]
        scales = pipeline.scales[columns]
        for name, mean, scale in zip(names, means, scales):
            values[name] = (raw.get(name, 0.0) - mean) / scale
    return values

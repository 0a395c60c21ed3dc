"""Eight feature extractor families with strict train/test separation.

The public surface re-exports the extractor configuration, the fitted
pipeline with its fit/assemble entry points, and the per-family extract
operations.
"""

from .config import FAMILIES, READABILITY_SCORE_IDS, ConfigurationError, ExtractorConfig
from .evidence import AduLabel, classify_adus, extract_evidence
from .families import (
    extract_content,
    extract_embedding,
    extract_length,
    extract_structure,
    extract_style,
    extract_subjectivity,
)
from .lexicons import LexiconSet, load_lexicons
from .pipeline import (
    CorpusIndex,
    FeatureVector,
    FittedPipeline,
    Resources,
    assemble,
    available_families,
    fit,
    load_resources,
    restore_pipeline,
    transform_matrix,
)
from .readability import ReadabilityResult, readability_scores
from .spelling import SpellCounts, SpellServiceError, spell_errors

__all__ = [
    "AduLabel",
    "ConfigurationError",
    "CorpusIndex",
    "ExtractorConfig",
    "FAMILIES",
    "FeatureVector",
    "FittedPipeline",
    "LexiconSet",
    "READABILITY_SCORE_IDS",
    "ReadabilityResult",
    "Resources",
    "SpellCounts",
    "SpellServiceError",
    "assemble",
    "available_families",
    "classify_adus",
    "extract_content",
    "extract_embedding",
    "extract_evidence",
    "extract_length",
    "extract_structure",
    "extract_style",
    "extract_subjectivity",
    "fit",
    "load_lexicons",
    "load_resources",
    "restore_pipeline",
    "readability_scores",
    "spell_errors",
    "transform_matrix",
]

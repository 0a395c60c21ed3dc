"""Sentence-level argumentative unit labels and the evidence features.

The default classifier is a marker heuristic: sentences containing a
premise marker are premises, then sentences with a conclusion marker are
conclusions, the first remaining sentence is the thesis, everything else
is none. Any callable with the same signature can replace it.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..textproc import DocumentAnalysis
from .lexicons import LexiconSet, has_phrase_match

ADU_TYPES = ("thesis", "conclusion", "premise", "none")


@dataclass(frozen=True)
class AduLabel:
    sentence_index: int
    label: str


def classify_adus(analysis: DocumentAnalysis,
                  lexicons: LexiconSet) -> list[AduLabel]:
    """One label per sentence via the marker heuristic.

    The first sentence carrying no marker becomes the thesis; later
    marker-less sentences are none.
    """
    labels = []
    thesis_assigned = False
    for index, (start, end) in enumerate(analysis.sentences):
        lowers = [t.lower for t in analysis.tokens[start:end]]
        if has_phrase_match(lowers, lexicons.premise_markers):
            label = "premise"
        elif has_phrase_match(lowers, lexicons.conclusion_markers):
            label = "conclusion"
        elif not thesis_assigned:
            label = "thesis"
            thesis_assigned = True
        else:
            label = "none"
        labels.append(AduLabel(index, label))
    return labels


def extract_evidence(analysis: DocumentAnalysis, lexicons: LexiconSet,
                     classifier=None) -> dict:
    """Label shares over sentences plus link tokens per sentence."""
    classify = classifier or classify_adus
    labels = classify(analysis, lexicons)
    sentence_count = len(analysis.sentences)
    values = {}
    for adu_type in ADU_TYPES:
        share = (sum(1 for l in labels if l.label == adu_type) / sentence_count
                 if sentence_count else 0.0)
        values[f"evidence:share:{adu_type}"] = share
    links = sum(1 for t in analysis.tokens if t.kind == "url")
    values["evidence:links_per_sentence"] = (links / sentence_count
                                             if sentence_count else 0.0)
    return values

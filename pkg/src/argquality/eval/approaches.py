"""Approach definitions for the three benchmark suites.

An approach names a prediction source (trained SVM, mean baseline, or an
expert's own scores), a feature family subset, a training target, the gold
standard its predictions are scored against, and whether predictions are
rounded to integers first. The suite builders below enumerate the rows of
each results table.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..features import FAMILIES

KINDS = ("svm", "baseline", "expert")
TARGETS = ("mean", "expert1", "expert2", "expert3", "majority")
GOLDS = ("mean", "expert1", "expert2", "expert3", "majority")


@dataclass(frozen=True)
class ApproachSpec:
    """One table row: prediction source, features, target, gold standard."""

    id: str
    kind: str = "svm"
    families: tuple[str, ...] = ()
    target: str = "mean"
    gold: str = "mean"
    rounding: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown approach kind {self.kind!r}")
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}")
        if self.gold not in GOLDS:
            raise ValueError(f"unknown gold standard {self.gold!r}")
        if self.kind != "svm" and self.families:
            raise ValueError(
                f"{self.kind} approaches ignore feature families")
        if self.kind == "svm" and not self.families:
            raise ValueError("an SVM approach needs at least one family")
        if self.kind == "expert" and not self.target.startswith("expert"):
            raise ValueError("an expert approach predicts that expert's "
                             "own scores; target must name the expert")
        unknown = set(self.families) - set(FAMILIES)
        if unknown:
            raise ValueError(f"unknown families: {sorted(unknown)}")


def single_family_approach(index: int) -> ApproachSpec:
    """A<i>: the i-th family alone (1-based, in canonical family order)."""
    family = FAMILIES[index - 1]
    return ApproachSpec(id=f"A{index}", families=(family,))


def ablation_approach(index: int) -> ApproachSpec:
    """A\\<i>: all families except the i-th one."""
    family = FAMILIES[index - 1]
    families = tuple(f for f in FAMILIES if f != family)
    return ApproachSpec(id=f"A\\{index}", families=families)


def all_features_approach(target: str = "mean", gold: str = "mean",
                          rounding: bool = False) -> ApproachSpec:
    return ApproachSpec(id="A1-8", families=FAMILIES, target=target,
                        gold=gold, rounding=rounding)


def baseline_approach(target: str = "mean", gold: str = "mean") -> ApproachSpec:
    return ApproachSpec(id="B", kind="baseline", target=target, gold=gold)


def q1_approaches() -> tuple[ApproachSpec, ...]:
    """Table rows of the feature/ablation suite: A1..A8, A\\1..A\\8, A1-8, B."""
    rows = [single_family_approach(i) for i in range(1, 9)]
    rows += [ablation_approach(i) for i in range(1, 9)]
    rows.append(all_features_approach())
    rows.append(baseline_approach())
    return tuple(rows)


@dataclass(frozen=True)
class SuiteRow:
    """A results-table row: an approach plus its significance reference."""

    row_id: str
    approach: ApproachSpec
    compare_to: str | None = None  # row_id of the significance reference


def q1_rows() -> tuple[SuiteRow, ...]:
    rows = []
    for approach in q1_approaches():
        compare = "B" if approach.id == "A1-8" else None
        rows.append(SuiteRow(approach.id, approach, compare))
    return tuple(rows)


def q2_rows() -> tuple[SuiteRow, ...]:
    """Mean-score rows replicated from Q1, then per-expert pairs."""
    rows = [
        SuiteRow("mean:A1-8", all_features_approach(), "mean:B"),
        SuiteRow("mean:B", baseline_approach(), None),
    ]
    for k in (1, 2, 3):
        target = f"expert{k}"
        rows.append(SuiteRow(f"{target}:A1-8",
                             all_features_approach(target, target),
                             f"{target}:B"))
        rows.append(SuiteRow(f"{target}:B", baseline_approach(target, target),
                             None))
    return tuple(rows)


def q3_rows(train_on_majority: bool = False) -> tuple[SuiteRow, ...]:
    """Experts as predictors of the majority score, then the rounded SVM."""
    rows = [SuiteRow(f"expert{k}",
                     ApproachSpec(id=f"expert{k}", kind="expert",
                                  target=f"expert{k}", gold="majority"),
                     "A1-8")
            for k in (1, 2, 3)]
    target = "majority" if train_on_majority else "mean"
    rows.append(SuiteRow("A1-8",
                         all_features_approach(target=target, gold="majority",
                                               rounding=True),
                         None))
    return tuple(rows)

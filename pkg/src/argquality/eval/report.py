"""Result containers and Markdown/CSV/JSON rendering for the suites.

A report is a grid of per-dimension results per table row. JSON output is
canonical (sorted keys, fixed indentation), so identical inputs produce
byte-identical files; the timestamp honors SOURCE_DATE_EPOCH when set.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Mapping

from .. import __version__
from ..corpus import DIMENSION_GROUPS, DIMENSIONS, Corpus, corpus_fingerprint
from ..features import FAMILIES
from .approaches import ApproachSpec
from .metrics import macro_mae
from .stats import SIGNIFICANCE_MARKS

DIMENSION_CODES = tuple(d.value for d in DIMENSIONS)
SUITES = ("q1", "q2", "q3")

#: Rendered placeholder for cells of a disabled approach.
DISABLED_CELL = "n/a"
#: Rendered flag for expert cells whose error exceeds the model's.
WORSE_FLAG = "°"


@dataclass(frozen=True)
class DimensionResult:
    """Fold MAEs of one table cell group: a row on one quality dimension."""

    dimension: str
    fold_maes: Mapping[str, float]
    mean_mae: float
    p_value: float | None = None
    significance: str = "none"

    def __post_init__(self):
        if self.dimension not in DIMENSION_CODES:
            raise ValueError(f"unknown dimension {self.dimension!r}")
        if not self.fold_maes:
            raise ValueError("a dimension result needs at least one fold")
        expected = macro_mae(self.fold_maes)
        if abs(self.mean_mae - expected) > 1e-9:
            raise ValueError(
                f"mean_mae {self.mean_mae!r} is not the unweighted fold mean "
                f"{expected!r}")
        if self.significance not in SIGNIFICANCE_MARKS:
            raise ValueError(f"unknown significance {self.significance!r}")

    @classmethod
    def from_folds(cls, dimension: str, fold_maes: Mapping[str, float],
                   p_value: float | None = None,
                   significance: str = "none") -> "DimensionResult":
        return cls(dimension, dict(fold_maes), macro_mae(fold_maes),
                   p_value, significance)


@dataclass(frozen=True)
class ReportRow:
    """One table row: the approach, what it ran on, and its results."""

    row_id: str
    approach: ApproachSpec
    effective_families: tuple[str, ...]
    compare_to: str | None = None
    disabled: bool = False
    results: Mapping[str, DimensionResult] = field(default_factory=dict)

    def __post_init__(self):
        if self.disabled and self.results:
            raise ValueError("a disabled row cannot carry results")
        if not self.disabled and set(self.results) != set(DIMENSION_CODES):
            raise ValueError(
                f"row {self.row_id!r} must cover all 15 dimensions")


@dataclass(frozen=True)
class ExperimentReport:
    """A full suite: ordered rows plus provenance."""

    suite: str
    rows: tuple[ReportRow, ...]
    provenance: Mapping[str, object]

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}")
        row_ids = [row.row_id for row in self.rows]
        if len(row_ids) != len(set(row_ids)):
            raise ValueError("duplicate row ids in report")

    def row(self, row_id: str) -> ReportRow:
        for row in self.rows:
            if row.row_id == row_id:
                return row
        raise KeyError(row_id)


def canonical_json(record: object) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False,
                      separators=(",", ":"))


def settings_hash(extractor_settings: Mapping[str, object],
                  training_settings: Mapping[str, object],
                  families: tuple[str, ...],
                  extra: Mapping[str, object] | None = None) -> str:
    record = {
        "extractor": dict(extractor_settings),
        "training": dict(training_settings),
        "families": list(families),
        "extra": dict(extra or {}),
    }
    return hashlib.sha256(canonical_json(record).encode("utf-8")).hexdigest()


def run_timestamp() -> str:
    """ISO-8601 UTC timestamp; SOURCE_DATE_EPOCH pins it for reproducibility."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        moment = datetime.fromtimestamp(int(epoch), tz=timezone.utc)
    else:
        moment = datetime.now(tz=timezone.utc)
    return moment.replace(microsecond=0).isoformat()


def build_provenance(corpus: Corpus, config_hash: str,
                     lexicon_hashes: Mapping[str, str],
                     embedding_hash: str | None) -> dict:
    return {
        "package": f"argquality {__version__}",
        "config_hash": config_hash,
        "corpus_hash": corpus_fingerprint(corpus),
        "lexicon_hashes": dict(lexicon_hashes),
        "embedding_hash": embedding_hash,
        "timestamp": run_timestamp(),
    }


# ------------------------------------------------------------ serialization

def _approach_record(approach: ApproachSpec) -> dict:
    return {
        "id": approach.id,
        "kind": approach.kind,
        "families": list(approach.families),
        "target": approach.target,
        "gold": approach.gold,
        "rounding": approach.rounding,
    }


def _result_record(result: DimensionResult) -> dict:
    return {
        "fold_maes": dict(result.fold_maes),
        "mean_mae": result.mean_mae,
        "p_value": result.p_value,
        "significance": result.significance,
    }


def report_to_json(report: ExperimentReport) -> str:
    record = {
        "suite": report.suite,
        "provenance": dict(report.provenance),
        "rows": [
            {
                "row_id": row.row_id,
                "approach": _approach_record(row.approach),
                "effective_families": list(row.effective_families),
                "compare_to": row.compare_to,
                "disabled": row.disabled,
                "results": {code: _result_record(result)
                            for code, result in row.results.items()},
            }
            for row in report.rows
        ],
    }
    return json.dumps(record, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def report_from_json(text: str) -> ExperimentReport:
    record = json.loads(text)
    rows = []
    for row in record["rows"]:
        approach = ApproachSpec(
            id=row["approach"]["id"],
            kind=row["approach"]["kind"],
            families=tuple(row["approach"]["families"]),
            target=row["approach"]["target"],
            gold=row["approach"]["gold"],
            rounding=row["approach"]["rounding"],
        )
        results = {
            code: DimensionResult(
                dimension=code,
                fold_maes=dict(cell["fold_maes"]),
                mean_mae=cell["mean_mae"],
                p_value=cell["p_value"],
                significance=cell["significance"],
            )
            for code, cell in row["results"].items()
        }
        rows.append(ReportRow(
            row_id=row["row_id"],
            approach=approach,
            effective_families=tuple(row["effective_families"]),
            compare_to=row["compare_to"],
            disabled=row["disabled"],
            results=results,
        ))
    return ExperimentReport(record["suite"], tuple(rows),
                            dict(record["provenance"]))


# ---------------------------------------------------------------- rendering

def row_label(report_suite: str, row: ReportRow) -> str:
    approach = row.approach
    if report_suite == "q3":
        if approach.kind == "expert":
            return f"Expert {approach.target[-1]}"
        return "All features (rounded)"
    if approach.kind == "baseline":
        base = "Baseline"
    elif len(approach.families) == 1:
        base = f"{approach.id} {approach.families[0]}"
    elif approach.id.startswith("A\\"):
        missing = set(FAMILIES) - set(approach.families)
        base = f"{approach.id} w/o {next(iter(missing))}"
    else:
        base = f"{approach.id} all features"
    if report_suite == "q2":
        prefix = row.row_id.split(":", 1)[0]
        label = "Mean score" if prefix == "mean" else f"Expert {prefix[-1]}"
        return f"{label}: {base}"
    return base


def _column_minima(report: ExperimentReport) -> dict:
    minima = {}
    for code in DIMENSION_CODES:
        values = [row.results[code].mean_mae for row in report.rows
                  if not row.disabled]
        minima[code] = min(values) if values else None
    return minima


def _q2_bold_cells(report: ExperimentReport) -> set:
    """(row_id, code) cells to bold: strongest significance per column."""
    order = {"none": 0, "p05": 1, "p01": 2}
    bold = set()
    for code in DIMENSION_CODES:
        best = 0
        for row in report.rows:
            if not row.disabled:
                best = max(best, order[row.results[code].significance])
        if best == 0:
            continue
        for row in report.rows:
            if not row.disabled and \
                    order[row.results[code].significance] == best:
                bold.add((row.row_id, code))
    return bold


def _format_cell(value: float, bold: bool, mark: str, flag: str = "") -> str:
    text = f"{value:.2f}"
    if bold:
        text = f"**{text}**"
    return text + mark + flag


def render_markdown(report: ExperimentReport) -> str:
    titles = {
        "q1": "Feature families and ablation (mean-score target)",
        "q2": "Per-expert assessment",
        "q3": "Experts vs. model against the majority score",
    }
    out = io.StringIO()
    out.write(f"# {titles[report.suite]}\n\n")
    out.write("MAE per quality dimension over leave-one-topic-out folds; "
              "lower is better.\n\n")
    groups = "; ".join(
        f"{label or 'Overall'}: {', '.join(d.value for d in dims)}"
        for label, dims in DIMENSION_GROUPS)
    out.write(f"Column groups: {groups}.\n\n")
    legend = ["**bold** = best value in the column"]
    if report.suite == "q2":
        legend = ["**bold** = strongest significance in the column"]
    legend.append("† p < .05, ‡ p < .01 (one-tailed)")
    if report.suite == "q3":
        legend.append(f"{WORSE_FLAG} = expert worse than the model")
    if any(row.disabled for row in report.rows):
        legend.append(f"{DISABLED_CELL} = disabled (embedding table not "
                      "configured)")
    out.write("Legend: " + "; ".join(legend) + ".\n\n")

    minima = _column_minima(report)
    q2_bold = _q2_bold_cells(report) if report.suite == "q2" else None
    svm_row = report.row("A1-8") if report.suite == "q3" else None

    out.write("| Approach | " + " | ".join(DIMENSION_CODES) + " |\n")
    out.write("| --- |" + " ---: |" * len(DIMENSION_CODES) + "\n")
    for row in report.rows:
        cells = []
        for code in DIMENSION_CODES:
            if row.disabled:
                cells.append(DISABLED_CELL)
                continue
            result = row.results[code]
            if q2_bold is not None:
                bold = (row.row_id, code) in q2_bold
            else:
                bold = result.mean_mae == minima[code]
            mark = SIGNIFICANCE_MARKS[result.significance]
            flag = ""
            if svm_row is not None and row.approach.kind == "expert" and \
                    result.mean_mae > svm_row.results[code].mean_mae:
                flag = WORSE_FLAG
            cells.append(_format_cell(result.mean_mae, bold, mark, flag))
        out.write(f"| {row_label(report.suite, row)} | "
                  + " | ".join(cells) + " |\n")

    prov = report.provenance
    out.write(f"\nProvenance: config `{str(prov['config_hash'])[:12]}`, "
              f"corpus `{str(prov['corpus_hash'])[:12]}`, "
              f"generated {prov['timestamp']} "
              f"({prov['package']}).\n")
    return out.getvalue()


def render_csv(report: ExperimentReport) -> str:
    lines = ["approach," + ",".join(DIMENSION_CODES)]
    for row in report.rows:
        cells = [row.row_id]
        for code in DIMENSION_CODES:
            if row.disabled:
                cells.append("")
            else:
                cells.append(f"{row.results[code].mean_mae:.6f}")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def render_report(report: ExperimentReport, fmt: str) -> str:
    if fmt == "md":
        return render_markdown(report)
    if fmt == "csv":
        return render_csv(report)
    if fmt == "json":
        return report_to_json(report)
    raise ValueError(f"unknown report format {fmt!r}")

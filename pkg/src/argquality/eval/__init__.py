"""Leave-one-topic-out evaluation: metrics, significance tests, suites."""

from .approaches import (
    ApproachSpec,
    SuiteRow,
    ablation_approach,
    all_features_approach,
    baseline_approach,
    q1_approaches,
    q1_rows,
    q2_rows,
    q3_rows,
    single_family_approach,
)
from .metrics import macro_mae, mae
from .report import (
    DIMENSION_CODES,
    DimensionResult,
    ExperimentReport,
    ReportRow,
    build_provenance,
    render_csv,
    render_markdown,
    render_report,
    report_from_json,
    report_to_json,
    row_label,
    run_timestamp,
    settings_hash,
)
from .runner import (
    EvalSettings,
    approach_disabled,
    compute_fold,
    effective_families,
    run_experiments,
    run_loto,
    run_q1,
    run_q2,
    run_q3,
    subset_key,
    target_series,
    train_models,
)
from .stats import (
    SIGNIFICANCE_MARKS,
    TTestResult,
    significance_level,
    student_t_cdf,
    t_test_one_tailed,
    t_test_paired,
)

__all__ = [
    "ApproachSpec",
    "DIMENSION_CODES",
    "DimensionResult",
    "EvalSettings",
    "ExperimentReport",
    "ReportRow",
    "SIGNIFICANCE_MARKS",
    "SuiteRow",
    "TTestResult",
    "ablation_approach",
    "all_features_approach",
    "approach_disabled",
    "baseline_approach",
    "build_provenance",
    "compute_fold",
    "effective_families",
    "macro_mae",
    "mae",
    "q1_approaches",
    "q1_rows",
    "q2_rows",
    "q3_rows",
    "render_csv",
    "render_markdown",
    "render_report",
    "report_from_json",
    "report_to_json",
    "row_label",
    "run_experiments",
    "run_loto",
    "run_q1",
    "run_q2",
    "run_q3",
    "run_timestamp",
    "settings_hash",
    "significance_level",
    "single_family_approach",
    "student_t_cdf",
    "subset_key",
    "t_test_one_tailed",
    "t_test_paired",
    "target_series",
    "train_models",
]

"""Evaluation package tests: metrics, approach grids, reports, suite runner.

The runner tests use the bundled mini corpus (4 topics, 40 arguments).
Fold-level MAEs of the trained approaches are cross-checked against
run_loto, an independent path through the learner's own model selection;
baseline rows are cross-checked against a direct numpy recomputation.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from argquality.corpus import (
    DIMENSIONS,
    Argument,
    Corpus,
    loto_splits,
    mean_score,
)
from argquality.eval import (
    ApproachSpec,
    DimensionResult,
    EvalSettings,
    ExperimentReport,
    ReportRow,
    ablation_approach,
    all_features_approach,
    approach_disabled,
    baseline_approach,
    macro_mae,
    mae,
    q1_approaches,
    q1_rows,
    q2_rows,
    q3_rows,
    render_csv,
    render_markdown,
    render_report,
    report_from_json,
    report_to_json,
    run_experiments,
    run_loto,
    run_q1,
    settings_hash,
    significance_level,
    single_family_approach,
    subset_key,
    t_test_paired,
    train_models,
)
from argquality.features import FAMILIES

CODES = tuple(d.value for d in DIMENSIONS)
SCHEMA_PATH = Path(__file__).parent.parent / "docs" / "report_schema.json"


# ------------------------------------------------------------------ metrics

def test_mae_examples():
    assert mae((1.5, 2.0), (2, 2)) == pytest.approx(0.25)
    assert mae((1, 3), (3, 1)) == pytest.approx(2.0)
    assert mae((2, 2, 2), (2, 2, 2)) == 0.0


def test_mae_validates_shapes():
    with pytest.raises(ValueError):
        mae((1, 2), (1, 2, 3))
    with pytest.raises(ValueError):
        mae((), ())
    with pytest.raises(ValueError):
        mae(np.ones((2, 2)), np.ones((2, 2)))


def test_macro_mae_is_unweighted_over_folds():
    # 10 documents at 0.2 and 2 documents at 0.4: the macro mean is 0.3,
    # not the document-weighted 0.2333.
    folds = {"big_topic": 0.2, "small_topic": 0.4}
    assert macro_mae(folds) == pytest.approx(0.3)
    assert macro_mae(folds) != pytest.approx((0.2 * 10 + 0.4 * 2) / 12)
    assert macro_mae([0.1, 0.2, 0.6]) == pytest.approx(0.3)


def test_macro_mae_rejects_empty():
    with pytest.raises(ValueError):
        macro_mae({})


# --------------------------------------------------------------- approaches

def test_single_family_and_ablation_sets():
    for i in range(1, 9):
        single = single_family_approach(i)
        assert single.id == f"A{i}"
        assert single.families == (FAMILIES[i - 1],)
        ablation = ablation_approach(i)
        assert ablation.id == f"A\\{i}"
        assert set(ablation.families) == set(FAMILIES) - {FAMILIES[i - 1]}


def test_q1_approach_grid():
    grid = q1_approaches()
    assert [a.id for a in grid] == (
        [f"A{i}" for i in range(1, 9)]
        + [f"A\\{i}" for i in range(1, 9)]
        + ["A1-8", "B"])
    assert grid[-2].families == FAMILIES
    assert grid[-1].kind == "baseline"


def test_approach_validation():
    with pytest.raises(ValueError):
        ApproachSpec(id="X", kind="svm", families=())
    with pytest.raises(ValueError):
        ApproachSpec(id="X", kind="baseline", families=("length",))
    with pytest.raises(ValueError):
        ApproachSpec(id="X", kind="svm", families=("length",), target="bogus")
    with pytest.raises(ValueError):
        ApproachSpec(id="X", kind="expert", target="mean")
    expert = ApproachSpec(id="E2", kind="expert", target="expert2",
                          gold="majority")
    assert expert.families == ()


def test_q2_row_layout():
    rows = q2_rows()
    assert [r.row_id for r in rows] == [
        "mean:A1-8", "mean:B",
        "expert1:A1-8", "expert1:B",
        "expert2:A1-8", "expert2:B",
        "expert3:A1-8", "expert3:B",
    ]
    assert rows[2].approach.target == "expert1"
    assert rows[2].approach.gold == "expert1"
    assert rows[2].compare_to == "expert1:B"
    assert rows[0].compare_to == "mean:B"


def test_q3_row_layout():
    rows = q3_rows()
    assert [r.row_id for r in rows] == ["expert1", "expert2", "expert3",
                                        "A1-8"]
    for row in rows[:3]:
        assert row.approach.kind == "expert"
        assert row.approach.gold == "majority"
        assert row.compare_to == "A1-8"
    svm = rows[3].approach
    assert svm.target == "mean" and svm.gold == "majority" and svm.rounding
    majority_rows = q3_rows(train_on_majority=True)
    assert majority_rows[3].approach.target == "majority"


def test_subset_keys_and_disabling():
    enabled_all = FAMILIES
    enabled_no_embedding = tuple(f for f in FAMILIES if f != "embedding")
    assert subset_key(all_features_approach(), enabled_all) == "all"
    assert subset_key(single_family_approach(5), enabled_all) == "only:length"
    assert subset_key(ablation_approach(2), enabled_all) == "without:embedding"
    assert subset_key(baseline_approach(), enabled_all) == "none"
    # without the embedding table, A2 dies and A\2 collapses into A1-8
    assert approach_disabled(single_family_approach(2), enabled_no_embedding)
    assert approach_disabled(ablation_approach(2), enabled_no_embedding)
    assert not approach_disabled(all_features_approach(),
                                 enabled_no_embedding)
    assert subset_key(all_features_approach(), enabled_no_embedding) == "all"
    assert subset_key(ablation_approach(2), enabled_all) == "without:embedding"


# ------------------------------------------------------------------ reports

def _result(code="Cog", folds=None, **kwargs):
    folds = folds or {"t1": 0.25, "t2": 0.35}
    return DimensionResult.from_folds(code, folds, **kwargs)


def test_dimension_result_validates_mean():
    with pytest.raises(ValueError):
        DimensionResult("Cog", {"t1": 0.2, "t2": 0.4}, mean_mae=0.2)
    with pytest.raises(ValueError):
        DimensionResult("Bogus", {"t1": 0.2}, mean_mae=0.2)
    with pytest.raises(ValueError):
        DimensionResult("Cog", {}, mean_mae=0.0)
    with pytest.raises(ValueError):
        _result(significance="p001")


def test_report_row_validation():
    approach = baseline_approach()
    full = {code: _result(code) for code in CODES}
    row = ReportRow("B", approach, (), results=full)
    assert not row.disabled
    with pytest.raises(ValueError):
        ReportRow("B", approach, (), results={"Cog": _result()})
    with pytest.raises(ValueError):
        ReportRow("B", approach, (), disabled=True,
                  results={"Cog": _result()})
    with pytest.raises(ValueError):
        ExperimentReport("q1", (row, row), {})


def test_settings_hash_sensitivity():
    base = settings_hash({"a": 1}, {"b": 2}, ("length",))
    assert settings_hash({"a": 1}, {"b": 2}, ("length",)) == base
    assert settings_hash({"a": 2}, {"b": 2}, ("length",)) != base
    assert settings_hash({"a": 1}, {"b": 3}, ("length",)) != base
    assert settings_hash({"a": 1}, {"b": 2}, ("content",)) != base
    assert settings_hash({"a": 1}, {"b": 2}, ("length",), {"x": 1}) != base


# ---------------------------------------------------------- paired t-test

def test_paired_ttest_frozen_references():
    # reference values from an independent statistical implementation
    cases = [
        ((0.30, 0.42, 0.38, 0.50), (0.35, 0.45, 0.40, 0.49),
         0.08483996445062904, -1.8000000000000005),
        ((1.0, 2.0, 3.0, 4.0, 5.0), (1.5, 2.1, 3.4, 4.0, 5.9),
         0.03781607447908027, -2.384332059525002),
        ((0.2, 0.2, 0.3), (0.1, 0.4, 0.25),
         0.43700592116512876, -0.17960530202677497),
    ]
    for a, b, p_ref, t_ref in cases:
        result = t_test_paired(a, b)
        assert result.p == pytest.approx(p_ref, abs=1e-9)
        assert result.t == pytest.approx(t_ref, abs=1e-9)
        assert result.df == len(a) - 1


def test_paired_ttest_degenerate_and_validation():
    identical = t_test_paired((0.2, 0.3, 0.4), (0.2, 0.3, 0.4))
    assert identical.p == 0.5
    shifted = t_test_paired((1.0, 2.0, 3.0), (2.0, 3.0, 4.0))
    assert shifted.p == 0.0
    with pytest.raises(ValueError):
        t_test_paired((1, 2), (1, 2, 3))
    with pytest.raises(ValueError):
        t_test_paired((1,), (2,))


# -------------------------------------------------------------- suite runs

def test_q1_row_order_and_disabled_marking(mini_reports):
    q1 = mini_reports["q1"]
    assert [r.row_id for r in q1.rows] == (
        [f"A{i}" for i in range(1, 9)]
        + [f"A\\{i}" for i in range(1, 9)]
        + ["A1-8", "B"])
    disabled = {r.row_id for r in q1.rows if r.disabled}
    assert disabled == {"A2", "A\\2"}
    for row in q1.rows:
        if row.disabled:
            assert row.results == {}
        else:
            assert set(row.results) == set(CODES)


def test_every_result_covers_every_topic(mini_corpus, mini_reports):
    topics = set(mini_corpus.topics)
    for report in mini_reports.values():
        for row in report.rows:
            for result in row.results.values():
                assert set(result.fold_maes) == topics


def test_significance_only_on_compared_rows(mini_reports):
    q1 = mini_reports["q1"]
    for row in q1.rows:
        if row.disabled:
            continue
        has_p = all(r.p_value is not None for r in row.results.values())
        no_p = all(r.p_value is None for r in row.results.values())
        if row.row_id == "A1-8":
            assert has_p
        else:
            assert no_p
    for row in mini_reports["q3"].rows:
        if row.approach.kind == "expert":
            assert all(r.p_value is not None for r in row.results.values())
    for result in q1.row("A1-8").results.values():
        assert result.significance == significance_level(result.p_value)


def test_baseline_row_matches_direct_recomputation(mini_corpus, mini_reports):
    """Row B must equal a from-scratch numpy mean-baseline computation."""
    row = mini_reports["q1"].row("B")
    for dimension in (DIMENSIONS[0], DIMENSIONS[7], DIMENSIONS[14]):
        for fold in loto_splits(mini_corpus):
            train_mean = np.mean([mean_score(mini_corpus.by_id[i], dimension)
                                  for i in fold.train])
            gold = np.array([mean_score(mini_corpus.by_id[i], dimension)
                             for i in fold.test])
            expected = np.mean(np.abs(np.clip(train_mean, 1, 3) - gold))
            got = row.results[dimension.value].fold_maes[fold.held_out_topic]
            assert got == pytest.approx(expected, abs=1e-12)


def test_run_loto_agrees_with_suite_grid(mini_corpus, mini_reports):
    """The select_c path and the Gram-additivity path must agree."""
    q1 = mini_reports["q1"]
    checks = [(single_family_approach(5), "A5"),
              (ablation_approach(4), "A\\4"),
              (all_features_approach(), "A1-8")]
    for approach, row_id in checks:
        for dimension in (DIMENSIONS[0], DIMENSIONS[14]):
            independent = run_loto(mini_corpus, approach, dimension)
            grid = q1.row(row_id).results[dimension.value]
            assert independent.mean_mae == pytest.approx(grid.mean_mae,
                                                         abs=1e-9)
            for topic, value in grid.fold_maes.items():
                assert independent.fold_maes[topic] == pytest.approx(
                    value, abs=1e-9)


def test_run_loto_rejects_disabled_approach(mini_corpus):
    from argquality.features import ConfigurationError
    with pytest.raises(ConfigurationError):
        run_loto(mini_corpus, single_family_approach(2), DIMENSIONS[0])


def test_q2_mean_rows_equal_q1_rows(mini_reports):
    q1, q2 = mini_reports["q1"], mini_reports["q2"]
    for q2_id, q1_id in (("mean:A1-8", "A1-8"), ("mean:B", "B")):
        left, right = q2.row(q2_id), q1.row(q1_id)
        for code in CODES:
            assert left.results[code].fold_maes == right.results[code].fold_maes
            assert left.results[code].mean_mae == right.results[code].mean_mae


def test_q2_expert_rows_use_expert_targets(mini_corpus, mini_reports):
    """Each per-expert baseline row must match that expert's own scores."""
    q2 = mini_reports["q2"]
    dimension = DIMENSIONS[14]
    for expert in (1, 2, 3):
        row = q2.row(f"expert{expert}:B")
        fold = loto_splits(mini_corpus)[0]
        train_mean = np.mean([mini_corpus.by_id[i].score(dimension, expert)
                              for i in fold.train])
        gold = np.array([mini_corpus.by_id[i].score(dimension, expert)
                         for i in fold.test])
        expected = np.mean(np.abs(np.clip(train_mean, 1, 3) - gold))
        got = row.results[dimension.value].fold_maes[fold.held_out_topic]
        assert got == pytest.approx(expected, abs=1e-12)


def test_q3_svm_predictions_are_rounded(mini_corpus, mini_reports):
    """Every Q3 SVM fold MAE times its fold size must be an integer."""
    svm = mini_reports["q3"].row("A1-8")
    sizes = {f.held_out_topic: len(f.test) for f in loto_splits(mini_corpus)}
    for result in svm.results.values():
        for topic, value in result.fold_maes.items():
            scaled = value * sizes[topic]
            assert abs(scaled - round(scaled)) < 1e-9


def test_q3_expert_rows_score_their_own_annotations(mini_corpus,
                                                    mini_reports):
    # expert 1 in the mini corpus always equals the majority by construction
    expert1 = mini_reports["q3"].row("expert1")
    assert all(r.mean_mae == 0.0 for r in expert1.results.values())
    assert all(v == 0.0 for r in expert1.results.values()
               for v in r.fold_maes.values())


def test_full_run_is_deterministic(mini_corpus, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    first = run_experiments(mini_corpus, EvalSettings(), ("q3",))["q3"]
    second = run_experiments(mini_corpus, EvalSettings(), ("q3",))["q3"]
    assert report_to_json(first) == report_to_json(second)


def test_parallel_jobs_match_serial(mini_corpus, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    serial = run_experiments(mini_corpus, EvalSettings(jobs=1), ("q3",))["q3"]
    parallel = run_experiments(mini_corpus, EvalSettings(jobs=3), ("q3",))["q3"]
    assert report_to_json(serial) == report_to_json(parallel)


def test_q1_row_filter(mini_corpus, mini_reports):
    small = run_q1(mini_corpus, q1_row_ids=("A5", "B"))
    assert [r.row_id for r in small.rows] == ["A5", "B"]
    full = mini_reports["q1"]
    for row_id in ("A5", "B"):
        for code in CODES:
            assert (small.row(row_id).results[code].fold_maes
                    == full.row(row_id).results[code].fold_maes)
    with pytest.raises(ValueError):
        run_q1(mini_corpus, q1_row_ids=("A99",))


def test_constant_corpus_baseline_is_exact():
    scores = {d: ((2, 2, 2)) for d in DIMENSIONS}
    arguments = [
        Argument(f"a{i}", f"t{i % 2}", "Words do not matter here.", scores)
        for i in range(6)
    ]
    corpus = Corpus(tuple(arguments))
    result = run_loto(corpus, baseline_approach(), DIMENSIONS[0])
    assert result.mean_mae == 0.0


def test_evalsettings_validation():
    from argquality.features import ConfigurationError
    with pytest.raises(ConfigurationError):
        EvalSettings(jobs=0)


def test_train_models_baseline_and_svm(mini_corpus):
    pipeline, baselines = train_models(mini_corpus, baseline_approach())
    for dimension in DIMENSIONS:
        model = baselines[dimension.value]
        assert model.kind == "mean_baseline"
        expected = np.mean([mean_score(a, dimension)
                            for a in mini_corpus.arguments])
        assert model.bias == pytest.approx(expected)
        assert model.feature_space == pipeline.fingerprint
    pipeline, models = train_models(
        mini_corpus, ApproachSpec(id="A5", kind="svm", families=("length",)))
    model = models["OvQ"]
    assert model.kind == "svr"
    assert model.feature_space == pipeline.fingerprint
    assert len(model.feature_names) == 21


# ---------------------------------------------------------------- rendering

def test_markdown_table_shape(mini_reports):
    text = render_markdown(mini_reports["q1"])
    data_rows = [line for line in text.splitlines()
                 if line.startswith("|") and "---" not in line
                 and not line.startswith("| Approach")]
    assert len(data_rows) == 18
    for line in data_rows:
        assert line.count("|") == 17  # leading+trailing plus 16 separators
    assert "n/a" in text  # disabled embedding rows
    assert "**" in text   # bold column minima
    assert "‡" in text or "†" in text


def test_markdown_q3_flags_worse_experts(mini_reports):
    text = render_markdown(mini_reports["q3"])
    assert "°" in text
    assert "Expert 1" in text and "All features (rounded)" in text


def test_csv_shape(mini_reports):
    for suite, expected_rows in (("q1", 18), ("q2", 8), ("q3", 4)):
        text = render_csv(mini_reports[suite])
        lines = text.strip().splitlines()
        assert len(lines) == expected_rows + 1
        assert lines[0].split(",") == ["approach"] + list(CODES)
        for line in lines[1:]:
            assert len(line.split(",")) == 16


def test_json_round_trip_equality(mini_reports):
    for report in mini_reports.values():
        text = report_to_json(report)
        assert report_from_json(text) == report
        assert render_report(report, "json") == text
        with pytest.raises(ValueError):
            render_report(report, "html")


def test_reports_validate_against_schema(mini_reports):
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
    for report in mini_reports.values():
        jsonschema.validate(json.loads(report_to_json(report)), schema)


def test_provenance_fields(mini_reports):
    for suite, report in mini_reports.items():
        prov = report.provenance
        assert prov["suite"] == suite
        assert prov["package"].startswith("argquality ")
        assert len(prov["corpus_hash"]) == 64
        assert len(prov["config_hash"]) == 64
        assert prov["embedding_hash"] is None
        assert "wordlist" in prov["lexicon_hashes"]


# ------------------------------------------------------------- properties

@given(st.lists(st.floats(min_value=0, max_value=2, allow_nan=False),
                min_size=1, max_size=8))
@hyp_settings(max_examples=50, deadline=None)
def test_macro_mae_bounded_by_extremes(fold_values):
    value = macro_mae(fold_values)
    assert min(fold_values) - 1e-12 <= value <= max(fold_values) + 1e-12


@given(st.integers(min_value=2, max_value=5),
       st.integers(min_value=0, max_value=1000))
@hyp_settings(max_examples=30, deadline=None)
def test_loto_folds_partition_any_corpus(n_topics, seed):
    rng = np.random.default_rng(seed)
    scores = {d: (2, 2, 2) for d in DIMENSIONS}
    arguments = [
        Argument(f"a{i:02d}", f"topic{rng.integers(n_topics)}", "One two.",
                 scores)
        for i in range(12)
    ]
    corpus = Corpus(tuple(arguments))
    if len(corpus.topics) < 2:
        return
    folds = loto_splits(corpus)
    assert len(folds) == len(corpus.topics)
    all_ids = {a.id for a in corpus.arguments}
    seen_in_test: list[str] = []
    for fold in folds:
        assert set(fold.train).isdisjoint(fold.test)
        assert set(fold.train) | set(fold.test) == all_ids
        seen_in_test.extend(fold.test)
        held_out = {corpus.by_id[i].topic for i in fold.test}
        assert held_out == {fold.held_out_topic}
    assert sorted(seen_in_test) == sorted(all_ids)

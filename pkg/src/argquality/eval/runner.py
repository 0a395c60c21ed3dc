"""Leave-one-topic-out execution of the three benchmark suites.

The suite runner fits one feature pipeline per outer fold and evaluates
every family subset through Gram-matrix additivity: the linear kernel of a
family union is the sum of the per-family Gram matrices, and inner-fold
kernels are row/column slices of the full training Gram. Model selection
mirrors the learner's select_c exactly (same grid, same clamping, same
validation MAE, ties to the smaller C); run_loto is an independent
implementation via select_c itself, kept as a cross-check path.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..corpus import (
    DIMENSIONS,
    Argument,
    Corpus,
    QualityDimension,
    inner_cv_splits,
    loto_splits,
    majority_score,
    mean_score,
)
from ..features import (
    ConfigurationError,
    CorpusIndex,
    ExtractorConfig,
    FAMILIES,
    available_families,
    fit,
    load_resources,
    transform_matrix,
)
from ..learner import (
    InnerFold,
    TrainConfig,
    choose_c,
    predict,
    round_score,
    select_c,
    solve_dual,
    train_baseline,
)
from ..textproc import analyze
from .approaches import ApproachSpec, SuiteRow, q1_rows, q2_rows, q3_rows
from .metrics import mae
from .report import (
    DIMENSION_CODES,
    DimensionResult,
    ExperimentReport,
    ReportRow,
    build_provenance,
    settings_hash,
)
from .stats import significance_level, t_test_one_tailed, t_test_paired

_CODE_TO_DIMENSION = {d.value: d for d in DIMENSIONS}

#: Subset key of the no-features baseline.
BASELINE_KEY = "none"
#: Subset key of the union of all enabled families.
ALL_KEY = "all"


@dataclass(frozen=True)
class EvalSettings:
    """Everything a benchmark run depends on besides the corpus."""

    extractor: ExtractorConfig = field(default_factory=ExtractorConfig)
    training: TrainConfig = field(default_factory=TrainConfig)
    jobs: int = 1
    q3_train_on_majority: bool = False
    paired_ttest: bool = False

    def __post_init__(self):
        if self.jobs < 1:
            raise ConfigurationError("jobs must be at least 1")


def target_series(arguments: Sequence[Argument], kind: str,
                  dimension: QualityDimension) -> np.ndarray:
    """Scores of one kind (mean/expert-k/majority) for the given arguments."""
    if kind == "mean":
        values = [mean_score(a, dimension) for a in arguments]
    elif kind == "majority":
        values = [majority_score(a, dimension) for a in arguments]
    elif kind.startswith("expert"):
        expert = int(kind[len("expert"):])
        values = [a.score(dimension, expert) for a in arguments]
    else:
        raise ValueError(f"unknown score kind {kind!r}")
    return np.asarray(values, dtype=np.float64)


def effective_families(approach: ApproachSpec,
                       enabled: Sequence[str]) -> tuple[str, ...]:
    return tuple(f for f in approach.families if f in enabled)


def approach_disabled(approach: ApproachSpec, enabled: Sequence[str]) -> bool:
    """Whether the approach degenerates without the unavailable families.

    A subset that loses all its families cannot run; an ablation whose
    dropped family is unavailable anyway would silently duplicate the
    all-features row, so it is reported as disabled instead.
    """
    if approach.kind != "svm":
        return False
    effective = effective_families(approach, enabled)
    if not effective:
        return True
    return (set(effective) == set(enabled)
            and set(approach.families) != set(FAMILIES))


def subset_key(approach: ApproachSpec, enabled: Sequence[str]) -> str:
    """Canonical key of the family subset relative to the enabled set."""
    if approach.kind != "svm":
        return BASELINE_KEY
    effective = effective_families(approach, enabled)
    if set(effective) == set(enabled):
        return ALL_KEY
    if len(effective) == 1:
        return f"only:{effective[0]}"
    missing = set(enabled) - set(effective)
    if len(missing) == 1:
        return f"without:{next(iter(missing))}"
    return "set:" + "+".join(sorted(effective))


def _subset_families(key: str, enabled: Sequence[str]) -> tuple[str, ...]:
    if key == ALL_KEY:
        return tuple(enabled)
    mode, _, detail = key.partition(":")
    if mode == "only":
        return (detail,)
    if mode == "without":
        return tuple(f for f in enabled if f != detail)
    if mode == "set":
        return tuple(f for f in enabled if f in set(detail.split("+")))
    raise ValueError(f"unknown subset key {key!r}")


def _baseline_predictions(train_targets: np.ndarray, count: int,
                          clamp: bool) -> np.ndarray:
    model = train_baseline(train_targets)
    return predict(model, np.zeros((count, 0)), clamp=clamp)


def compute_fold(corpus: Corpus, index: CorpusIndex | None,
                 settings: EvalSettings, enabled: Sequence[str],
                 needed: Iterable[tuple[str, str]],
                 fold) -> dict:
    """All test-set predictions of one outer fold.

    Returns {(subset_key, target_kind, dimension_code): clamped float
    predictions over the fold's test arguments, in corpus order}.
    """
    extractor = settings.extractor
    training = settings.training
    grid = training.c_grid
    clamp = training.clamp_predictions
    train_args = [corpus.by_id[i] for i in fold.train]
    test_args = [corpus.by_id[i] for i in fold.test]
    needed = sorted(set(needed))
    predictions: dict = {}

    target_kinds = sorted({target for _, target in needed})
    train_targets = {
        (kind, code): target_series(train_args, kind, _CODE_TO_DIMENSION[code])
        for kind in target_kinds for code in DIMENSION_CODES
    }

    for key, kind in needed:
        if key != BASELINE_KEY:
            continue
        for code in DIMENSION_CODES:
            predictions[(BASELINE_KEY, kind, code)] = _baseline_predictions(
                train_targets[(kind, code)], len(test_args), clamp)

    svm_pairs = [(key, kind) for key, kind in needed if key != BASELINE_KEY]
    if not svm_pairs:
        return predictions
    if index is None:
        raise ValueError("SVM approaches need a prebuilt corpus index")

    pipeline = fit(extractor, train_args, families=enabled, index=index,
                   keep_train_matrix=True)
    train_matrix = pipeline.train_matrix
    test_rows = index.rows_for(fold.test)
    test_matrix = transform_matrix(pipeline, index, test_rows)

    family_gram = {}
    family_cross = {}
    for family in pipeline.enabled_families:
        columns = pipeline.family_slices[family]
        block = np.ascontiguousarray(train_matrix[:, columns])
        test_block = np.ascontiguousarray(test_matrix[:, columns])
        family_gram[family] = block @ block.T
        family_cross[family] = test_block @ block.T

    subset_keys = sorted({key for key, _ in svm_pairs})
    subset_gram = {}
    subset_cross = {}
    n_train = len(train_args)
    n_test = len(test_args)
    for key in subset_keys:
        gram = np.zeros((n_train, n_train))
        cross = np.zeros((n_test, n_train))
        for family in _subset_families(key, pipeline.enabled_families):
            gram += family_gram[family]
            cross += family_cross[family]
        subset_gram[key] = gram
        subset_cross[key] = cross

    position = {arg_id: i for i, arg_id in enumerate(fold.train)}
    inner_folds = inner_cv_splits(fold.train, corpus)
    inner_slices = [
        (np.array([position[i] for i in inner.train], dtype=np.int64),
         np.array([position[i] for i in inner.test], dtype=np.int64))
        for inner in inner_folds
    ]

    mae_sums = {
        (key, kind, code): np.zeros(len(grid))
        for key, kind in svm_pairs for code in DIMENSION_CODES
    }
    for train_index, val_index in inner_slices:
        for key in subset_keys:
            gram = subset_gram[key]
            inner_gram = gram[np.ix_(train_index, train_index)] + 1.0
            val_kernel = gram[np.ix_(val_index, train_index)]
            for pair_key, kind in svm_pairs:
                if pair_key != key:
                    continue
                for code in DIMENSION_CODES:
                    series = train_targets[(kind, code)]
                    y = series[train_index]
                    y_mean = y.mean()
                    centered = y - y_mean
                    gold = series[val_index]
                    sums = mae_sums[(key, kind, code)]
                    for ci, c in enumerate(grid):
                        beta, _, _ = solve_dual(inner_gram, centered, c,
                                                training)
                        guessed = val_kernel @ beta + beta.sum() + y_mean
                        if clamp:
                            guessed = np.clip(guessed, 1.0, 3.0)
                        sums[ci] += float(np.mean(np.abs(guessed - gold)))

    for (key, kind, code), sums in sorted(mae_sums.items()):
        mean_maes = sums / len(inner_slices)
        chosen = choose_c(grid, list(mean_maes))
        series = train_targets[(kind, code)]
        y_mean = series.mean()
        beta, _, _ = solve_dual(subset_gram[key] + 1.0, series - y_mean,
                                chosen, training)
        guessed = subset_cross[key] @ beta + beta.sum() + y_mean
        if clamp:
            guessed = np.clip(guessed, 1.0, 3.0)
        predictions[(key, kind, code)] = guessed
    return predictions


# ------------------------------------------------------- parallel fold jobs

_WORKER_STATE: dict = {}


def _init_worker(corpus, settings, enabled, needed):
    resources = load_resources(settings.extractor)
    analyses = {a.id: analyze(a.text) for a in corpus.arguments}
    index = None
    if any(key != BASELINE_KEY for key, _ in needed):
        index = CorpusIndex.build(corpus.arguments, settings.extractor,
                                  resources, analyses, enabled)
    _WORKER_STATE.update(corpus=corpus, settings=settings, enabled=enabled,
                         needed=needed, index=index)


def _fold_job(topic: str):
    state = _WORKER_STATE
    fold = next(f for f in loto_splits(state["corpus"])
                if f.held_out_topic == topic)
    return topic, compute_fold(state["corpus"], state["index"],
                               state["settings"], state["enabled"],
                               state["needed"], fold)


def _compute_all_folds(corpus: Corpus, settings: EvalSettings,
                       enabled: Sequence[str],
                       needed: set) -> dict:
    folds = loto_splits(corpus)
    if settings.jobs == 1 or len(folds) == 1:
        resources = load_resources(settings.extractor)
        index = None
        if any(key != BASELINE_KEY for key, _ in needed):
            analyses = {a.id: analyze(a.text) for a in corpus.arguments}
            index = CorpusIndex.build(corpus.arguments, settings.extractor,
                                      resources, analyses, enabled)
        return {fold.held_out_topic:
                compute_fold(corpus, index, settings, enabled, needed, fold)
                for fold in folds}
    workers = min(settings.jobs, len(folds))
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                             initargs=(corpus, settings, tuple(enabled),
                                       sorted(needed))) as pool:
        return dict(pool.map(_fold_job, [f.held_out_topic for f in folds]))


# ------------------------------------------------------------ suite assembly

def _row_predictions(row: SuiteRow, corpus: Corpus, fold_topic: str,
                     test_ids: Sequence[str], fold_predictions: Mapping,
                     enabled: Sequence[str], code: str) -> np.ndarray:
    approach = row.approach
    dimension = _CODE_TO_DIMENSION[code]
    test_args = [corpus.by_id[i] for i in test_ids]
    if approach.kind == "expert":
        values = target_series(test_args, approach.target, dimension)
    else:
        key = subset_key(approach, enabled)
        values = fold_predictions[fold_topic][(key, approach.target, code)]
    if approach.rounding:
        values = np.array([float(round_score(v)) for v in values])
    return values


def _assemble_suite(suite: str, rows: Sequence[SuiteRow], corpus: Corpus,
                    fold_predictions: Mapping, enabled: Sequence[str],
                    settings: EvalSettings,
                    provenance: Mapping) -> ExperimentReport:
    folds = loto_splits(corpus)
    topics = [fold.held_out_topic for fold in folds]
    test_ids = {fold.held_out_topic: fold.test for fold in folds}

    fold_maes: dict = {}
    for row in rows:
        if approach_disabled(row.approach, enabled):
            continue
        gold_dimension_cache = {}
        for code in DIMENSION_CODES:
            dimension = _CODE_TO_DIMENSION[code]
            per_topic = {}
            for topic in topics:
                ids = test_ids[topic]
                gold_key = (row.approach.gold, code, topic)
                if gold_key not in gold_dimension_cache:
                    gold_dimension_cache[gold_key] = target_series(
                        [corpus.by_id[i] for i in ids], row.approach.gold,
                        dimension)
                gold = gold_dimension_cache[gold_key]
                guessed = _row_predictions(row, corpus, topic, ids,
                                           fold_predictions, enabled, code)
                per_topic[topic] = mae(guessed, gold)
            fold_maes[(row.row_id, code)] = per_topic

    test = t_test_paired if settings.paired_ttest else t_test_one_tailed
    report_rows = []
    for row in rows:
        if approach_disabled(row.approach, enabled):
            report_rows.append(ReportRow(
                row_id=row.row_id, approach=row.approach,
                effective_families=effective_families(row.approach, enabled),
                compare_to=row.compare_to, disabled=True, results={}))
            continue
        results = {}
        for code in DIMENSION_CODES:
            per_topic = fold_maes[(row.row_id, code)]
            p_value = None
            significance = "none"
            reference = fold_maes.get((row.compare_to, code))
            if reference is not None:
                ordered_a = [per_topic[t] for t in topics]
                ordered_b = [reference[t] for t in topics]
                p_value = test(ordered_a, ordered_b).p
                significance = significance_level(p_value)
            results[code] = DimensionResult.from_folds(
                code, per_topic, p_value, significance)
        report_rows.append(ReportRow(
            row_id=row.row_id, approach=row.approach,
            effective_families=effective_families(row.approach, enabled),
            compare_to=row.compare_to, disabled=False, results=results))
    return ExperimentReport(suite, tuple(report_rows), dict(provenance))


def _suite_rows(suite: str, settings: EvalSettings,
                q1_row_ids: Sequence[str] | None = None) -> tuple:
    if suite == "q1":
        rows = q1_rows()
        if q1_row_ids is not None:
            wanted = set(q1_row_ids)
            unknown = wanted - {row.row_id for row in rows}
            if unknown:
                raise ValueError(f"unknown approach rows: {sorted(unknown)}")
            rows = tuple(row for row in rows if row.row_id in wanted)
        return rows
    if suite == "q2":
        return q2_rows()
    if suite == "q3":
        return q3_rows(settings.q3_train_on_majority)
    raise ValueError(f"unknown suite {suite!r}")


def run_experiments(corpus: Corpus, settings: EvalSettings | None = None,
                    suites: Sequence[str] = ("q1", "q2", "q3"),
                    q1_row_ids: Sequence[str] | None = None
                    ) -> dict[str, ExperimentReport]:
    """Run the requested suites, sharing fold computations between them."""
    settings = settings or EvalSettings()
    resources = load_resources(settings.extractor)
    enabled = available_families(resources)

    suite_rows = {suite: _suite_rows(suite, settings, q1_row_ids)
                  for suite in suites}
    needed = set()
    for rows in suite_rows.values():
        for row in rows:
            if approach_disabled(row.approach, enabled):
                continue
            if row.approach.kind == "expert":
                continue
            needed.add((subset_key(row.approach, enabled),
                        row.approach.target))
    fold_predictions = _compute_all_folds(corpus, settings, enabled, needed)

    config_hash = settings_hash(
        settings.extractor.scalar_settings(),
        {
            "c_grid": list(settings.training.c_grid),
            "epsilon": settings.training.epsilon,
            "tolerance": settings.training.tolerance,
            "max_epochs": settings.training.max_epochs,
            "clamp_predictions": settings.training.clamp_predictions,
        },
        tuple(enabled),
        {"q3_train_on_majority": settings.q3_train_on_majority,
         "paired_ttest": settings.paired_ttest},
    )
    provenance = build_provenance(corpus, config_hash,
                                  resources.lexicons.hashes,
                                  resources.embedding_hash)
    return {
        suite: _assemble_suite(suite, suite_rows[suite], corpus,
                               fold_predictions, enabled, settings,
                               dict(provenance, suite=suite))
        for suite in suites
    }


def run_q1(corpus: Corpus, settings: EvalSettings | None = None,
           q1_row_ids: Sequence[str] | None = None) -> ExperimentReport:
    return run_experiments(corpus, settings, ("q1",), q1_row_ids)["q1"]


def run_q2(corpus: Corpus, settings: EvalSettings | None = None
           ) -> ExperimentReport:
    return run_experiments(corpus, settings, ("q2",))["q2"]


def run_q3(corpus: Corpus, settings: EvalSettings | None = None
           ) -> ExperimentReport:
    return run_experiments(corpus, settings, ("q3",))["q3"]


def train_models(corpus: Corpus, approach: ApproachSpec,
                 settings: EvalSettings | None = None):
    """Fit one deployable model per dimension on the whole corpus.

    Returns (pipeline, {dimension code: LinearModel}). SVM models select C
    by topic-wise inner cross-validation over the full corpus; baseline
    models store the training mean. Every model carries the pipeline
    fingerprint as its feature space.
    """
    settings = settings or EvalSettings()
    if approach.kind == "expert":
        raise ConfigurationError("expert rows have no trainable model")
    resources = load_resources(settings.extractor)
    enabled = available_families(resources)
    if approach_disabled(approach, enabled):
        raise ConfigurationError(
            f"approach {approach.id} needs families that are not "
            f"available: {sorted(set(approach.families) - set(enabled))}")
    families = (effective_families(approach, enabled)
                if approach.kind == "svm" else enabled)
    analyses = {a.id: analyze(a.text) for a in corpus.arguments}
    index = CorpusIndex.build(corpus.arguments, settings.extractor,
                              resources, analyses, families)
    pipeline = fit(settings.extractor, corpus.arguments, families=families,
                   index=index, keep_train_matrix=True)

    inner_matrices = []
    if approach.kind == "svm":
        matrix = pipeline.train_matrix
        all_ids = tuple(a.id for a in corpus.arguments)
        position = {arg_id: i for i, arg_id in enumerate(all_ids)}
        for inner in inner_cv_splits(all_ids, corpus):
            train_index = [position[i] for i in inner.train]
            val_index = [position[i] for i in inner.test]
            inner_matrices.append((train_index, val_index))

    models = {}
    for dimension in DIMENSIONS:
        targets = target_series(corpus.arguments, approach.target, dimension)
        if approach.kind == "baseline":
            models[dimension.value] = train_baseline(
                targets, feature_space=pipeline.fingerprint)
            continue
        inner_folds = [
            InnerFold(pipeline.train_matrix[tr], targets[tr],
                      pipeline.train_matrix[val], targets[val])
            for tr, val in inner_matrices
        ]
        selection = select_c(inner_folds, pipeline.train_matrix, targets,
                             settings.training,
                             feature_names=pipeline.feature_names,
                             feature_space=pipeline.fingerprint)
        models[dimension.value] = selection.model
    return pipeline, models


# ------------------------------------------------- independent learner path

def run_loto(corpus: Corpus, approach: ApproachSpec,
             dimension: QualityDimension | str,
             settings: EvalSettings | None = None) -> DimensionResult:
    """LOTO evaluation of one approach on one dimension via select_c.

    This path builds explicit feature matrices and calls the learner's own
    model selection, independently of the Gram-additivity fast path used by
    the suite runner; the two must agree (up to float accumulation order).
    SVM results carry significance against the matching mean baseline.
    """
    settings = settings or EvalSettings()
    training = settings.training
    if isinstance(dimension, str):
        dimension = _CODE_TO_DIMENSION[dimension]
    code = dimension.value

    index = None
    effective: tuple[str, ...] = ()
    if approach.kind == "svm":
        resources = load_resources(settings.extractor)
        enabled = available_families(resources)
        if approach_disabled(approach, enabled):
            raise ConfigurationError(
                f"approach {approach.id} needs families that are not "
                f"available: {sorted(set(approach.families) - set(enabled))}")
        effective = effective_families(approach, enabled)
        analyses = {a.id: analyze(a.text) for a in corpus.arguments}
        index = CorpusIndex.build(corpus.arguments, settings.extractor,
                                  resources, analyses, effective)

    fold_maes: dict[str, float] = {}
    baseline_maes: dict[str, float] = {}
    for fold in loto_splits(corpus):
        train_args = [corpus.by_id[i] for i in fold.train]
        test_args = [corpus.by_id[i] for i in fold.test]
        targets = target_series(train_args, approach.target, dimension)
        gold = target_series(test_args, approach.gold, dimension)

        if approach.kind == "expert":
            guessed = target_series(test_args, approach.target, dimension)
        elif approach.kind == "baseline":
            guessed = _baseline_predictions(targets, len(test_args),
                                            training.clamp_predictions)
        else:
            pipeline = fit(settings.extractor, train_args, families=effective,
                           index=index, keep_train_matrix=True)
            matrix = pipeline.train_matrix
            test_matrix = transform_matrix(
                pipeline, index, index.rows_for(fold.test))
            position = {arg_id: i for i, arg_id in enumerate(fold.train)}
            inner_folds = []
            for inner in inner_cv_splits(fold.train, corpus):
                train_index = [position[i] for i in inner.train]
                val_index = [position[i] for i in inner.test]
                inner_folds.append(InnerFold(
                    matrix[train_index], targets[train_index],
                    matrix[val_index], targets[val_index]))
            selection = select_c(inner_folds, matrix, targets, training)
            guessed = predict(selection.model, test_matrix,
                              clamp=training.clamp_predictions)
        if approach.rounding:
            guessed = np.array([float(round_score(v)) for v in guessed])
        fold_maes[fold.held_out_topic] = mae(guessed, gold)
        if approach.kind == "svm":
            reference = _baseline_predictions(targets, len(test_args),
                                              training.clamp_predictions)
            if approach.rounding:
                reference = np.array([float(round_score(v))
                                      for v in reference])
            baseline_maes[fold.held_out_topic] = mae(reference, gold)

    p_value = None
    significance = "none"
    if approach.kind == "svm":
        topics = [fold.held_out_topic for fold in loto_splits(corpus)]
        test = t_test_paired if settings.paired_ttest else t_test_one_tailed
        p_value = test([fold_maes[t] for t in topics],
                       [baseline_maes[t] for t in topics]).p
        significance = significance_level(p_value)
    return DimensionResult.from_folds(code, fold_maes, p_value, significance)

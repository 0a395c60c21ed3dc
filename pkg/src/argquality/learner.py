"""Per-dimension predictors: sparse linear epsilon-SVR and the mean baseline.

The regressor minimizes

    0.5 * ||w||^2 + 0.5 * b'^2 + C * sum_i max(0, |w.x_i + b' - y'_i| - eps)

where y' are the training targets centered on their mean and b' is a
regularized intercept learned on the centered scale (the stored bias adds
the target mean back). Regularizing the intercept keeps the problem
strictly convex, so the optimum is unique and directly comparable with a
quadratic-program oracle.

The dual is a box-constrained quadratic with an L1 term,

    min_beta 0.5 * beta' Q beta - y'' beta + eps * ||beta||_1,  |beta_i| <= C

with Q = X X' + 1 (the ones come from the intercept acting as a constant
feature). It is solved by deterministic coordinate descent over a fixed
index order, giving bit-identical models for identical inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from numba import njit

C_GRID: tuple[float, ...] = tuple(1e-4 * 2 ** j for j in range(7, 17))

MODEL_KINDS = ("svr", "mean_baseline")

SCORE_MIN = 1.0
SCORE_MAX = 3.0


class TrainingError(ValueError):
    """Raised for invalid training inputs."""


@dataclass(frozen=True)
class TrainConfig:
    """Solver settings; the defaults reproduce the benchmark setup."""

    c_grid: tuple[float, ...] = C_GRID
    epsilon: float = 0.1
    tolerance: float = 1e-4
    max_epochs: int = 1000
    clamp_predictions: bool = True
    deterministic: bool = True

    def __post_init__(self) -> None:
        if not self.deterministic:
            raise ValueError("only deterministic training is supported")
        if len(self.c_grid) < 1:
            raise ValueError("c_grid must not be empty")
        if any(c <= 0 for c in self.c_grid):
            raise ValueError("c_grid values must be positive")
        if any(a >= b for a, b in zip(self.c_grid, self.c_grid[1:])):
            raise ValueError("c_grid must be strictly increasing")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be at least 1")


@dataclass(frozen=True)
class LinearModel:
    """An immutable trained predictor.

    weight_values is aligned with feature_names; both are empty for the
    mean baseline. feature_space carries the fingerprint of the feature
    pipeline the model was trained in.
    """

    kind: str
    feature_names: tuple[str, ...]
    weight_values: np.ndarray
    bias: float
    chosen_c: float | None = None
    feature_space: str = ""

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind: {self.kind!r}")
        if len(self.feature_names) != len(self.weight_values):
            raise ValueError("feature_names and weight_values disagree")
        if not np.all(np.isfinite(self.weight_values)):
            raise ValueError("weights must be finite")
        if not math.isfinite(self.bias):
            raise ValueError("bias must be finite")
        if self.kind == "mean_baseline" and len(self.feature_names):
            raise ValueError("baseline models have no weights")

    @property
    def weights(self) -> dict[str, float]:
        """Sparse name-to-value view of the non-zero weights."""
        return {name: float(value)
                for name, value in zip(self.feature_names, self.weight_values)
                if value != 0.0}

    def to_json(self) -> str:
        payload = {
            "kind": self.kind,
            "bias": self.bias,
            "chosen_c": self.chosen_c,
            "feature_space": self.feature_space,
            "weights": self.weights,
        }
        return json.dumps(payload, sort_keys=True, ensure_ascii=False)


def model_from_json(text: str,
                    feature_names: Sequence[str] | None = None) -> LinearModel:
    """Rebuild a model serialized with LinearModel.to_json.

    feature_names fixes the column order for prediction; serialized
    weights not listed there raise, missing ones default to zero. Without
    it the weight names are used in sorted order.
    """
    payload = json.loads(text)
    weights: Mapping[str, float] = payload["weights"]
    if feature_names is None:
        feature_names = sorted(weights)
    unknown = set(weights) - set(feature_names)
    if unknown:
        raise ValueError(f"weights for unknown features: {sorted(unknown)[:5]}")
    values = np.array([float(weights.get(name, 0.0)) for name in feature_names],
                      dtype=np.float64)
    return LinearModel(
        kind=payload["kind"],
        feature_names=tuple(feature_names),
        weight_values=values,
        bias=float(payload["bias"]),
        chosen_c=payload["chosen_c"],
        feature_space=payload.get("feature_space", ""),
    )


@njit(cache=True)
def _descend(q, y, c, eps, tol, max_epochs):  # pragma: no cover - jitted
    n = q.shape[0]
    beta = np.zeros(n)
    s = np.zeros(n)  # s = Q beta, maintained incrementally
    trace = np.empty(max_epochs)
    epochs = 0
    for epoch in range(max_epochs):
        largest_step = 0.0
        for i in range(n):
            margin = q[i, i] * beta[i] - (s[i] - y[i])
            if margin > eps:
                new_value = (margin - eps) / q[i, i]
                if new_value > c:
                    new_value = c
            elif margin < -eps:
                new_value = (margin + eps) / q[i, i]
                if new_value < -c:
                    new_value = -c
            else:
                new_value = 0.0
            delta = new_value - beta[i]
            if delta != 0.0:
                for j in range(n):
                    s[j] += delta * q[i, j]
                beta[i] = new_value
                if abs(delta) > largest_step:
                    largest_step = abs(delta)
        objective = 0.0
        for i in range(n):
            objective += 0.5 * beta[i] * s[i] - y[i] * beta[i] + eps * abs(beta[i])
        trace[epoch] = objective
        epochs = epoch + 1
        if largest_step <= tol:
            break
    return beta, epochs, trace[:epochs]


def solve_dual(gram: np.ndarray, centered_targets: np.ndarray, c: float,
               config: TrainConfig) -> tuple[np.ndarray, int, np.ndarray]:
    """Run coordinate descent on the dual and return (beta, epochs, trace).

    gram must already include the +1 intercept term. The trace holds the
    dual objective (minimization form) after each epoch; it never
    increases.
    """
    gram = np.ascontiguousarray(gram, dtype=np.float64)
    targets = np.ascontiguousarray(centered_targets, dtype=np.float64)
    if gram.shape[0] != gram.shape[1] or gram.shape[0] != targets.shape[0]:
        raise TrainingError("gram matrix and targets disagree in size")
    beta, epochs, trace = _descend(gram, targets, float(c),
                                   float(config.epsilon),
                                   float(config.tolerance),
                                   int(config.max_epochs))
    return beta, epochs, trace


def _as_matrix(vectors: np.ndarray) -> np.ndarray:
    matrix = np.asarray(vectors, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix.reshape(-1, 1)
    if matrix.ndim != 2:
        raise TrainingError("training vectors must form a 2-D matrix")
    return matrix


def train_svr(vectors: np.ndarray, targets: Sequence[float], c: float,
              config: TrainConfig | None = None,
              feature_names: Sequence[str] | None = None,
              feature_space: str = "") -> LinearModel:
    """Fit the sparse linear epsilon-SVR at a fixed C."""
    config = config or TrainConfig()
    matrix = _as_matrix(vectors)
    y = np.asarray(targets, dtype=np.float64)
    if len(y) != matrix.shape[0]:
        raise TrainingError("vector and target counts disagree")
    if len(y) == 0:
        raise TrainingError("training needs at least one example")
    if not np.all(np.isfinite(matrix)):
        raise TrainingError("non-finite feature values")
    if not np.all(np.isfinite(y)):
        raise TrainingError("non-finite targets")
    if c <= 0:
        raise TrainingError("C must be positive")
    if feature_names is None:
        feature_names = tuple(f"x{i}" for i in range(matrix.shape[1]))
    elif len(feature_names) != matrix.shape[1]:
        raise TrainingError("feature_names and matrix width disagree")

    target_mean = float(y.mean())
    centered = y - target_mean
    gram = matrix @ matrix.T + 1.0
    beta, _, _ = solve_dual(gram, centered, c, config)
    weights = matrix.T @ beta
    bias = target_mean + float(beta.sum())
    return LinearModel(kind="svr", feature_names=tuple(feature_names),
                       weight_values=weights, bias=bias, chosen_c=float(c),
                       feature_space=feature_space)


def train_baseline(targets: Sequence[float],
                   feature_space: str = "") -> LinearModel:
    """Fit the constant predictor: the mean of the training targets."""
    values = np.asarray(targets, dtype=np.float64)
    if len(values) == 0:
        raise TrainingError("training needs at least one target")
    if not np.all(np.isfinite(values)):
        raise TrainingError("non-finite targets")
    return LinearModel(kind="mean_baseline", feature_names=(),
                       weight_values=np.empty(0), bias=float(values.mean()),
                       feature_space=feature_space)


def clamp_score(value: float) -> float:
    """Restrict a raw regression output to the valid score range."""
    return min(max(value, SCORE_MIN), SCORE_MAX)


def predict(model: LinearModel, vectors: np.ndarray,
            clamp: bool = True) -> np.ndarray | float:
    """Apply a model; 1-D input gives a float, 2-D an array of floats.

    Outputs are clamped to [1, 3] unless clamp is False.
    """
    array = np.asarray(vectors, dtype=np.float64)
    single = array.ndim == 1
    matrix = array.reshape(1, -1) if single else array
    if model.kind == "mean_baseline":
        raw = np.full(matrix.shape[0], model.bias)
    else:
        if matrix.shape[1] != len(model.feature_names):
            raise ValueError("vector width does not match the model")
        raw = matrix @ model.weight_values + model.bias
    if clamp:
        raw = np.clip(raw, SCORE_MIN, SCORE_MAX)
    return float(raw[0]) if single else raw


def round_score(score: float) -> int:
    """Round a score in [1, 3] to the nearest integer, halves upward."""
    if not SCORE_MIN <= score <= SCORE_MAX:
        raise ValueError(f"score out of range: {score}")
    return int(math.floor(score + 0.5))


def choose_c(c_grid: Sequence[float], mean_maes: Sequence[float]) -> float:
    """Pick the grid value with the lowest MAE; ties go to the smaller C.

    Assumes c_grid is increasing, so scanning in order and keeping only
    strict improvements implements the tie-break.
    """
    if len(c_grid) != len(mean_maes) or not c_grid:
        raise ValueError("c_grid and mean_maes must align and be non-empty")
    best_c = c_grid[0]
    best_mae = mean_maes[0]
    for c, mae in zip(c_grid[1:], mean_maes[1:]):
        if mae < best_mae:
            best_c, best_mae = c, mae
    return best_c


@dataclass(frozen=True)
class InnerFold:
    """One inner cross-validation split, already vectorized."""

    train_matrix: np.ndarray
    train_targets: np.ndarray
    validation_matrix: np.ndarray
    validation_targets: np.ndarray


@dataclass(frozen=True)
class CSelection:
    chosen_c: float
    model: LinearModel
    validation_maes: tuple[float, ...] = field(repr=False)


def select_c(inner_folds: Sequence[InnerFold], train_matrix: np.ndarray,
             train_targets: Sequence[float],
             config: TrainConfig | None = None,
             feature_names: Sequence[str] | None = None,
             feature_space: str = "") -> CSelection:
    """Grid-search C on inner folds, then retrain on the full training set.

    For each C the score is the mean validation MAE over the inner folds;
    the lowest wins, ties broken toward the smaller C. The caller prepares
    the folds (including any per-fold feature refitting).
    """
    config = config or TrainConfig()
    if not inner_folds:
        raise TrainingError("select_c needs at least one inner fold")
    mean_maes = []
    for c in config.c_grid:
        fold_maes = []
        for fold in inner_folds:
            model = train_svr(fold.train_matrix, fold.train_targets, c, config)
            predicted = predict(model, fold.validation_matrix,
                                clamp=config.clamp_predictions)
            gold = np.asarray(fold.validation_targets, dtype=np.float64)
            fold_maes.append(float(np.mean(np.abs(predicted - gold))))
        mean_maes.append(sum(fold_maes) / len(fold_maes))
    chosen = choose_c(config.c_grid, mean_maes)
    final = train_svr(train_matrix, train_targets, chosen, config,
                      feature_names=feature_names, feature_space=feature_space)
    return CSelection(chosen, final, tuple(mean_maes))

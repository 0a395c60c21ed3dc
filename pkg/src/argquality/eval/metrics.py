"""Error metrics for the benchmark suites."""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np


def mae(predictions: Sequence[float], gold: Sequence[float]) -> float:
    """Mean absolute error between two equally long non-empty vectors."""
    predicted = np.asarray(predictions, dtype=np.float64)
    expected = np.asarray(gold, dtype=np.float64)
    if predicted.shape != expected.shape or predicted.ndim != 1:
        raise ValueError(
            f"mae needs two equally long vectors, got shapes "
            f"{predicted.shape} and {expected.shape}")
    if predicted.size == 0:
        raise ValueError("mae of empty vectors is undefined")
    return float(np.mean(np.abs(predicted - expected)))


def macro_mae(fold_maes: Mapping[str, float] | Sequence[float]) -> float:
    """Unweighted mean over per-fold MAEs, regardless of fold sizes."""
    if isinstance(fold_maes, Mapping):
        values = list(fold_maes.values())
    else:
        values = list(fold_maes)
    if not values:
        raise ValueError("macro_mae needs at least one fold")
    return float(sum(values) / len(values))

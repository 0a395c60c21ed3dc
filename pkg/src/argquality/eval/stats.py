"""Two-sample significance testing for fold-MAE comparisons.

Implements the one-tailed independent Student's t-test with pooled variance
from scratch (log-gamma plus a continued-fraction regularized incomplete
beta), so the package needs no statistics library at runtime. Reference
values in the tests were frozen from an independent implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

_MAX_ITERATIONS = 300
_EPSILON = 3e-14


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Lentz's continued fraction for the incomplete beta function."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITERATIONS + 1):
        m2 = 2 * m
        numerator = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + numerator * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numerator / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        numerator = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + numerator * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numerator / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < _EPSILON:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    # use the representation that converges fast for the given x
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_cdf(t: float, df: float) -> float:
    """P(T <= t) for Student's t with df degrees of freedom."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if t == 0.0:
        return 0.5
    x = df / (df + t * t)
    tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x)
    return tail if t < 0.0 else 1.0 - tail


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: int
    p: float


def t_test_one_tailed(sample_a: Sequence[float],
                      sample_b: Sequence[float]) -> TTestResult:
    """One-tailed pooled-variance t-test of mean(a) < mean(b).

    a is the approach, b the baseline: small p means the approach improves
    on the baseline. With zero pooled variance the p-value degenerates to
    0.5 for equal means, else 0.0 or 1.0 depending on the direction.
    """
    n_a, n_b = len(sample_a), len(sample_b)
    if n_a < 2 or n_b < 2:
        raise ValueError("each sample needs at least 2 values")
    mean_a = sum(sample_a) / n_a
    mean_b = sum(sample_b) / n_b
    df = n_a + n_b - 2
    ss_a = sum((v - mean_a) ** 2 for v in sample_a)
    ss_b = sum((v - mean_b) ** 2 for v in sample_b)
    pooled_variance = (ss_a + ss_b) / df
    if pooled_variance == 0.0:
        if mean_a == mean_b:
            return TTestResult(0.0, df, 0.5)
        return TTestResult(math.copysign(math.inf, mean_a - mean_b), df,
                           0.0 if mean_a < mean_b else 1.0)
    standard_error = math.sqrt(pooled_variance * (1.0 / n_a + 1.0 / n_b))
    t = (mean_a - mean_b) / standard_error
    return TTestResult(t, df, student_t_cdf(t, df))


def t_test_paired(sample_a: Sequence[float],
                  sample_b: Sequence[float]) -> TTestResult:
    """One-tailed paired t-test of mean(a) < mean(b) on matched samples.

    Folds are matched between two approaches evaluated on the same splits,
    so this variant tests the per-fold differences against zero. Offered as
    a sensitivity check next to the default pooled-variance test.
    """
    if len(sample_a) != len(sample_b):
        raise ValueError("paired samples must have the same length")
    n = len(sample_a)
    if n < 2:
        raise ValueError("each sample needs at least 2 values")
    differences = [a - b for a, b in zip(sample_a, sample_b)]
    mean_d = sum(differences) / n
    df = n - 1
    ss = sum((d - mean_d) ** 2 for d in differences)
    if ss == 0.0:
        if mean_d == 0.0:
            return TTestResult(0.0, df, 0.5)
        return TTestResult(math.copysign(math.inf, mean_d), df,
                           0.0 if mean_d < 0.0 else 1.0)
    standard_error = math.sqrt(ss / df / n)
    t = mean_d / standard_error
    return TTestResult(t, df, student_t_cdf(t, df))


def significance_level(p: float) -> str:
    """Mark level for a p-value: 'p01' (p < .01), 'p05' (p < .05), or 'none'."""
    if p < 0.01:
        return "p01"
    if p < 0.05:
        return "p05"
    return "none"


SIGNIFICANCE_MARKS = {"none": "", "p05": "†", "p01": "‡"}

"""Significance-test checks against frozen reference values.

The p-values below were computed once with scipy.stats.ttest_ind
(equal_var=True, alternative="less") and frozen, so the suite never
depends on scipy at runtime.
"""

from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from argquality.eval.stats import (
    SIGNIFICANCE_MARKS,
    significance_level,
    student_t_cdf,
    t_test_one_tailed,
)

REFERENCE_PAIRS = [
    ((1.0, 2.0, 3.0, 4.0),
     (3.0, 4.0, 5.0, 6.0),
     0.03549382716049382),
    ((1.0719, 1.239, 0.632, 0.8188, 1.3972, 0.7504, 0.0608, 0.2294, 1.5844, 1.0981),
     (0.5503, 1.6237, 0.0405, 1.8796, 1.7862, 0.5581, 0.8384, 0.3922, 0.0122),
     0.5481938093127985),
    ((0.6164, 1.1328, 0.8467, 1.2319, 0.5256, 0.5492, 1.7299, 0.1783, 0.4892, 1.021, 0.6924, 0.4384, 1.1143, 0.0029, 0.7249),
     (1.0742, 1.4635, 1.7976, 0.7289, 1.7445, 0.6905, 1.535),
     0.008039153662018735),
    ((1.9076, 0.5632, 1.128, 1.7396, 1.4645, 1.441, 1.1686, 0.6371, 0.7103, 1.2526),
     (1.8127, 0.8887, 1.0514, 1.5919, 1.2853, 1.6241, 0.7368, 0.1023, 1.2626, 0.9452, 1.3269, 1.4087, 0.6658),
     0.639194784272967),
    ((1.8035, 1.3701, 1.9783, 0.1757, 1.2843, 0.202, 1.1484, 1.9825, 1.4242, 1.9119, 0.1993, 1.9437, 0.433, 1.3661, 0.3747, 1.3937),
     (1.6548, 1.7337, 1.1105, 1.5333, 1.9397),
     0.11030238348447685),
    ((1.3099, 1.7146, 0.0441, 1.9087, 1.4428, 1.4509, 1.5239, 0.9214, 0.2883, 0.8427),
     (1.5772, 1.9952, 1.2507, 0.7117, 0.4093, 1.0807, 0.9918),
     0.49931421399837045),
    ((1.9287, 1.4457, 0.1476, 0.6548, 1.9681, 1.7108, 1.8093, 0.6281, 1.5622, 0.8295, 1.7539),
     (1.1483, 0.5287, 0.2926, 1.266, 0.6726, 1.3176, 0.8611),
     0.9413058366919707),
    ((1.0571, 1.7114, 1.1634, 1.5543, 0.3503, 0.1004, 1.6159, 1.7677, 1.9393, 1.363, 0.1934, 0.0343, 0.0448, 0.6655),
     (1.4841, 1.2453, 1.2953, 0.861, 0.9142, 0.491, 0.5225, 1.5399, 1.5635, 0.6472, 1.3136),
     0.32526991257831506),
    ((0.3122, 1.7491, 0.9685, 1.4233, 0.4487, 0.9728, 1.0615, 0.4329, 0.0066, 1.4669, 0.6629, 0.0201, 1.1689, 1.9734, 0.8364, 1.819),
     (0.3264, 0.3264, 0.5207, 0.2442, 0.0766, 0.4096, 1.3626, 1.8671, 0.0731, 1.8791, 0.1023, 0.5183, 1.2296, 0.7555, 1.1636),
     0.8480451404391844),
    ((0.2151, 1.3012, 0.1957, 1.8925, 1.9418, 1.9099, 1.7374, 1.5216, 1.1101, 0.4481, 1.7622, 1.0802, 0.8463, 1.5867, 1.7278),
     (0.0816, 1.9011, 0.0688, 1.4375, 1.2359, 1.1201, 1.0498, 0.3409),
     0.9080048882172815),
    ((1.9346, 1.2019, 1.4, 1.7742, 0.6733),
     (0.1678, 0.4116, 1.0636, 1.6123, 1.3942),
     0.8866764179475575),
    ((1.9226, 0.5565, 0.9472, 1.0427, 1.8184, 1.1143, 1.6446, 1.8998, 1.8622, 1.6951, 1.0567, 1.6713, 1.906, 0.3444),
     (0.7695, 0.9042, 1.2789, 0.9004, 0.2296, 1.1387, 1.9775, 0.9643, 1.9596, 0.8196, 0.7597, 1.4059, 0.203),
     0.9555584669792213),
    ((0.783, 0.5043, 0.5149),
     (0.3179, 1.5116, 0.7656, 0.7209, 0.2543, 1.221, 1.1415, 1.2494),
     0.15623316951205718),
    ((1.3734, 0.3939, 0.4061),
     (1.4004, 1.8971, 0.2123),
     0.2481462235996182),
    ((1.5112, 0.9768, 1.2614, 1.2737, 0.6986, 1.9155, 1.9489, 1.3393, 0.7908, 0.2806, 0.2843, 0.6346),
     (0.3281, 1.377, 0.0006, 0.0428, 0.6549, 0.876, 1.819, 1.9656, 0.1101, 0.5509, 1.7852, 1.8033, 1.1983, 0.5176),
     0.712362557560787),
    ((1.259, 0.8574, 0.2465, 0.9544, 1.4215, 0.9564, 0.6164, 1.2061, 1.9471, 1.9814),
     (1.7712, 1.368, 1.2013, 1.2575, 1.3598, 1.4405, 1.6974, 1.7123, 1.0447, 1.0053, 0.3758, 0.0782, 1.5069, 1.5768),
     0.3253306437404907),
    ((0.8205, 1.971, 1.2374, 1.6652, 1.7807, 1.0938, 0.4047, 0.6834, 1.3008, 1.849, 1.0419, 1.7681),
     (0.7004, 1.2049, 0.6284, 1.3942),
     0.8637490622457067),
    ((1.5289, 0.6735, 1.3656, 1.7737, 1.4992, 0.7704, 1.4326, 1.2599, 1.4024, 0.9691, 0.7495, 0.7875, 0.8351, 0.5219, 0.8738, 0.3566),
     (1.9642, 0.5805, 1.9497, 0.9677, 0.1696, 1.759, 1.586, 0.5812, 1.9006, 0.9845, 1.4934, 1.6536, 1.6824),
     0.07612021818118284),
    ((0.4509, 1.1113, 1.6454, 0.1294, 1.9648, 1.9644, 0.1453, 1.5776, 1.3818, 1.0835),
     (0.8693, 1.225, 1.1414),
     0.5621829744280032),
    ((0.6823, 0.4654, 0.3563, 0.8947, 1.6302, 1.3281, 0.0175, 0.4706, 0.8463, 0.6646, 1.701, 1.0884, 1.7166, 1.3327),
     (0.8703, 0.9638, 1.9634, 1.0565),
     0.1914752278778768),
]


@pytest.mark.parametrize("sample_a,sample_b,expected_p", REFERENCE_PAIRS)
def test_p_values_match_frozen_reference(sample_a, sample_b, expected_p):
    result = t_test_one_tailed(sample_a, sample_b)
    assert result.p == pytest.approx(expected_p, abs=1e-6)


def test_reference_example_statistic():
    result = t_test_one_tailed((1.0, 2.0, 3.0, 4.0), (3.0, 4.0, 5.0, 6.0))
    assert result.t == pytest.approx(-2.1908902300206643, abs=1e-12)
    assert result.df == 6


def test_identical_samples_give_half():
    result = t_test_one_tailed((0.4, 0.4, 0.4), (0.4, 0.4, 0.4))
    assert result.p == 0.5
    assert result.t == 0.0


def test_zero_variance_unequal_means():
    lower = t_test_one_tailed((0.2, 0.2), (0.9, 0.9))
    higher = t_test_one_tailed((0.9, 0.9), (0.2, 0.2))
    assert lower.p == 0.0
    assert higher.p == 1.0


def test_requires_two_values_per_sample():
    with pytest.raises(ValueError):
        t_test_one_tailed((1.0,), (1.0, 2.0))


def test_cdf_midpoint_and_symmetry():
    assert student_t_cdf(0.0, 5) == 0.5
    assert student_t_cdf(-1.3, 7) == pytest.approx(1.0 - student_t_cdf(1.3, 7),
                                                   abs=1e-14)


def test_significance_levels_and_marks():
    assert significance_level(0.005) == "p01"
    assert significance_level(0.03) == "p05"
    assert significance_level(0.05) == "none"
    assert significance_level(0.01) == "p05"
    assert SIGNIFICANCE_MARKS["p01"] == "‡"
    assert SIGNIFICANCE_MARKS["p05"] == "†"
    assert SIGNIFICANCE_MARKS["none"] == ""


finite_floats = st.floats(min_value=0.0, max_value=2.0,
                          allow_nan=False, allow_infinity=False)
samples = st.lists(finite_floats, min_size=2, max_size=20)


@given(samples, samples)
def test_directions_are_complementary(sample_a, sample_b):
    forward = t_test_one_tailed(sample_a, sample_b)
    backward = t_test_one_tailed(sample_b, sample_a)
    assert 0.0 <= forward.p <= 1.0
    assert forward.p + backward.p == pytest.approx(1.0, abs=1e-9)


@given(samples, samples, st.floats(min_value=-5, max_value=5,
                                   allow_nan=False))
def test_shifting_both_samples_preserves_p(sample_a, sample_b, shift):
    base = t_test_one_tailed(sample_a, sample_b)
    moved = t_test_one_tailed([v + shift for v in sample_a],
                              [v + shift for v in sample_b])
    assert moved.p == pytest.approx(base.p, abs=1e-7)


@given(samples)
def test_lower_sample_never_above_half(sample):
    if len(set(sample)) == 1:
        return
    shifted = [v + 1.0 for v in sample]
    result = t_test_one_tailed(sample, shifted)
    assert result.p < 0.5

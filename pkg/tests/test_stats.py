import math
import random

import pytest

from gaze_autocal.stats import (
    paired_t_test,
    regularized_incomplete_beta,
    significance_stars,
    standard_error,
    student_t_cdf,
    welch_t_test,
)

from oracles import two_pass_se

# frozen high-precision oracle values (computed offline with an independent
# reference implementation before this module was written)
T_CDF_ORACLE = [
    (0.5, 1.0, 0.6475836176504333),
    (1.0, 8.0, 0.8267032464563329),
    (2.0, 3.5, 0.9369307387120432),
    (-1.5, 12.0, 0.0797287517566035),
    (3.2, 36.2, 0.9985713302975001),
    (0.0, 5.0, 0.5),
    (10.0, 2.0, 0.9950737714883371),
    (-4.0, 60.0, 8.816119353198702e-05),
    (1.0, 1.0, 0.7500000000000002),
    (2.5, 29.0, 0.9908373278307869),
]

BETAINC_ORACLE = [
    (0.5, 0.5, 0.3, 0.36901011956554536),
    (2.0, 3.0, 0.7, 0.9163),
    (32.0, 0.5, 0.9, 0.009689743742660066),
    (4.5, 1.5, 0.2, 0.0016925533721348482),
    (10.0, 10.0, 0.5, 0.5),
]


def test_incomplete_beta_matches_oracle():
    for a, b, x, expected in BETAINC_ORACLE:
        got = regularized_incomplete_beta(a, b, x)
        assert abs(got - expected) <= 1e-8 * max(abs(expected), 1e-300)


def test_t_cdf_matches_oracle():
    for t, dof, expected in T_CDF_ORACLE:
        got = student_t_cdf(t, dof)
        assert abs(got - expected) <= 1e-8 * max(abs(expected), 1e-12)


def test_cdf_symmetry_identities():
    assert student_t_cdf(0.0, 7.3) == 0.5
    for t in (0.1, 0.7, 1.3, 2.9, 5.0):
        for dof in (1.0, 4.0, 18.0, 133.7):
            assert abs(student_t_cdf(t, dof) + student_t_cdf(-t, dof) - 1.0) < 1e-12


def test_cdf_monotone_in_t():
    dof = 9.0
    ts = [i / 10 for i in range(-60, 61)]
    values = [student_t_cdf(t, dof) for t in ts]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_welch_example():
    r = welch_t_test([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
    assert abs(r.t_stat - (-1.0)) < 1e-12
    assert abs(r.dof - 8.0) < 1e-12
    assert abs(r.p_value - 0.34659350708733416) <= 1e-6 * 0.34659350708733416


def test_identical_lists_give_t0_p1():
    r = welch_t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert r.t_stat == 0.0
    assert r.p_value == 1.0


def test_separated_samples_significant():
    rng = random.Random(1)
    a = [0.0 + rng.gauss(0, 1e-3) for _ in range(10)]
    b = [1.0 + rng.gauss(0, 1e-3) for _ in range(10)]
    assert welch_t_test(a, b).p_value < 0.001


def test_zero_variance_rejected():
    with pytest.raises(ValueError, match="zero variance sample"):
        welch_t_test([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])


def test_too_small_samples_rejected():
    with pytest.raises(ValueError):
        welch_t_test([1.0], [1.0, 2.0])


def test_p_value_symmetric_under_swap():
    rng = random.Random(2)
    for _ in range(20):
        a = [rng.gauss(0, 1) for _ in range(rng.randint(3, 12))]
        b = [rng.gauss(0.5, 2) for _ in range(rng.randint(3, 12))]
        r1, r2 = welch_t_test(a, b), welch_t_test(b, a)
        assert abs(r1.p_value - r2.p_value) < 1e-12
        assert abs(r1.t_stat + r2.t_stat) < 1e-12


def test_standard_error_matches_two_pass():
    rng = random.Random(3)
    for _ in range(50):
        xs = [rng.uniform(-100, 100) for _ in range(rng.randint(2, 40))]
        se = standard_error(xs)
        ref = two_pass_se(xs)
        assert abs(se - ref) <= 1e-12 * max(abs(ref), 1e-12)


def test_paired_t_test_basics():
    a = [10.0, 12.0, 9.0, 11.0, 13.0]
    b = [9.0, 11.5, 8.0, 10.0, 12.0]
    r = paired_t_test(a, b)
    assert r.dof == 4.0
    assert r.t_stat > 0
    with pytest.raises(ValueError, match="zero variance"):
        paired_t_test(a, a)
    with pytest.raises(ValueError, match="equal length"):
        paired_t_test([1.0, 2.0], [1.0])


def test_significance_stars():
    assert significance_stars(0.0005) == "***"
    assert significance_stars(0.005) == "**"
    assert significance_stars(0.03) == "*"
    assert significance_stars(0.2) == ""


def test_cdf_against_quadrature():
    # independent check: integrate the t density numerically (Simpson)
    def t_pdf(x, v):
        return (
            math.gamma((v + 1) / 2)
            / (math.sqrt(v * math.pi) * math.gamma(v / 2))
            * (1 + x * x / v) ** (-(v + 1) / 2)
        )

    for t, dof in [(1.0, 8.0), (2.0, 3.5), (0.5, 12.0)]:
        n = 4000
        lo = 0.0
        h = t / n
        area = t_pdf(lo, dof) + t_pdf(t, dof)
        for i in range(1, n):
            area += t_pdf(lo + i * h, dof) * (4 if i % 2 else 2)
        area *= h / 3
        assert abs(student_t_cdf(t, dof) - (0.5 + area)) < 1e-9

"""Typing-efficiency metrics and the two-sided significance test.

The t distribution CDF is evaluated through the regularized incomplete
beta function computed with a modified-Lentz continued fraction, so the
package needs no numerical dependencies.  p-values use the identity
P(|T| > t) = I_x(v/2, 1/2) with x = v / (v + t^2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

_MAX_ITER = 300
_CF_EPS = 1e-15
_FPMIN = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction failed to converge (a={a}, b={b}, x={x})")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log(1.0 - x)
    )
    front = math.exp(ln_front)
    # the continued fraction converges fast only on one side of the mean
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, dof: float) -> float:
    """P(|T_dof| >= |t|)."""
    if dof <= 0:
        raise ValueError("dof must be positive")
    if t == 0.0:
        return 1.0
    return regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t))


def student_t_cdf(t: float, dof: float) -> float:
    """P(T_dof <= t); exactly 0.5 at t = 0 by symmetry."""
    if t == 0.0:
        return 0.5
    tail = 0.5 * student_t_two_sided_p(t, dof)
    return 1.0 - tail if t > 0 else tail


def mean(xs: list[float]) -> float:
    return math.fsum(xs) / len(xs)


def sample_variance(xs: list[float]) -> float:
    m = mean(xs)
    return math.fsum((x - m) ** 2 for x in xs) / (len(xs) - 1)


def standard_error(xs: list[float]) -> float:
    """Sample standard deviation / sqrt(n)."""
    return math.sqrt(sample_variance(xs) / len(xs))


@dataclass(frozen=True)
class TTestResult:
    t_stat: float
    dof: float
    p_value: float
    mean_a: float
    mean_b: float
    se_a: float
    se_b: float


def welch_t_test(a: list[float], b: list[float]) -> TTestResult:
    """Two-sided Welch's unequal-variance t-test."""
    if len(a) < 2 or len(b) < 2:
        raise ValueError("each sample needs at least 2 observations")
    va, vb = sample_variance(a), sample_variance(b)
    if va == 0.0 or vb == 0.0:
        raise ValueError("zero variance sample")
    na, nb = len(a), len(b)
    ma, mb = mean(a), mean(b)
    se2 = va / na + vb / nb
    t = (ma - mb) / math.sqrt(se2)
    dof = se2 * se2 / ((va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1))
    return TTestResult(
        t_stat=t,
        dof=dof,
        p_value=student_t_two_sided_p(t, dof),
        mean_a=ma,
        mean_b=mb,
        se_a=math.sqrt(va / na),
        se_b=math.sqrt(vb / nb),
    )


def paired_t_test(a: list[float], b: list[float]) -> TTestResult:
    """Two-sided paired t-test over per-subject differences."""
    if len(a) != len(b):
        raise ValueError("paired samples must have equal length")
    if len(a) < 2:
        raise ValueError("each sample needs at least 2 observations")
    diffs = [x - y for x, y in zip(a, b)]
    vd = sample_variance(diffs)
    if vd == 0.0:
        raise ValueError("zero variance sample")
    n = len(diffs)
    t = mean(diffs) / math.sqrt(vd / n)
    dof = float(n - 1)
    return TTestResult(
        t_stat=t,
        dof=dof,
        p_value=student_t_two_sided_p(t, dof),
        mean_a=mean(a),
        mean_b=mean(b),
        se_a=standard_error(a),
        se_b=standard_error(b),
    )


def significance_stars(p: float) -> str:
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""

"""Special functions and goodness-of-fit helpers shared by both batteries."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import InvalidParameterError

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 1_000_000


def erfc(x: float) -> float:
    return math.erfc(x)


def normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _gamma_series(a: float, x: float) -> float:
    # regularized lower gamma P(a, x); converges quickly for x < a + 1
    term = total = 1.0 / a
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cf(a: float, x: float) -> float:
    # regularized upper gamma Q(a, x) by modified Lentz; for x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def igamc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma function Q(a, x)."""
    if not (a > 0) or not (x >= 0) or math.isinf(a):
        raise InvalidParameterError(f"igamc needs a > 0 and x >= 0, got a={a}, x={x}")
    if x == 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _gamma_series(a, x)))
    return min(1.0, max(0.0, _gamma_cf(a, x)))


def igam(a: float, x: float) -> float:
    """Regularized lower incomplete gamma function P(a, x)."""
    if not (a > 0) or not (x >= 0):
        raise InvalidParameterError(f"igam needs a > 0 and x >= 0, got a={a}, x={x}")
    if x == 0:
        return 0.0
    if x < a + 1.0:
        return min(1.0, max(0.0, _gamma_series(a, x)))
    return min(1.0, max(0.0, 1.0 - _gamma_cf(a, x)))


def chi2_sf(stat: float, df: float) -> float:
    return igamc(df / 2.0, max(stat, 0.0) / 2.0)


def chi2_cdf(stat: float, df: float) -> float:
    return igam(df / 2.0, max(stat, 0.0) / 2.0)


def chi_square_bins(observed: Sequence[float], expected) -> float:
    """Pearson statistic; ``expected`` is a scalar or one value per bin."""
    obs = np.asarray(observed, dtype=np.float64)
    if obs.ndim != 1 or obs.size < 1:
        raise InvalidParameterError("need at least one bin")
    exp = np.broadcast_to(np.asarray(expected, dtype=np.float64), obs.shape)
    if np.any(exp <= 0):
        raise InvalidParameterError("expected counts must be positive")
    return float(np.sum((obs - exp) ** 2 / exp))


def kolmogorov_sf(lam: float) -> float:
    """Survival function of the limiting Kolmogorov distribution."""
    if lam <= 0:
        return 1.0
    if lam < 1.18:
        # theta-function form converges fast for small arguments
        y = math.exp(-math.pi ** 2 / (8.0 * lam * lam))
        s = 0.0
        for j in range(1, 60, 2):
            s += y ** (j * j)
        return min(1.0, max(0.0, 1.0 - math.sqrt(2.0 * math.pi) / lam * s))
    s = 0.0
    sign = 1.0
    for j in range(1, 101):
        term = math.exp(-2.0 * j * j * lam * lam)
        s += sign * term
        if term < 1e-300:
            break
        sign = -sign
    return min(1.0, max(0.0, 2.0 * s))


def ks_statistic(values: Sequence[float]) -> float:
    x = np.sort(np.asarray(values, dtype=np.float64))
    n = x.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - x), np.max(x - (i - 1) / n)))


def ks_uniform(pvalues: Sequence[float]) -> float:
    """Kolmogorov-Smirnov P-value of ``pvalues`` against Uniform[0, 1).

    Uses the asymptotic distribution with Stephens' finite-n scaling.
    """
    x = np.asarray(pvalues, dtype=np.float64)
    if x.size == 0:
        raise InvalidParameterError("ks_uniform needs at least one value")
    if np.any((x < 0) | (x > 1)):
        raise InvalidParameterError("values must lie in [0, 1]")
    d = ks_statistic(x)
    rn = math.sqrt(x.size)
    return kolmogorov_sf((rn + 0.12 + 0.11 / rn) * d)


def check_pvalue(p: float) -> float:
    if not (0.0 <= p <= 1.0):
        raise InvalidParameterError(f"P-value outside [0, 1]: {p}")
    return float(p)

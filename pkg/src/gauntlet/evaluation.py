"""Verdict arithmetic: proportion gate, P-value uniformity, scores."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameterError
from .numerics import chi_square_bins, igamc
from .outcome import TestOutcome

UNIFORMITY_THRESHOLD = 1e-4
UNIFORMITY_BINS = 10

PASS = "Pass"
FAIL = "Fail"
INAPPLICABLE = "Inapplicable"


@dataclass(frozen=True)
class ProportionGate:
    alpha: float
    n: int
    k: float = 3.0

    @property
    def p_bar(self) -> float:
        return 1.0 - self.alpha

    @property
    def lower(self) -> float:
        p = self.p_bar
        return p - self.k * math.sqrt(p * (1.0 - p) / self.n)

    @property
    def upper(self) -> float:
        p = self.p_bar
        return p + self.k * math.sqrt(p * (1.0 - p) / self.n)


def min_pass_rate(alpha: float, n: int, k: float = 3.0) -> float:
    """Lower end of the acceptable proportion interval for ``n`` samples."""
    if not 0.0 < alpha < 1.0:
        raise InvalidParameterError(f"alpha must lie in (0, 1), got {alpha}")
    if n < 1:
        raise InvalidParameterError(f"sample size must be >= 1, got {n}")
    return ProportionGate(alpha, n, k).lower


def pvalue_histogram(pvalues: Iterable[float], bins: int = UNIFORMITY_BINS) -> list[int]:
    """Counts in ``[i/bins, (i+1)/bins)``; a P-value of exactly 1 goes in the last bin."""
    if bins < 1:
        raise InvalidParameterError("need at least one bin")
    p = np.asarray(list(pvalues), dtype=np.float64)
    if p.size == 0:
        return [0] * bins
    idx = np.clip(np.floor(p * bins).astype(np.int64), 0, bins - 1)
    return np.bincount(idx, minlength=bins).tolist()


@dataclass(frozen=True)
class UniformityStat:
    counts: tuple[int, ...]
    sample_size: int
    chi2: float
    pvalue: float

    @property
    def uniform(self) -> bool:
        return self.pvalue >= UNIFORMITY_THRESHOLD


def uniformity_from_counts(counts: Sequence[int]) -> UniformityStat:
    counts = tuple(int(c) for c in counts)
    s = sum(counts)
    if s == 0:
        raise InvalidParameterError("uniformity needs at least one P-value")
    bins = len(counts)
    chi2 = chi_square_bins(counts, s / bins)
    return UniformityStat(counts, s, chi2, igamc((bins - 1) / 2.0, chi2 / 2.0))


def uniformity(pvalues: Iterable[float]) -> UniformityStat:
    """Ten-bin chi-square test of P-value uniformity, 9 degrees of freedom."""
    pvalues = list(pvalues)
    if not pvalues:
        raise InvalidParameterError("uniformity needs at least one P-value")
    return uniformity_from_counts(pvalue_histogram(pvalues))


@dataclass(frozen=True)
class ScoreRule:
    """Per-P-value penalty by extremity band; high totals mean poor randomness."""

    bad: float = 0.002
    suspect: float = 0.05
    weights: tuple[int, int, int, int] = (4, 2, 1, 0)

    def score(self, p: float) -> int:
        w_exact, w_bad, w_suspect, w_good = self.weights
        if p == 0.0 or p == 1.0:
            return w_exact
        if p >= 1.0 - self.bad or p <= self.bad:
            return w_bad
        if 1.0 - self.suspect <= p < 1.0 - self.bad or self.bad < p <= self.suspect:
            return w_suspect
        return w_good


DEFAULT_SCORE_RULE = ScoreRule()


def pvalue_score(p: float) -> int:
    return DEFAULT_SCORE_RULE.score(p)


def meysenburg_score(pvalues: Iterable[float], rule: ScoreRule = DEFAULT_SCORE_RULE) -> int:
    return sum(rule.score(float(p)) for p in pvalues)


def max_score(pvalue_count: int, rule: ScoreRule = DEFAULT_SCORE_RULE) -> int:
    return pvalue_count * rule.weights[0]


@dataclass(frozen=True)
class NistVerdict:
    test: str
    applicable_sequences: int
    pvalue_count: int
    passed: int
    proportion: float | None
    min_pass_rate: float | None
    uniformity: UniformityStat | None
    verdict: str

    def as_dict(self) -> dict:
        u = self.uniformity
        return {
            "test": self.test,
            "applicable_sequences": self.applicable_sequences,
            "pvalue_count": self.pvalue_count,
            "passed": self.passed,
            "proportion": self.proportion,
            "min_pass_rate": self.min_pass_rate,
            "histogram": list(u.counts) if u else None,
            "uniformity_chi2": u.chi2 if u else None,
            "uniformity_p": u.pvalue if u else None,
            "verdict": self.verdict,
        }


def nist_verdict(outcomes: Sequence[TestOutcome], alpha: float = 0.01,
                 test: str | None = None) -> NistVerdict:
    """Judge one test over all sequences of a test file.

    Every P-value from an applicable sequence is one trial: the proportion
    is passing P-values over all P-values, gated by :func:`min_pass_rate` at
    that count, and the same pooled P-values go through
    :func:`uniformity`.  Pass requires both.
    """
    name = test or (outcomes[0].test if outcomes else "")
    applicable = [o for o in outcomes if o.applicable]
    pvalues = [p for o in applicable for p in o.pvalues]
    if not pvalues:
        return NistVerdict(name, 0, 0, 0, None, None, None, INAPPLICABLE)
    passed = sum(p >= alpha for p in pvalues)
    proportion = passed / len(pvalues)
    gate = min_pass_rate(alpha, len(pvalues))
    stat = uniformity(pvalues)
    verdict = PASS if proportion >= gate and stat.pvalue >= UNIFORMITY_THRESHOLD else FAIL
    return NistVerdict(name, len(applicable), len(pvalues), passed, proportion, gate, stat,
                       verdict)

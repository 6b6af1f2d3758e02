"""Test identifiers, parameters and the per-sequence entry points."""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from ..bitstream import BitSequence
from ..errors import InvalidParameterError
from ..outcome import TestOutcome
from . import suite


class NistTestId(str, enum.Enum):
    FREQUENCY = "Frequency"
    BLOCK_FREQUENCY = "BlockFrequency"
    CUMULATIVE_SUMS = "CumulativeSums"
    RUNS = "Runs"
    LONGEST_RUN = "LongestRun"
    RANK = "Rank"
    FFT = "FFT"
    NON_OVERLAPPING_TEMPLATE = "NonOverlappingTemplate"
    OVERLAPPING_TEMPLATE = "OverlappingTemplate"
    UNIVERSAL = "Universal"
    APPROXIMATE_ENTROPY = "ApproximateEntropy"
    RANDOM_EXCURSIONS = "RandomExcursions"
    RANDOM_EXCURSIONS_VARIANT = "RandomExcursionsVariant"
    SERIAL = "Serial"
    LINEAR_COMPLEXITY = "LinearComplexity"

    @classmethod
    def parse(cls, value) -> "NistTestId":
        if isinstance(value, cls):
            return value
        for member in cls:
            if member.value.lower() == str(value).lower():
                return member
        raise InvalidParameterError(f"unknown NIST test {value!r}")


ALL_TESTS = tuple(NistTestId)


@dataclass(frozen=True)
class NistParams:
    n: int = 2 ** 20
    alpha: float = 0.01
    block_frequency_m: int = 128
    non_overlapping_m: int = 9
    non_overlapping_blocks: int = 8
    overlapping_m: int = 9
    overlapping_block: int = 1032
    universal_l: int = 7
    universal_q: int = 1280
    apen_m: int = 10
    serial_m: int = 16
    linear_complexity_m: int = 500

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InvalidParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.n < 1:
            raise InvalidParameterError(f"sequence length must be positive, got {self.n}")
        for name in ("block_frequency_m", "non_overlapping_m", "non_overlapping_blocks",
                     "overlapping_m", "overlapping_block", "universal_l", "universal_q",
                     "apen_m", "serial_m", "linear_complexity_m"):
            if getattr(self, name) < 1:
                raise InvalidParameterError(f"{name} must be positive")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MonobitStat:
    """Signed sum of the bits mapped 0 -> -1, 1 -> +1."""

    sn: int
    n: int

    def __post_init__(self):
        if abs(self.sn) > self.n or (self.sn - self.n) % 2:
            raise InvalidParameterError(f"inconsistent monobit sum {self.sn} for n={self.n}")


def monobit_stat(seq: BitSequence) -> MonobitStat:
    if seq.n < 1:
        raise InvalidParameterError("monobit statistic needs at least one bit")
    ones = int(seq.bits.sum(dtype=np.int64))
    return MonobitStat(2 * ones - seq.n, seq.n)


def monobit_pvalue(stat: MonobitStat | int, n: int | None = None) -> float:
    """``erfc(|Sn| / sqrt(2n))``."""
    if isinstance(stat, MonobitStat):
        sn, n = stat.sn, stat.n if n is None else n
    else:
        sn = int(stat)
    if n is None or n < 1:
        raise InvalidParameterError("monobit P-value needs n >= 1")
    return suite.monobit_pvalue_from_sum(sn, n)


_DISPATCH = {
    NistTestId.FREQUENCY: suite.frequency,
    NistTestId.BLOCK_FREQUENCY: suite.block_frequency,
    NistTestId.CUMULATIVE_SUMS: suite.cumulative_sums,
    NistTestId.RUNS: suite.runs,
    NistTestId.LONGEST_RUN: suite.longest_run,
    NistTestId.RANK: suite.rank,
    NistTestId.FFT: suite.spectral,
    NistTestId.NON_OVERLAPPING_TEMPLATE: suite.non_overlapping_template,
    NistTestId.OVERLAPPING_TEMPLATE: suite.overlapping_template,
    NistTestId.UNIVERSAL: suite.universal,
    NistTestId.APPROXIMATE_ENTROPY: suite.approximate_entropy,
    NistTestId.RANDOM_EXCURSIONS: suite.random_excursions,
    NistTestId.RANDOM_EXCURSIONS_VARIANT: suite.random_excursions_variant,
    NistTestId.SERIAL: suite.serial,
    NistTestId.LINEAR_COMPLEXITY: suite.linear_complexity,
}


def run_test(test, seq: BitSequence, params: NistParams | None = None) -> TestOutcome:
    test = NistTestId.parse(test)
    params = params or NistParams()
    if seq.n != params.n:
        raise InvalidParameterError(
            f"sequence has {seq.n} bits but parameters are for n={params.n}")
    pvalues = _DISPATCH[test](seq.bits, params)
    if pvalues is None:
        return TestOutcome.inapplicable(test.value, "sequence cannot support this test")
    alpha = params.alpha
    return TestOutcome.judged(test.value, pvalues, lambda p: p >= alpha)


def run_battery(seq: BitSequence, params: NistParams | None = None,
                tests: Iterable | None = None) -> list[TestOutcome]:
    params = params or NistParams(n=seq.n)
    chosen = ALL_TESTS if tests is None else [NistTestId.parse(t) for t in tests]
    return [run_test(t, seq, params) for t in chosen]


def expected_pvalue_counts(params: NistParams | None = None) -> dict[str, int]:
    """P-values each test emits on an applicable sequence."""
    params = params or NistParams()
    counts = {t.value: 1 for t in ALL_TESTS}
    counts[NistTestId.CUMULATIVE_SUMS.value] = 2
    counts[NistTestId.SERIAL.value] = 2
    counts[NistTestId.RANDOM_EXCURSIONS.value] = 8
    counts[NistTestId.RANDOM_EXCURSIONS_VARIANT.value] = 18
    counts[NistTestId.NON_OVERLAPPING_TEMPLATE.value] = len(
        suite.aperiodic_templates(params.non_overlapping_m))
    return counts

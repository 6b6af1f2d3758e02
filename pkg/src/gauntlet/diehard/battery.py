"""Entry points for running Diehard tests on pieces."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from ..errors import InvalidParameterError
from ..outcome import TestOutcome
from . import suite
from .roster import PIECE_BYTES, DiehardTestId

INTEL_LOW = 0.0001
INTEL_HIGH = 0.9999

_DISPATCH = {
    DiehardTestId.BDAY: suite.birthday_spacings,
    DiehardTestId.RANK32x32: suite.rank_32x32,
    DiehardTestId.RANK6x8: suite.rank_6x8,
    DiehardTestId.C1STREAM: suite.count_ones_stream,
    DiehardTestId.PARKLOT: suite.parking_lot,
    DiehardTestId.MINDIST: suite.minimum_distance,
    DiehardTestId.SPHERES3D: suite.spheres_3d,
    DiehardTestId.SQUEEZE: suite.squeeze,
    DiehardTestId.OSUM: suite.overlapping_sums,
    DiehardTestId.RUNS: suite.runs_up_down,
    DiehardTestId.CRAPS: suite.craps,
}


def intel_pass(p: float) -> bool:
    """A P-value fails when it is at or beyond 0.0001 from either end."""
    return INTEL_LOW < p < INTEL_HIGH


def worst_case(pvalues: Iterable[float]) -> float:
    """The P-value farthest from 0.5; ties go to the larger value."""
    values = [float(p) for p in pvalues]
    if not values:
        raise InvalidParameterError("worst_case needs at least one P-value")
    return max(values, key=lambda p: (abs(p - 0.5), p))


def piece_words(piece: bytes, piece_bytes: int = PIECE_BYTES) -> np.ndarray:
    if len(piece) != piece_bytes:
        raise InvalidParameterError(f"piece has {len(piece)} bytes, expected {piece_bytes}")
    if piece_bytes % 4:
        raise InvalidParameterError("piece size must be a multiple of 4 bytes")
    return np.frombuffer(piece, dtype="<u4")


def run_diehard(test, piece: bytes, piece_bytes: int = PIECE_BYTES) -> TestOutcome:
    test = DiehardTestId.parse(test)
    if not test.implemented:
        raise NotImplementedError(f"Diehard test {test.value} is not implemented")
    words = piece_words(piece, piece_bytes)
    pvalues = _DISPATCH[test](words)
    if len(pvalues) != test.expected_pvalue_count:
        raise AssertionError(f"{test.value} produced {len(pvalues)} P-values")
    return TestOutcome.judged(test.value, pvalues, intel_pass)


def run_diehard_battery(piece: bytes, tests: Iterable | None = None,
                        piece_bytes: int = PIECE_BYTES) -> list[TestOutcome]:
    from .roster import IMPLEMENTED_TESTS
    chosen = IMPLEMENTED_TESTS if tests is None else [DiehardTestId.parse(t) for t in tests]
    return [run_diehard(t, piece, piece_bytes) for t in chosen]

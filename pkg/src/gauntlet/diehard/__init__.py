"""Diehard-style battery over fixed-size byte pieces."""

from .battery import intel_pass, piece_words, run_diehard, run_diehard_battery, worst_case
from .roster import (ALL_TESTS, IMPLEMENTED_TESTS, PIECE_BYTES, DiehardTestId,
                     total_pvalues)

__all__ = [
    "ALL_TESTS",
    "IMPLEMENTED_TESTS",
    "PIECE_BYTES",
    "DiehardTestId",
    "intel_pass",
    "piece_words",
    "run_diehard",
    "run_diehard_battery",
    "total_pvalues",
    "worst_case",
]

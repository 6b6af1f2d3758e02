"""NIST SP 800-22 battery over fixed-length bit sequences."""

from .battery import (
    ALL_TESTS,
    MonobitStat,
    NistParams,
    NistTestId,
    expected_pvalue_counts,
    monobit_pvalue,
    monobit_stat,
    run_battery,
    run_test,
)

__all__ = [
    "ALL_TESTS",
    "MonobitStat",
    "NistParams",
    "NistTestId",
    "expected_pvalue_counts",
    "monobit_pvalue",
    "monobit_stat",
    "run_battery",
    "run_test",
]

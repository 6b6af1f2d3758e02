"""Result record shared by the NIST and Diehard batteries."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable


@dataclass(frozen=True)
class TestOutcome:
    """P-values one test produced on one input, with a pass flag per P-value.

    ``applicable`` is False when the input could not support the test
    (too short, too few random-walk cycles); such outcomes carry no
    P-values and are left out of proportion denominators.
    """

    __test__ = False  # not a pytest class

    test: str
    pvalues: tuple[float, ...] = ()
    passes: tuple[bool, ...] = ()
    applicable: bool = True
    params: dict = field(default_factory=dict, compare=False)

    @classmethod
    def judged(cls, test: str, pvalues: Iterable[float], rule: Callable[[float], bool],
               params: dict | None = None) -> "TestOutcome":
        pvalues = tuple(float(p) for p in pvalues)
        return cls(test, pvalues, tuple(bool(rule(p)) for p in pvalues), True, params or {})

    @classmethod
    def inapplicable(cls, test: str, reason: str = "") -> "TestOutcome":
        return cls(test, (), (), False, {"reason": reason} if reason else {})

"""The eighteen Diehard tests and how many P-values each reports."""

from __future__ import annotations

import enum

from ..errors import InvalidParameterError

PIECE_BYTES = 11_468_800


class DiehardTestId(str, enum.Enum):
    BDAY = "BDAY"
    OPERM5 = "OPERM5"
    RANK31x31 = "RANK31x31"
    RANK32x32 = "RANK32x32"
    RANK6x8 = "RANK6x8"
    BITSTREAM = "BITSTREAM"
    OPSO = "OPSO"
    OQSO = "OQSO"
    DNA = "DNA"
    C1STREAM = "C1STREAM"
    C1BYTE = "C1BYTE"
    PARKLOT = "PARKLOT"
    MINDIST = "MINDIST"
    SPHERES3D = "3D"
    SQUEEZE = "SQUEEZE"
    OSUM = "OSUM"
    RUNS = "RUNS"
    CRAPS = "CRAPS"

    @property
    def expected_pvalue_count(self) -> int:
        return _COUNTS[self]

    @property
    def implemented(self) -> bool:
        return self in IMPLEMENTED

    @property
    def description(self) -> str:
        return _NAMES[self]

    @classmethod
    def parse(cls, value) -> "DiehardTestId":
        if isinstance(value, cls):
            return value
        for member in cls:
            if member.value.lower() == str(value).lower():
                return member
        raise InvalidParameterError(f"unknown Diehard test {value!r}")


_COUNTS = {
    DiehardTestId.BDAY: 10,
    DiehardTestId.OPERM5: 2,
    DiehardTestId.RANK31x31: 1,
    DiehardTestId.RANK32x32: 1,
    DiehardTestId.RANK6x8: 26,
    DiehardTestId.BITSTREAM: 20,
    DiehardTestId.OPSO: 23,
    DiehardTestId.OQSO: 28,
    DiehardTestId.DNA: 31,
    DiehardTestId.C1STREAM: 2,
    DiehardTestId.C1BYTE: 25,
    DiehardTestId.PARKLOT: 11,
    DiehardTestId.MINDIST: 1,
    DiehardTestId.SPHERES3D: 21,
    DiehardTestId.SQUEEZE: 1,
    DiehardTestId.OSUM: 11,
    DiehardTestId.RUNS: 4,
    DiehardTestId.CRAPS: 2,
}

_NAMES = {
    DiehardTestId.BDAY: "Birthday spacings",
    DiehardTestId.OPERM5: "Overlapping 5-permutations",
    DiehardTestId.RANK31x31: "Binary rank 31x31",
    DiehardTestId.RANK32x32: "Binary rank 32x32",
    DiehardTestId.RANK6x8: "Binary rank 6x8",
    DiehardTestId.BITSTREAM: "Bitstream",
    DiehardTestId.OPSO: "Overlapping pairs sparse occupancy",
    DiehardTestId.OQSO: "Overlapping quadruples sparse occupancy",
    DiehardTestId.DNA: "DNA",
    DiehardTestId.C1STREAM: "Count the 1s in a stream of bytes",
    DiehardTestId.C1BYTE: "Count the 1s in specific bytes",
    DiehardTestId.PARKLOT: "Parking lot",
    DiehardTestId.MINDIST: "Minimum distance",
    DiehardTestId.SPHERES3D: "3D spheres",
    DiehardTestId.SQUEEZE: "Squeeze",
    DiehardTestId.OSUM: "Overlapping sums",
    DiehardTestId.RUNS: "Runs up and down",
    DiehardTestId.CRAPS: "Craps",
}

IMPLEMENTED = frozenset({
    DiehardTestId.BDAY,
    DiehardTestId.RANK32x32,
    DiehardTestId.RANK6x8,
    DiehardTestId.C1STREAM,
    DiehardTestId.PARKLOT,
    DiehardTestId.MINDIST,
    DiehardTestId.SPHERES3D,
    DiehardTestId.SQUEEZE,
    DiehardTestId.OSUM,
    DiehardTestId.RUNS,
    DiehardTestId.CRAPS,
})

ALL_TESTS = tuple(DiehardTestId)
IMPLEMENTED_TESTS = tuple(t for t in ALL_TESTS if t in IMPLEMENTED)


def total_pvalues(tests=ALL_TESTS) -> int:
    return sum(DiehardTestId.parse(t).expected_pvalue_count for t in tests)

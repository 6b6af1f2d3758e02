"""Bit sequences and test-file assembly.

Bytes expand MSB-first: the byte 0xCB becomes 1,1,0,0,1,0,1,1. Every
statistic computed downstream depends on this convention.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameterError, UndefinedRatioError

DEFAULT_SKIP_BYTES = 1024


class BitSequence:
    """Immutable ordered sequence of bits.

    Backed either by packed bytes (lazily unpacked) or by an explicit 0/1
    array.  ``bits`` is a read-only ``uint8`` array.
    """

    __slots__ = ("_packed", "_bits", "_n")

    def __init__(self, bits: Iterable[int] | np.ndarray):
        arr = np.array(bits, dtype=np.uint8).ravel()
        if arr.size and arr.max() > 1:
            raise InvalidParameterError("bits must be 0 or 1")
        arr.flags.writeable = False
        self._bits = arr
        self._packed = None
        self._n = int(arr.size)

    @classmethod
    def from_packed(cls, data: bytes | memoryview) -> "BitSequence":
        seq = cls.__new__(cls)
        seq._packed = bytes(data)
        seq._bits = None
        seq._n = 8 * len(seq._packed)
        return seq

    @classmethod
    def from_string(cls, text: str) -> "BitSequence":
        text = "".join(text.split())
        if set(text) - {"0", "1"}:
            raise InvalidParameterError(f"not a bit string: {text!r}")
        return cls(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    @property
    def n(self) -> int:
        return self._n

    @property
    def bits(self) -> np.ndarray:
        if self._bits is None:
            arr = np.unpackbits(np.frombuffer(self._packed, dtype=np.uint8))
            arr.flags.writeable = False
            self._bits = arr
        return self._bits

    def to_bytes(self) -> bytes:
        """Pack back into bytes; a trailing partial byte is zero-padded."""
        if self._packed is not None:
            return self._packed
        return np.packbits(self.bits).tobytes()

    def __len__(self) -> int:
        return self._n

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitSequence):
            return NotImplemented
        return self._n == other._n and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self._n, self.bits.tobytes()))

    def __str__(self) -> str:
        return (self.bits + ord("0")).tobytes().decode("ascii")

    def __repr__(self) -> str:
        if self._n <= 32:
            return f"BitSequence('{self}')"
        return f"BitSequence(n={self._n})"


@dataclass(frozen=True)
class StreamAssembly:
    source_files: tuple[tuple[str, int], ...]
    skip_bytes: int
    total_bytes: int


def from_bytes(data: bytes) -> BitSequence:
    return BitSequence.from_packed(data)


def _read(path) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise OSError(f"cannot read {os.fspath(path)}: {exc.strerror or exc}") from exc


def _check_skip(skip_bytes: int) -> None:
    if skip_bytes < 0:
        raise InvalidParameterError(f"skip_bytes must be >= 0, got {skip_bytes}")


def skip_prefix(data: bytes, skip_bytes: int = DEFAULT_SKIP_BYTES) -> bytes:
    _check_skip(skip_bytes)
    return data[skip_bytes:]


def plan_assembly(files: Sequence, skip_bytes: int = DEFAULT_SKIP_BYTES) -> StreamAssembly:
    """Size-only view of what :func:`assemble` would produce."""
    _check_skip(skip_bytes)
    sizes = []
    for path in files:
        try:
            sizes.append((os.fspath(path), os.path.getsize(path)))
        except OSError as exc:
            raise OSError(f"cannot read {os.fspath(path)}: {exc.strerror or exc}") from exc
    total = sum(max(0, size - skip_bytes) for _, size in sizes)
    return StreamAssembly(tuple(sizes), skip_bytes, total)


def assemble(files: Sequence, skip_bytes: int = DEFAULT_SKIP_BYTES) -> bytes:
    """Concatenate ``files`` in order, dropping the first ``skip_bytes`` of each."""
    _check_skip(skip_bytes)
    return b"".join(_read(path)[skip_bytes:] for path in files)


def sequence_count(nbytes: int, seq_len_bits: int) -> int:
    if seq_len_bits <= 0 or seq_len_bits % 8:
        raise InvalidParameterError(
            f"sequence length must be a positive multiple of 8 bits, got {seq_len_bits}")
    return (8 * nbytes) // seq_len_bits


def piece_count(nbytes: int, piece_bytes: int) -> int:
    if piece_bytes <= 0:
        raise InvalidParameterError(f"piece size must be positive, got {piece_bytes}")
    return nbytes // piece_bytes


def split_sequences(data: bytes, seq_len_bits: int) -> list[BitSequence]:
    """Cut ``data`` into whole sequences of ``seq_len_bits``; the tail is dropped."""
    count = sequence_count(len(data), seq_len_bits)
    step = seq_len_bits // 8
    view = memoryview(data)
    return [BitSequence.from_packed(view[i * step:(i + 1) * step]) for i in range(count)]


def split_pieces(data: bytes, piece_bytes: int) -> list[bytes]:
    count = piece_count(len(data), piece_bytes)
    return [bytes(data[i * piece_bytes:(i + 1) * piece_bytes]) for i in range(count)]


def counts(seq: BitSequence) -> tuple[int, int]:
    """Return ``(zeros, ones)``."""
    if seq._packed is not None:
        ones = int(np.unpackbits(np.frombuffer(seq._packed, dtype=np.uint8)).sum(dtype=np.int64))
    else:
        ones = int(seq.bits.sum(dtype=np.int64))
    return seq.n - ones, ones


def proportion_difference(seq: BitSequence) -> float:
    """``1 - ones/zeros``; zero for a balanced sequence."""
    zeros, ones = counts(seq)
    if zeros == 0:
        raise UndefinedRatioError("proportion difference undefined: sequence has no zeros")
    return 1.0 - ones / zeros

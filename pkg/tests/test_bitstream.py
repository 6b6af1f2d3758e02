import numpy as np
import pytest
from hypothesis import given, strategies as st

from gauntlet import bitstream
from gauntlet.bitstream import BitSequence
from gauntlet.errors import InvalidParameterError, UndefinedRatioError


def test_bytes_expand_msb_first():
    assert str(bitstream.from_bytes(b"\xcb")) == "11001011"
    assert str(bitstream.from_bytes(b"\x01\x80")) == "0000000110000000"


def test_from_string_and_rejects_non_bits():
    seq = BitSequence.from_string("1100 1011 01")
    assert seq.n == 10
    assert str(seq) == "1100101101"
    with pytest.raises(InvalidParameterError):
        BitSequence.from_string("10201")
    with pytest.raises(InvalidParameterError):
        BitSequence([0, 1, 2])


def test_bits_are_read_only():
    seq = bitstream.from_bytes(b"\xff")
    with pytest.raises(ValueError):
        seq.bits[0] = 0


def test_packed_and_explicit_sequences_compare_equal():
    a = bitstream.from_bytes(b"\xa5\x0f")
    b = BitSequence([1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 1, 1, 1])
    assert a == b
    assert hash(a) == hash(b)
    assert b.to_bytes() == b"\xa5\x0f"


def test_skip_prefix():
    assert bitstream.skip_prefix(b"abcdef", 2) == b"cdef"
    assert bitstream.skip_prefix(b"ab", 1024) == b""
    with pytest.raises(InvalidParameterError):
        bitstream.skip_prefix(b"ab", -1)


def test_assemble_skips_each_file(tmp_path):
    paths = []
    for i, size in enumerate([3000, 500, 2048]):
        p = tmp_path / f"f{i}"
        p.write_bytes(bytes([i + 1]) * size)
        paths.append(p)
    data = bitstream.assemble(paths, 1024)
    assert data == b"\x01" * 1976 + b"\x03" * 1024
    plan = bitstream.plan_assembly(paths, 1024)
    assert plan.total_bytes == len(data)


def test_assemble_reports_unreadable_path(tmp_path):
    missing = tmp_path / "nope.bin"
    with pytest.raises(OSError, match="nope.bin"):
        bitstream.assemble([missing])


def test_sequence_and_piece_counts():
    assert bitstream.sequence_count(131072 * 3 + 5, 2 ** 20) == 3
    assert bitstream.piece_count(11_468_800 * 2 - 1, 11_468_800) == 1
    with pytest.raises(InvalidParameterError):
        bitstream.sequence_count(100, 0)
    with pytest.raises(InvalidParameterError):
        bitstream.sequence_count(100, 12)
    with pytest.raises(InvalidParameterError):
        bitstream.piece_count(100, 0)


def test_split_drops_the_tail():
    data = bytes(range(256)) * 10
    seqs = bitstream.split_sequences(data, 1024)
    assert len(seqs) == 20
    assert all(s.n == 1024 for s in seqs)
    assert seqs[1].to_bytes() == data[128:256]
    pieces = bitstream.split_pieces(data, 1000)
    assert [len(p) for p in pieces] == [1000, 1000]


def test_counts_and_proportion_difference():
    seq = BitSequence.from_string("1100101101")
    assert bitstream.counts(seq) == (4, 6)
    assert bitstream.proportion_difference(seq) == pytest.approx(1 - 6 / 4)
    assert bitstream.proportion_difference(BitSequence.from_string("0110")) == 0.0
    with pytest.raises(UndefinedRatioError):
        bitstream.proportion_difference(BitSequence.from_string("111"))


@given(st.binary(min_size=1, max_size=300))
def test_counts_sum_to_length(data):
    seq = bitstream.from_bytes(data)
    zeros, ones = bitstream.counts(seq)
    assert zeros + ones == seq.n == 8 * len(data)
    assert ones == int(np.unpackbits(np.frombuffer(data, np.uint8)).sum())

import os

import pytest
from hypothesis import given, settings, strategies as st

from gauntlet import codecs
from gauntlet.codecs import CodecId, CompressedBlob, huffman
from gauntlet.errors import DecodeError, UndefinedRatioError

from corpus import english_text

ALL = list(CodecId)

SAMPLES = [
    b"",
    b"a",
    b"aa",
    b"TOBEORNOTTOBEORTOBEORNOT",
    bytes(5000),
    bytes(range(256)) * 20,
    os.urandom(3000),
]


@pytest.mark.parametrize("codec", ALL)
@pytest.mark.parametrize("data", SAMPLES, ids=range(len(SAMPLES)))
def test_round_trip(codec, data):
    blob = codecs.compress(codec, data)
    assert codecs.decompress(blob) == data
    again = CompressedBlob.from_bytes(blob.to_bytes())
    assert again == blob


@pytest.mark.parametrize("codec", ALL)
def test_text_compresses(codec):
    text = english_text(200_000, seed=3)
    blob = codecs.compress(codec, text)
    assert codecs.decompress(blob) == text
    assert codecs.compression_ratio(blob) > 1.4


def test_lzw_crosses_dictionary_reset():
    data = english_text(400_000, seed=4) + os.urandom(20_000)
    blob = codecs.compress("lzw", data)
    assert codecs.decompress(blob) == data


def test_container_header_layout():
    raw = codecs.compress("lzss", b"hello hello hello").to_bytes()
    assert raw[0] == codecs.MAGIC
    assert raw[1] == CodecId.LZSS.wire_id == 3
    assert int.from_bytes(raw[2:10], "little") == 17


def test_container_rejects_garbage():
    with pytest.raises(DecodeError):
        CompressedBlob.from_bytes(b"\xc7\x01")
    with pytest.raises(DecodeError):
        CompressedBlob.from_bytes(b"\x00" * 12)
    with pytest.raises(DecodeError):
        CompressedBlob.from_bytes(b"\xc7\x09" + bytes(8))


@pytest.mark.parametrize("codec", ALL)
def test_truncated_payload_raises_with_offset(codec):
    data = english_text(20_000, seed=5)
    blob = codecs.compress(codec, data)
    cut = CompressedBlob(blob.codec, blob.payload[: len(blob.payload) // 2], blob.original_len)
    with pytest.raises(DecodeError) as info:
        codecs.decompress(cut)
    assert info.value.offset is not None


def test_codec_parse():
    assert CodecId.parse("Huffman") is CodecId.HUFFMAN
    with pytest.raises(ValueError, match="unknown codec"):
        CodecId.parse("zstd")


def test_compression_ratio_undefined_for_empty():
    with pytest.raises(UndefinedRatioError):
        codecs.compression_ratio(codecs.compress("huffman", b""))
    blob = codecs.compress("huffman", b"abcabc")
    assert codecs.compression_ratio(blob) == 6 / len(blob.payload)


def test_huffman_code_lengths_are_prefix_free():
    freqs = [0] * 256
    for i, f in enumerate([45, 13, 12, 16, 9, 5]):
        freqs[i] = f
    lengths = huffman.code_lengths(freqs)
    assert [lengths[i] for i in range(6)] == [1, 3, 3, 3, 4, 4]
    assert sum(2.0 ** -l for l in lengths if l) == 1.0


@settings(max_examples=250, deadline=None)
@given(st.sampled_from(ALL), st.binary(max_size=2000))
def test_round_trip_property(codec, data):
    assert codecs.decompress(codecs.compress(codec, data)) == data

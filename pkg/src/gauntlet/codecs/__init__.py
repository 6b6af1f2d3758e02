"""The four lossless codecs and their shared container format.

Container layout (all multi-byte fields little-endian)::

    offset  size  field
    0       1     magic 0xC7
    1       1     codec id: 1 huffman, 2 arithmetic, 3 lzss, 4 lzw
    2       8     original length in bytes (unsigned)
    10      ...   codec payload

An empty input produces the header alone.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass

from ..errors import DecodeError, UndefinedRatioError
from . import arithmetic, huffman, lzss, lzw

MAGIC = 0xC7
HEADER = struct.Struct("<BBQ")


class CodecId(str, enum.Enum):
    HUFFMAN = "huffman"
    ARITHMETIC = "arithmetic"
    LZSS = "lzss"
    LZW = "lzw"

    @property
    def wire_id(self) -> int:
        return _WIRE_IDS[self]

    @classmethod
    def parse(cls, value) -> "CodecId":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(c.value for c in cls)
            raise ValueError(f"unknown codec {value!r}; expected one of {names}") from None


_WIRE_IDS = {CodecId.HUFFMAN: 1, CodecId.ARITHMETIC: 2, CodecId.LZSS: 3, CodecId.LZW: 4}
_BY_WIRE_ID = {v: k for k, v in _WIRE_IDS.items()}
_MODULES = {
    CodecId.HUFFMAN: huffman,
    CodecId.ARITHMETIC: arithmetic,
    CodecId.LZSS: lzss,
    CodecId.LZW: lzw,
}


@dataclass(frozen=True)
class CompressedBlob:
    codec: CodecId
    payload: bytes
    original_len: int

    def to_bytes(self) -> bytes:
        return HEADER.pack(MAGIC, self.codec.wire_id, self.original_len) + self.payload

    @classmethod
    def from_bytes(cls, data: bytes) -> "CompressedBlob":
        if len(data) < HEADER.size:
            raise DecodeError("truncated container header", len(data))
        magic, wire_id, original_len = HEADER.unpack_from(data)
        if magic != MAGIC:
            raise DecodeError(f"bad magic byte 0x{magic:02x}", 0)
        if wire_id not in _BY_WIRE_ID:
            raise DecodeError(f"unknown codec id {wire_id}", 1)
        return cls(_BY_WIRE_ID[wire_id], bytes(data[HEADER.size:]), original_len)


def compress(codec, data: bytes) -> CompressedBlob:
    codec = CodecId.parse(codec)
    data = bytes(data)
    return CompressedBlob(codec, _MODULES[codec].encode(data), len(data))


def decompress(blob: CompressedBlob) -> bytes:
    if blob.original_len == 0:
        if blob.payload:
            raise DecodeError("payload present for empty input", 0)
        return b""
    return _MODULES[blob.codec].decode(blob.payload, blob.original_len)


def compression_ratio(blob: CompressedBlob) -> float:
    """``original_len / len(payload)``; above 1 means the data shrank."""
    if blob.original_len == 0:
        raise UndefinedRatioError("compression ratio undefined for empty input")
    if not blob.payload:
        raise UndefinedRatioError("compression ratio undefined for empty payload")
    return blob.original_len / len(blob.payload)


__all__ = [
    "CodecId",
    "CompressedBlob",
    "compress",
    "decompress",
    "compression_ratio",
    "MAGIC",
]

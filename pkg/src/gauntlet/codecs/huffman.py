"""Static order-0 Huffman coding with a canonical code table.

Payload layout: 256 code lengths (one byte per symbol, 0 = absent), then
the code bits packed MSB-first, zero-padded to a whole byte.  Codes are
assigned canonically: shorter codes first, ties broken by symbol value.
"""

import heapq

import numpy as np
from numba import njit

from ..errors import DecodeError

MAX_CODE_LEN = 56
_TABLE_BYTES = 256


def code_lengths(freqs):
    """Huffman code length per symbol for a 256-entry frequency table."""
    lengths = [0] * 256
    heap = [(int(f), sym, (sym,)) for sym, f in enumerate(freqs) if f]
    if not heap:
        return lengths
    if len(heap) == 1:
        lengths[heap[0][1]] = 1
        return lengths
    heapq.heapify(heap)
    tiebreak = 256
    while len(heap) > 1:
        w1, _, s1 = heapq.heappop(heap)
        w2, _, s2 = heapq.heappop(heap)
        for sym in s1 + s2:
            lengths[sym] += 1
        heapq.heappush(heap, (w1 + w2, tiebreak, s1 + s2))
        tiebreak += 1
    if max(lengths) > MAX_CODE_LEN:
        raise ValueError("symbol distribution too skewed for 56-bit codes")
    return lengths


def canonical_codes(lengths):
    codes = [0] * 256
    code = 0
    prev_len = 0
    for length, sym in sorted((l, s) for s, l in enumerate(lengths) if l):
        code <<= length - prev_len
        codes[sym] = code
        code += 1
        prev_len = length
    return codes


@njit(cache=True)
def _encode_bits(data, codes, lengths, out):
    acc = np.uint64(0)
    nbits = 0
    pos = 0
    for i in range(data.size):
        sym = data[i]
        length = lengths[sym]
        acc = (acc << np.uint64(length)) | codes[sym]
        nbits += length
        while nbits >= 8:
            nbits -= 8
            out[pos] = np.uint8((acc >> np.uint64(nbits)) & np.uint64(0xFF))
            pos += 1
        acc &= (np.uint64(1) << np.uint64(nbits)) - np.uint64(1)
    if nbits > 0:
        out[pos] = np.uint8((acc << np.uint64(8 - nbits)) & np.uint64(0xFF))
        pos += 1
    return pos


@njit(cache=True)
def _decode_bits(payload, start, nsyms, first, count, offset, symbols, maxlen, out):
    # returns -1 on success, else the byte offset where decoding failed
    bitpos = start * 8
    total_bits = payload.size * 8
    for k in range(nsyms):
        code = 0
        length = 0
        while True:
            if bitpos >= total_bits:
                return bitpos // 8
            bit = (payload[bitpos >> 3] >> (7 - (bitpos & 7))) & 1
            bitpos += 1
            code = (code << 1) | bit
            length += 1
            if length > maxlen:
                return (bitpos - 1) // 8
            idx = code - first[length]
            if count[length] > 0 and idx >= 0 and idx < count[length]:
                out[k] = symbols[offset[length] + idx]
                break
    return -1


def encode(data: bytes) -> bytes:
    if not data:
        return b""
    arr = np.frombuffer(data, dtype=np.uint8)
    freqs = np.bincount(arr, minlength=256)
    lengths = code_lengths(freqs)
    codes = np.array(canonical_codes(lengths), dtype=np.uint64)
    lens = np.array(lengths, dtype=np.int64)
    total_bits = int(np.dot(freqs.astype(np.int64), lens))
    out = np.zeros((total_bits + 7) // 8, dtype=np.uint8)
    _encode_bits(arr, codes, lens, out)
    return bytes(lengths) + out.tobytes()


def _decode_tables(lengths):
    maxlen = max(lengths)
    count = np.zeros(maxlen + 2, dtype=np.int64)
    for l in lengths:
        if l:
            count[l] += 1
    kraft = sum(count[l] / 2.0 ** l for l in range(1, maxlen + 1))
    if kraft > 1.0:
        raise DecodeError("invalid Huffman code table", 0)
    first = np.zeros(maxlen + 2, dtype=np.int64)
    offset = np.zeros(maxlen + 2, dtype=np.int64)
    code = 0
    idx = 0
    for l in range(1, maxlen + 1):
        code <<= 1
        first[l] = code
        offset[l] = idx
        code += count[l]
        idx += count[l]
    symbols = np.array([s for _, s in sorted((l, s) for s, l in enumerate(lengths) if l)],
                       dtype=np.uint8)
    return first, count, offset, symbols, maxlen


def decode(payload: bytes, original_len: int) -> bytes:
    if original_len == 0:
        return b""
    if len(payload) < _TABLE_BYTES:
        raise DecodeError("truncated Huffman code table", len(payload))
    lengths = list(payload[:_TABLE_BYTES])
    if not any(lengths):
        raise DecodeError("empty Huffman code table", 0)
    if max(lengths) > MAX_CODE_LEN:
        raise DecodeError("Huffman code length out of range", 0)
    first, count, offset, symbols, maxlen = _decode_tables(lengths)
    arr = np.frombuffer(payload, dtype=np.uint8)
    out = np.empty(original_len, dtype=np.uint8)
    status = _decode_bits(arr, _TABLE_BYTES, original_len, first, count, offset, symbols,
                          maxlen, out)
    if status >= 0:
        raise DecodeError("Huffman payload ended early or holds an invalid code", status)
    return out.tobytes()

"""LZW with variable-width codes from 9 to 12 bits.

Codes 0-255 are single bytes, 256 is CLEAR, and phrases are numbered from
257.  Each code is written MSB-first at the width needed for the largest
code the encoder could emit at that moment: 9 bits while fewer than 512
codes exist, growing to 12.  When all 4096 codes are taken the encoder
emits CLEAR (at 12 bits) and starts over with an empty phrase table.  The
payload is the packed code stream, zero-padded to a whole byte.
"""

import numpy as np
from numba import njit

from ..errors import DecodeError

CLEAR = 256
FIRST_CODE = 257
MAX_CODES = 4096


@njit(cache=True)
def _width(next_code):
    if next_code <= 512:
        return 9
    if next_code <= 1024:
        return 10
    if next_code <= 2048:
        return 11
    return 12


@njit(cache=True)
def _encode(data, out):
    child = np.full(MAX_CODES * 256, -1, dtype=np.int32)
    used = np.empty(MAX_CODES, dtype=np.int64)
    nused = 0
    next_code = FIRST_CODE
    acc = 0
    nbits = 0
    pos = 0
    w = np.int64(data[0])
    for i in range(1, data.size):
        c = data[i]
        slot = w * 256 + c
        nxt = child[slot]
        if nxt >= 0:
            w = nxt
            continue
        width = _width(next_code)
        acc = (acc << width) | w
        nbits += width
        while nbits >= 8:
            nbits -= 8
            out[pos] = (acc >> nbits) & 0xFF
            pos += 1
        acc &= (1 << nbits) - 1
        if next_code < MAX_CODES:
            child[slot] = next_code
            used[nused] = slot
            nused += 1
            next_code += 1
        else:
            acc = (acc << 12) | CLEAR
            nbits += 12
            while nbits >= 8:
                nbits -= 8
                out[pos] = (acc >> nbits) & 0xFF
                pos += 1
            acc &= (1 << nbits) - 1
            for k in range(nused):
                child[used[k]] = -1
            nused = 0
            next_code = FIRST_CODE
        w = np.int64(c)
    width = _width(next_code)
    acc = (acc << width) | w
    nbits += width
    while nbits >= 8:
        nbits -= 8
        out[pos] = (acc >> nbits) & 0xFF
        pos += 1
    if nbits > 0:
        out[pos] = (acc << (8 - nbits)) & 0xFF
        pos += 1
    return pos


@njit(cache=True)
def _decode(payload, out):
    # returns -1 on success, else the payload offset where decoding failed
    n = out.size
    total_bits = payload.size * 8
    prefix = np.zeros(MAX_CODES, dtype=np.int64)
    suffix = np.zeros(MAX_CODES, dtype=np.uint8)
    first = np.zeros(MAX_CODES, dtype=np.uint8)
    length = np.zeros(MAX_CODES, dtype=np.int64)
    for c in range(256):
        suffix[c] = c
        first[c] = c
        length[c] = 1
    next_code = FIRST_CODE
    bitpos = 0
    o = 0
    prev = -1
    while o < n:
        width = 9 if prev < 0 else _width(min(next_code + 1, MAX_CODES))
        if bitpos + width > total_bits:
            return bitpos // 8
        code = 0
        for _ in range(width):
            code = (code << 1) | ((payload[bitpos >> 3] >> (7 - (bitpos & 7))) & 1)
            bitpos += 1
        if code == CLEAR:
            if prev < 0:
                return (bitpos - 1) // 8
            next_code = FIRST_CODE
            prev = -1
            continue
        if prev < 0:
            if code > 255:
                return (bitpos - 1) // 8
            out[o] = code
            o += 1
            prev = code
            continue
        if code > next_code or (code == next_code and next_code >= MAX_CODES):
            return (bitpos - 1) // 8
        if code == next_code:
            lead = first[prev]
        else:
            lead = first[code]
        if next_code < MAX_CODES:
            prefix[next_code] = prev
            suffix[next_code] = lead
            first[next_code] = first[prev]
            length[next_code] = length[prev] + 1
            next_code += 1
        span = length[code]
        if o + span > n:
            return (bitpos - 1) // 8
        k = code
        for j in range(span - 1, -1, -1):
            out[o + j] = suffix[k]
            k = prefix[k]
        o += span
        prev = code
    return -1


def encode(data: bytes) -> bytes:
    if not data:
        return b""
    arr = np.frombuffer(data, dtype=np.uint8)
    out = np.zeros(2 * arr.size + 16, dtype=np.uint8)
    size = _encode(arr, out)
    return out[:size].tobytes()


def decode(payload: bytes, original_len: int) -> bytes:
    if original_len == 0:
        return b""
    arr = np.frombuffer(payload, dtype=np.uint8)
    out = np.empty(original_len, dtype=np.uint8)
    status = _decode(arr, out)
    if status >= 0:
        raise DecodeError("LZW payload truncated or corrupt", status)
    return out.tobytes()

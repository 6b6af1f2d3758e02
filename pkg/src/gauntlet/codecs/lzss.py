"""LZSS with a 4096-byte sliding window.

Payload layout: groups of up to eight items, each group led by a control
byte whose bits (MSB first) flag the items that follow: 1 = literal byte,
0 = two-byte pointer.  A pointer packs ``distance - 1`` (12 bits) and
``length - 3`` (4 bits) as ``DDDDDDDD DDDDLLLL``.  Matches of 3..18 bytes
are coded as pointers; shorter ones as literals.  The encoder parses
greedily using 3-byte hash chains.
"""

import numpy as np
from numba import njit

from ..errors import DecodeError

WINDOW = 4096
MIN_MATCH = 3
MAX_MATCH = 18
MAX_CHAIN = 256
_HASH_BITS = 15


@njit(cache=True)
def _hash3(data, i):
    h = (data[i] << 10) ^ (data[i + 1] << 5) ^ data[i + 2]
    return h & ((1 << _HASH_BITS) - 1)


@njit(cache=True)
def _encode(data, out):
    n = data.size
    head = np.full(1 << _HASH_BITS, -1, dtype=np.int64)
    prev = np.full(n, -1, dtype=np.int64)
    pos = 0
    flag_pos = 0
    nitems = 8
    i = 0
    inserted = 0
    while i < n:
        if nitems == 8:
            flag_pos = pos
            out[pos] = 0
            pos += 1
            nitems = 0
        best_len = 0
        best_dist = 0
        if i + MIN_MATCH <= n:
            limit = min(MAX_MATCH, n - i)
            cand = head[_hash3(data, i)]
            depth = 0
            while cand >= 0 and i - cand <= WINDOW and depth < MAX_CHAIN:
                length = 0
                while length < limit and data[cand + length] == data[i + length]:
                    length += 1
                if length > best_len:
                    best_len = length
                    best_dist = i - cand
                    if length == limit:
                        break
                cand = prev[cand]
                depth += 1
        if best_len >= MIN_MATCH:
            d = best_dist - 1
            out[pos] = d >> 4
            out[pos + 1] = ((d & 0xF) << 4) | (best_len - MIN_MATCH)
            pos += 2
            step = best_len
        else:
            out[flag_pos] |= 0x80 >> nitems
            out[pos] = data[i]
            pos += 1
            step = 1
        nitems += 1
        i += step
        while inserted < i and inserted + MIN_MATCH <= n:
            h = _hash3(data, inserted)
            prev[inserted] = head[h]
            head[h] = inserted
            inserted += 1
    return pos


@njit(cache=True)
def _decode(payload, out):
    # returns -1 on success, else the payload offset where decoding failed
    n = out.size
    size = payload.size
    pos = 0
    o = 0
    while o < n:
        if pos >= size:
            return pos
        flags = payload[pos]
        pos += 1
        for k in range(8):
            if o >= n:
                break
            if flags & (0x80 >> k):
                if pos >= size:
                    return pos
                out[o] = payload[pos]
                pos += 1
                o += 1
            else:
                if pos + 1 >= size:
                    return pos
                d = (payload[pos] << 4) | (payload[pos + 1] >> 4)
                length = (payload[pos + 1] & 0xF) + MIN_MATCH
                dist = d + 1
                if dist > o or o + length > n:
                    return pos
                pos += 2
                for j in range(length):
                    out[o] = out[o - dist]
                    o += 1
    return -1


def encode(data: bytes) -> bytes:
    if not data:
        return b""
    arr = np.frombuffer(data, dtype=np.uint8)
    out = np.zeros(arr.size + arr.size // 8 + 2, dtype=np.uint8)
    size = _encode(arr, out)
    return out[:size].tobytes()


def decode(payload: bytes, original_len: int) -> bytes:
    if original_len == 0:
        return b""
    arr = np.frombuffer(payload, dtype=np.uint8)
    out = np.empty(original_len, dtype=np.uint8)
    status = _decode(arr, out)
    if status >= 0:
        raise DecodeError("LZSS payload truncated or corrupt", status)
    return out.tobytes()

"""Adaptive order-0 arithmetic coder.

Range coder with a 32-bit range register and a 33-bit low register whose
carry is propagated into already-emitted bytes through a one-byte cache
plus a run count of pending 0xFF bytes.  The model starts with every byte
value at frequency 1, adds ``INCREMENT`` per coded symbol and halves all
counts once the total would exceed ``MAX_TOTAL``.

Payload layout: the raw range-coder byte stream.  Its first byte is
always zero (the initial cache); the stream ends with a four-byte flush.
The symbol count comes from the container header, so there is no
end-of-stream symbol.
"""

import numpy as np
from numba import njit

from ..errors import DecodeError

INCREMENT = 24
MAX_TOTAL = 1 << 16
_TOP = 1 << 24
_MASK32 = 0xFFFFFFFF


@njit(cache=True)
def _fenwick_build(freq, tree):
    tree[:] = 0
    for i in range(256):
        idx = i + 1
        while idx <= 256:
            tree[idx] += freq[i]
            idx += idx & -idx


@njit(cache=True)
def _fenwick_prefix(tree, i):
    s = 0
    while i > 0:
        s += tree[i]
        i -= i & -i
    return s


@njit(cache=True)
def _fenwick_add(tree, i, delta):
    idx = i + 1
    while idx <= 256:
        tree[idx] += delta
        idx += idx & -idx


@njit(cache=True)
def _fenwick_find(tree, target):
    # largest symbol s with prefix(s) <= target; returns (s, prefix(s))
    pos = 0
    rem = target
    step = 256
    while step > 0:
        nxt = pos + step
        if nxt <= 256 and tree[nxt] <= rem:
            pos = nxt
            rem -= tree[nxt]
        step >>= 1
    return pos, target - rem


@njit(cache=True)
def _update_model(freq, tree, sym, total):
    freq[sym] += INCREMENT
    _fenwick_add(tree, sym, INCREMENT)
    total += INCREMENT
    if total > MAX_TOTAL - INCREMENT:
        total = 0
        for i in range(256):
            freq[i] = (freq[i] + 1) >> 1
            total += freq[i]
        _fenwick_build(freq, tree)
    return total


@njit(cache=True)
def _encode(data, out):
    freq = np.ones(256, dtype=np.int64)
    tree = np.zeros(257, dtype=np.int64)
    _fenwick_build(freq, tree)
    total = 256
    low = 0
    rng = _MASK32
    cache = 0
    cache_size = 1
    pos = 0
    n = data.size
    for k in range(n + 5):
        if k < n:
            sym = data[k]
            cum = _fenwick_prefix(tree, sym)
            r = rng // total
            low += r * cum
            rng = r * freq[sym]
            total = _update_model(freq, tree, sym, total)
            shifts = 0
            while rng < _TOP:
                rng <<= 8
                shifts += 1
        else:
            shifts = 1  # flush: push out the remaining low bytes
        for _ in range(shifts):
            if low < 0xFF000000 or low > _MASK32:
                carry = low >> 32
                temp = cache
                while True:
                    out[pos] = (temp + carry) & 0xFF
                    pos += 1
                    temp = 0xFF
                    cache_size -= 1
                    if cache_size == 0:
                        break
                cache = (low >> 24) & 0xFF
            cache_size += 1
            low = (low & 0x00FFFFFF) << 8
    return pos


@njit(cache=True)
def _decode(payload, nsyms, out):
    # returns -1 on success, else the payload offset where decoding failed
    size = payload.size
    if size < 5:
        return size
    code = 0
    for i in range(5):
        code = ((code << 8) | payload[i]) & _MASK32
    pos = 5
    rng = _MASK32
    freq = np.ones(256, dtype=np.int64)
    tree = np.zeros(257, dtype=np.int64)
    _fenwick_build(freq, tree)
    total = 256
    for k in range(nsyms):
        r = rng // total
        v = code // r
        if v >= total:
            return pos - 1
        sym, cum = _fenwick_find(tree, v)
        code -= r * cum
        rng = r * freq[sym]
        out[k] = sym
        total = _update_model(freq, tree, sym, total)
        while rng < _TOP:
            if pos >= size:
                return pos
            code = ((code << 8) | payload[pos]) & _MASK32
            pos += 1
            rng <<= 8
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
    status = _decode(arr, original_len, out)
    if status >= 0:
        raise DecodeError("arithmetic payload truncated or corrupt", status)
    return out.tobytes()

"""The fifteen NIST SP 800-22 statistical tests.

Each function takes a 0/1 ``uint8`` array and a :class:`NistParams` and
returns the test's P-values, or ``None`` when the sequence cannot support
the test.  Reference constants are those published with the NIST suite.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit
from scipy.special import ndtr

from ..gf2 import gf2_rank, rank_probabilities
from ..numerics import erfc, igamc
from .templates import aperiodic_templates, overlapping_probabilities


def _windows(bits: np.ndarray, m: int, wrap: bool = False) -> np.ndarray:
    """Integer value of every m-bit window, MSB first."""
    if wrap:
        bits = np.concatenate([bits, bits[:m - 1]])
    count = bits.size - m + 1
    vals = np.zeros(count, dtype=np.int64)
    for k in range(m):
        vals <<= 1
        vals |= bits[k:k + count]
    return vals


def _chi2(observed, expected) -> float:
    observed = np.asarray(observed, dtype=np.float64)
    return float(np.sum((observed - expected) ** 2 / expected))


def monobit_pvalue_from_sum(sn: int, n: int) -> float:
    return erfc(abs(sn) / math.sqrt(2.0 * n))


def frequency(bits, params):
    n = bits.size
    if n < 100:
        return None
    sn = 2 * int(bits.sum(dtype=np.int64)) - n
    return [monobit_pvalue_from_sum(sn, n)]


def block_frequency(bits, params):
    m = params.block_frequency_m
    nblocks = bits.size // m
    if bits.size < 100 or nblocks < 1:
        return None
    pi = bits[:nblocks * m].reshape(nblocks, m).sum(axis=1, dtype=np.int64) / m
    chi2 = 4.0 * m * float(np.sum((pi - 0.5) ** 2))
    return [igamc(nblocks / 2.0, chi2 / 2.0)]


def _cdiv(a: int, b: int) -> int:
    # C-style integer division (truncates toward zero)
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b > 0) else -q


def _cusum_pvalue(z: int, n: int) -> float:
    sqn = math.sqrt(n)
    k1 = np.arange(_cdiv(_cdiv(-n, z) + 1, 4), _cdiv(_cdiv(n, z) - 1, 4) + 1)
    k2 = np.arange(_cdiv(_cdiv(-n, z) - 3, 4), _cdiv(_cdiv(n, z) - 1, 4) + 1)
    sum1 = np.sum(ndtr((4 * k1 + 1) * z / sqn) - ndtr((4 * k1 - 1) * z / sqn))
    sum2 = np.sum(ndtr((4 * k2 + 3) * z / sqn) - ndtr((4 * k2 + 1) * z / sqn))
    return float(min(1.0, max(0.0, 1.0 - sum1 + sum2)))


def cumulative_sums(bits, params):
    n = bits.size
    if n < 100:
        return None
    steps = 2 * bits.astype(np.int64) - 1
    forward = int(np.max(np.abs(np.cumsum(steps))))
    backward = int(np.max(np.abs(np.cumsum(steps[::-1]))))
    return [_cusum_pvalue(forward, n), _cusum_pvalue(backward, n)]


def runs(bits, params):
    n = bits.size
    if n < 100:
        return None
    pi = float(bits.sum(dtype=np.int64)) / n
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        # frequency prerequisite failed; the suite reports 0
        return [0.0]
    v_obs = 1 + int(np.count_nonzero(bits[1:] != bits[:-1]))
    num = abs(v_obs - 2.0 * n * pi * (1 - pi))
    return [erfc(num / (2.0 * math.sqrt(2.0 * n) * pi * (1 - pi)))]


# (block length, lowest category, highest category, class probabilities)
_LONGEST_RUN_TABLES = (
    (750000, 10000, 10, 16, (0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727)),
    (6272, 128, 4, 9, (0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071,
                       0.112398847)),
    (128, 8, 1, 4, (0.21484375, 0.3671875, 0.23046875, 0.1875)),
)


def _longest_runs(blocks: np.ndarray) -> np.ndarray:
    nblocks, m = blocks.shape
    padded = np.zeros((nblocks, m + 2), dtype=np.int8)
    padded[:, 1:-1] = blocks
    edges = np.diff(padded.ravel())
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    longest = np.zeros(nblocks, dtype=np.int64)
    np.maximum.at(longest, starts // (m + 2), ends - starts)
    return longest


def longest_run(bits, params):
    n = bits.size
    for min_n, m, lo, hi, pi in _LONGEST_RUN_TABLES:
        if n >= min_n:
            break
    else:
        return None
    nblocks = n // m
    longest = _longest_runs(bits[:nblocks * m].reshape(nblocks, m))
    nu = np.bincount(np.clip(longest, lo, hi) - lo, minlength=hi - lo + 1)
    expected = nblocks * np.asarray(pi)
    chi2 = _chi2(nu, expected)
    return [igamc((hi - lo) / 2.0, chi2 / 2.0)]


def _pack_rows(bits: np.ndarray, nmat: int, nrows: int, ncols: int) -> np.ndarray:
    mats = bits[:nmat * nrows * ncols].reshape(nmat, nrows, ncols).astype(np.uint64)
    weights = np.uint64(1) << np.arange(ncols - 1, -1, -1, dtype=np.uint64)
    return (mats * weights).sum(axis=2, dtype=np.uint64)


def rank(bits, params):
    q = 32
    nmat = bits.size // (q * q)
    if nmat < 38:
        return None
    ranks = gf2_rank(_pack_rows(bits, nmat, q, q), q)
    probs = rank_probabilities(q, q)
    p_full, p_minus1 = probs[q], probs[q - 1]
    p_rest = 1.0 - p_full - p_minus1
    observed = [np.count_nonzero(ranks == q), np.count_nonzero(ranks == q - 1),
                np.count_nonzero(ranks < q - 1)]
    chi2 = _chi2(observed, nmat * np.array([p_full, p_minus1, p_rest]))
    return [math.exp(-chi2 / 2.0)]


def spectral(bits, params):
    n = bits.size
    if n < 1000:
        return None
    x = 2.0 * bits - 1.0
    modulus = np.abs(np.fft.fft(x)[: n // 2])
    threshold = math.sqrt(math.log(1.0 / 0.05) * n)
    n0 = 0.95 * n / 2.0
    n1 = float(np.count_nonzero(modulus < threshold))
    d = (n1 - n0) / math.sqrt(n * 0.95 * 0.05 / 4.0)
    return [erfc(abs(d) / math.sqrt(2.0))]


def non_overlapping_template(bits, params):
    m = params.non_overlapping_m
    nblocks = params.non_overlapping_blocks
    n = bits.size
    block = n // nblocks
    if block <= m:
        return None
    templates = aperiodic_templates(m)
    vals = _windows(bits, m)
    span = block - m + 1
    counts = np.empty((len(templates), nblocks), dtype=np.int64)
    for j in range(nblocks):
        hist = np.bincount(vals[j * block:j * block + span], minlength=1 << m)
        # aperiodic templates cannot overlap themselves, so every window
        # match is also a non-overlapping match
        counts[:, j] = hist[templates]
    mu = span / 2.0 ** m
    var = block * (1.0 / 2.0 ** m - (2.0 * m - 1.0) / 2.0 ** (2 * m))
    chi2 = np.sum((counts - mu) ** 2, axis=1) / var
    return [igamc(nblocks / 2.0, c / 2.0) for c in chi2]


def overlapping_template(bits, params):
    m = params.overlapping_m
    block = params.overlapping_block
    k = 5
    n = bits.size
    nblocks = n // block
    if nblocks < 1 or block <= m:
        return None
    hits = np.zeros(nblocks * block, dtype=np.int64)
    match = _windows(bits[:nblocks * block], m) == (1 << m) - 1
    hits[:match.size] = match
    per_block = hits.reshape(nblocks, block)[:, :block - m + 1].sum(axis=1)
    nu = np.bincount(np.minimum(per_block, k), minlength=k + 1)
    pi = overlapping_probabilities(block, m, k)
    chi2 = _chi2(nu, nblocks * pi)
    return [igamc(k / 2.0, chi2 / 2.0)]


_UNIVERSAL_EXPECTED = (0, 0.73264948, 1.5374383, 2.40160681, 3.31122472, 4.25342659,
                       5.2177052, 6.1962507, 7.1836656, 8.1764248, 9.1723243, 10.170032,
                       11.168765, 12.168070, 13.167693, 14.167488, 15.167379)
_UNIVERSAL_VARIANCE = (0, 0.690, 1.338, 1.901, 2.358, 2.705, 2.954, 3.125, 3.238, 3.311,
                       3.356, 3.384, 3.401, 3.410, 3.416, 3.419, 3.421)


def universal(bits, params):
    L, q = params.universal_l, params.universal_q
    nblocks = bits.size // L
    k = nblocks - q
    if k < 1 or not 1 <= L <= 16:
        return None
    vals = _windows(bits[:nblocks * L], L)[::L]
    order = np.argsort(vals, kind="stable")
    sorted_vals = vals[order]
    prev = np.zeros(nblocks, dtype=np.int64)  # 1-based index of last occurrence, 0 if none
    same = sorted_vals[1:] == sorted_vals[:-1]
    prev[order[1:][same]] = order[:-1][same] + 1
    idx = np.arange(q + 1, nblocks + 1)
    fn = float(np.sum(np.log2(idx - prev[q:]))) / k
    c = 0.7 - 0.8 / L + (4 + 32.0 / L) * k ** (-3.0 / L) / 15.0
    sigma = c * math.sqrt(_UNIVERSAL_VARIANCE[L] / k)
    return [erfc(abs(fn - _UNIVERSAL_EXPECTED[L]) / (math.sqrt(2.0) * sigma))]


def _phi(bits, m):
    if m == 0:
        return 0.0
    n = bits.size
    c = np.bincount(_windows(bits, m, wrap=True), minlength=1 << m)
    c = c[c > 0] / n
    return float(np.sum(c * np.log(c)))


def approximate_entropy(bits, params):
    m = params.apen_m
    n = bits.size
    if n < 100 or m < 1 or m >= int(math.log2(n)) - 5:
        return None
    apen = _phi(bits, m) - _phi(bits, m + 1)
    chi2 = 2.0 * n * (math.log(2.0) - apen)
    return [igamc(2.0 ** (m - 1), max(chi2, 0.0) / 2.0)]


def _psi2(bits, m):
    if m <= 0:
        return 0.0
    n = bits.size
    nu = np.bincount(_windows(bits, m, wrap=True), minlength=1 << m).astype(np.float64)
    return (2.0 ** m / n) * float(np.dot(nu, nu)) - n


def serial(bits, params):
    m = params.serial_m
    n = bits.size
    if n < 100 or m < 2 or m >= int(math.log2(n)) - 2:
        return None
    psi_m, psi_m1, psi_m2 = _psi2(bits, m), _psi2(bits, m - 1), _psi2(bits, m - 2)
    del1 = psi_m - psi_m1
    del2 = psi_m - 2.0 * psi_m1 + psi_m2
    return [igamc(2.0 ** (m - 2), max(del1, 0.0) / 2.0),
            igamc(2.0 ** (m - 3), max(del2, 0.0) / 2.0)]


@njit(cache=True)
def _berlekamp_massey(blocks):
    nblocks, m = blocks.shape
    result = np.empty(nblocks, dtype=np.int64)
    c = np.zeros(m + 1, dtype=np.uint8)
    b = np.zeros(m + 1, dtype=np.uint8)
    t = np.zeros(m + 1, dtype=np.uint8)
    for r in range(nblocks):
        s = blocks[r]
        c[:] = 0
        b[:] = 0
        c[0] = 1
        b[0] = 1
        L = 0
        deg_b = 0
        last = -1
        for n in range(m):
            d = s[n]
            for i in range(1, L + 1):
                d ^= c[i] & s[n - i]
            if d:
                shift = n - last
                top = min(deg_b, m - shift)
                if 2 * L <= n:
                    t[:L + 1] = c[:L + 1]
                    for j in range(top + 1):
                        c[j + shift] ^= b[j]
                    b[:deg_b + 1] = 0
                    b[:L + 1] = t[:L + 1]
                    deg_b = L
                    L = n + 1 - L
                    last = n
                else:
                    for j in range(top + 1):
                        c[j + shift] ^= b[j]
        result[r] = L
    return result


def linear_complexity_profile(blocks: np.ndarray) -> np.ndarray:
    return _berlekamp_massey(np.ascontiguousarray(blocks, dtype=np.uint8))


_LC_PI = (0.010417, 0.03125, 0.125, 0.5, 0.25, 0.0625, 0.020833)


def linear_complexity(bits, params):
    m = params.linear_complexity_m
    nblocks = bits.size // m
    if nblocks < 1:
        return None
    L = linear_complexity_profile(bits[:nblocks * m].reshape(nblocks, m))
    sign = -1.0 if m % 2 else 1.0
    mu = m / 2.0 + (9.0 + (-1.0) ** (m + 1)) / 36.0 - (m / 3.0 + 2.0 / 9.0) / 2.0 ** m
    t = sign * (L - mu) + 2.0 / 9.0
    edges = np.array([-2.5, -1.5, -0.5, 0.5, 1.5, 2.5])
    nu = np.bincount(np.searchsorted(edges, t, side="left"), minlength=7)
    chi2 = _chi2(nu, nblocks * np.array(_LC_PI))
    return [igamc(3.0, chi2 / 2.0)]


_EXCURSION_STATES = (-4, -3, -2, -1, 1, 2, 3, 4)
_VARIANT_STATES = tuple(x for x in range(-9, 10) if x)


def excursion_pi(x: int) -> np.ndarray:
    """P(state x is visited k times in one cycle) for k = 0..4 and k >= 5."""
    a = 1.0 / (2.0 * abs(x))
    pi = np.empty(6)
    pi[0] = 1.0 - a
    for k in range(1, 5):
        pi[k] = a * a * (1.0 - a) ** (k - 1)
    pi[5] = a * (1.0 - a) ** 4
    return pi


def _walk(bits):
    n = bits.size
    s = np.cumsum(2 * bits.astype(np.int64) - 1)
    zeros = s == 0
    cycles = int(np.count_nonzero(zeros)) + (1 if s[-1] != 0 else 0)
    limit = max(0.005 * math.sqrt(n), 500.0)
    return s, zeros, cycles, limit


def random_excursions(bits, params):
    if bits.size < 1000:
        return None
    s, zeros, cycles, limit = _walk(bits)
    if cycles < limit:
        return None
    cycle_id = np.cumsum(zeros)
    near = np.abs(s) <= 4
    s_near, id_near = s[near], cycle_id[near]
    pvalues = []
    for x in _EXCURSION_STATES:
        visits = np.bincount(id_near[s_near == x], minlength=cycles)[:cycles]
        nu = np.bincount(np.minimum(visits, 5), minlength=6)
        chi2 = _chi2(nu, cycles * excursion_pi(x))
        pvalues.append(igamc(2.5, chi2 / 2.0))
    return pvalues


def random_excursions_variant(bits, params):
    if bits.size < 1000:
        return None
    s, _, cycles, limit = _walk(bits)
    if cycles < limit:
        return None
    near = s[np.abs(s) <= 9]
    visits = np.bincount(near + 9, minlength=19)
    return [erfc(abs(visits[x + 9] - cycles) / math.sqrt(2.0 * cycles * (4.0 * abs(x) - 2.0)))
            for x in _VARIANT_STATES]

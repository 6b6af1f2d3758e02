"""Diehard-style tests on one piece of 32-bit words.

Every function takes ``words`` (little-endian uint32 view of the piece) and
returns the list of P-values.  P-values follow the Diehard convention: the
distribution function of the statistic evaluated at the observed value,
so a uniform input gives values spread over [0, 1] and a grossly
non-random one gives values pinned at 0 or 1.  Each test starts reading
at the first word of the piece; tests whose consumption depends on the
data wrap around to the start if they run off the end.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit
from scipy.spatial import cKDTree
from scipy.special import ndtr, zeta

from ..gf2 import gf2_rank, rank_probabilities
from ..numerics import chi2_cdf, chi_square_bins, normal_cdf, ks_uniform

TWO32 = 4294967296.0


def ks_pvalue(pvalues) -> float:
    """Aggregate P-value: distribution function of the KS distance from uniform."""
    return 1.0 - ks_uniform(pvalues)


def _uniforms(words: np.ndarray) -> np.ndarray:
    return words.astype(np.float64) / TWO32


def _take(words: np.ndarray, start: int, count: int) -> np.ndarray:
    idx = (start + np.arange(count)) % words.size
    return words[idx]


# --- birthday spacings -----------------------------------------------------

BDAY_BIRTHDAYS = 512
BDAY_DAY_BITS = 24
BDAY_SAMPLES = 500
BDAY_OFFSETS = 9
BDAY_LAMBDA = BDAY_BIRTHDAYS ** 3 / (4.0 * 2 ** BDAY_DAY_BITS)
BDAY_CELLS = 7  # 0..5 duplicates, and 6 or more


def _poisson_cells(lam: float, cells: int) -> np.ndarray:
    k = np.arange(cells - 1)
    probs = np.exp(-lam + k * math.log(lam) - np.array([math.lgamma(i + 1) for i in k]))
    return np.append(probs, 1.0 - probs.sum())


def birthday_spacings(words: np.ndarray) -> list[float]:
    block = _take(words, 0, BDAY_BIRTHDAYS * BDAY_SAMPLES).astype(np.int64)
    block = block.reshape(BDAY_SAMPLES, BDAY_BIRTHDAYS)
    expected = _poisson_cells(BDAY_LAMBDA, BDAY_CELLS) * BDAY_SAMPLES
    pvalues = []
    for off in range(BDAY_OFFSETS):
        days = np.sort((block >> (32 - BDAY_DAY_BITS - off)) & ((1 << BDAY_DAY_BITS) - 1), axis=1)
        spacings = np.sort(np.diff(days, axis=1, prepend=0), axis=1)
        dup = np.sum(spacings[:, 1:] == spacings[:, :-1], axis=1)
        observed = np.bincount(np.minimum(dup, BDAY_CELLS - 1), minlength=BDAY_CELLS)
        pvalues.append(chi2_cdf(chi_square_bins(observed, expected), BDAY_CELLS - 1))
    pvalues.append(ks_pvalue(pvalues))
    return pvalues


# --- binary rank -----------------------------------------------------------

def _rank_pvalue(ranks: np.ndarray, nrows: int, ncols: int, low: int) -> float:
    probs = rank_probabilities(nrows, ncols)
    top = min(nrows, ncols)
    expected = np.append(probs[:low + 1].sum(), probs[low + 1:top + 1]) * ranks.size
    observed = np.bincount(np.clip(ranks, low, top) - low, minlength=top - low + 1)
    return chi2_cdf(chi_square_bins(observed, expected), top - low)


RANK32_MATRICES = 40_000


def rank_32x32(words: np.ndarray) -> list[float]:
    rows = _take(words, 0, 32 * RANK32_MATRICES).reshape(RANK32_MATRICES, 32)
    return [_rank_pvalue(gf2_rank(rows, 32), 32, 32, 29)]


RANK6x8_MATRICES = 100_000
RANK6x8_OFFSETS = 25


def rank_6x8(words: np.ndarray) -> list[float]:
    block = _take(words, 0, 6 * RANK6x8_MATRICES).reshape(RANK6x8_MATRICES, 6)
    pvalues = []
    for off in range(RANK6x8_OFFSETS):
        rows = (block >> np.uint32(24 - off)) & np.uint32(0xFF)
        pvalues.append(_rank_pvalue(gf2_rank(rows, 8), 6, 8, 4))
    pvalues.append(ks_pvalue(pvalues))
    return pvalues


# --- count the 1s in a stream of bytes -------------------------------------

C1_WINDOWS = 256_000
C1_SAMPLES = 2
C1_LETTER_PROBS = np.array([37, 56, 70, 56, 37], dtype=np.float64) / 256.0
_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)
_LETTER = np.array([0, 0, 0, 1, 2, 3, 4, 4, 4], dtype=np.int64)[_POPCOUNT]


def _word_counts_q(letters: np.ndarray, length: int, windows: int) -> float:
    codes = np.zeros(windows, dtype=np.int64)
    probs = np.ones(5 ** length)
    for j in range(length):
        codes = codes * 5 + letters[j:j + windows]
    for code in range(5 ** length):
        c, p = code, 1.0
        for _ in range(length):
            p *= C1_LETTER_PROBS[c % 5]
            c //= 5
        probs[code] = p
    observed = np.bincount(codes, minlength=5 ** length)
    return chi_square_bins(observed, probs * windows)


def count_ones_stream(words: np.ndarray) -> list[float]:
    data = words.view(np.uint8)
    span = C1_WINDOWS + 4
    pvalues = []
    for s in range(C1_SAMPLES):
        letters = _LETTER[_take(data, s * span, span)]
        q5 = _word_counts_q(letters, 5, C1_WINDOWS)
        q4 = _word_counts_q(letters, 4, C1_WINDOWS)
        pvalues.append(normal_cdf((q5 - q4 - 2500.0) / math.sqrt(5000.0)))
    return pvalues


# --- parking lot -----------------------------------------------------------

PARK_TRIALS = 10
PARK_ATTEMPTS = 12_000
PARK_SIDE = 100.0
PARK_MEAN = 3523.0
PARK_SIGMA = 21.9
_PARK_CELL_CAP = 32


@njit(cache=True)
def _park(xs, ys, side):
    ncell = int(side) + 1
    grid_n = np.zeros((ncell, ncell), dtype=np.int64)
    grid_i = np.empty((ncell, ncell, _PARK_CELL_CAP), dtype=np.int64)
    px = np.empty(xs.size)
    py = np.empty(xs.size)
    parked = 0
    for t in range(xs.size):
        x = xs[t]
        y = ys[t]
        cx = int(x)
        cy = int(y)
        crash = False
        for gx in range(max(cx - 1, 0), min(cx + 2, ncell)):
            for gy in range(max(cy - 1, 0), min(cy + 2, ncell)):
                for s in range(grid_n[gx, gy]):
                    j = grid_i[gx, gy, s]
                    if abs(px[j] - x) <= 1.0 and abs(py[j] - y) <= 1.0:
                        crash = True
                        break
                if crash:
                    break
            if crash:
                break
        if not crash:
            px[parked] = x
            py[parked] = y
            grid_i[cx, cy, grid_n[cx, cy]] = parked
            grid_n[cx, cy] += 1
            parked += 1
    return parked


def parking_lot(words: np.ndarray) -> list[float]:
    u = _uniforms(_take(words, 0, 2 * PARK_TRIALS * PARK_ATTEMPTS)) * PARK_SIDE
    u = u.reshape(PARK_TRIALS, PARK_ATTEMPTS, 2)
    pvalues = []
    for t in range(PARK_TRIALS):
        k = _park(np.ascontiguousarray(u[t, :, 0]), np.ascontiguousarray(u[t, :, 1]), PARK_SIDE)
        pvalues.append(normal_cdf((k - PARK_MEAN) / PARK_SIGMA))
    pvalues.append(ks_pvalue(pvalues))
    return pvalues


# --- minimum distance ------------------------------------------------------

def _min_pair_distance(points: np.ndarray) -> float:
    dist, _ = cKDTree(points).query(points, k=2)
    return float(dist[:, 1].min())


MINDIST_SAMPLES = 100
MINDIST_POINTS = 8000
MINDIST_SIDE = 10000.0
MINDIST_MEAN = 0.995


def minimum_distance(words: np.ndarray) -> list[float]:
    u = _uniforms(_take(words, 0, 2 * MINDIST_SAMPLES * MINDIST_POINTS)) * MINDIST_SIDE
    u = u.reshape(MINDIST_SAMPLES, MINDIST_POINTS, 2)
    pvalues = []
    for s in range(MINDIST_SAMPLES):
        d = _min_pair_distance(u[s])
        pvalues.append(1.0 - math.exp(-d * d / MINDIST_MEAN))
    return [ks_pvalue(pvalues)]


SPHERE_SAMPLES = 20
SPHERE_POINTS = 4000
SPHERE_SIDE = 1000.0
SPHERE_MEAN = 30.0


def spheres_3d(words: np.ndarray) -> list[float]:
    u = _uniforms(_take(words, 0, 3 * SPHERE_SAMPLES * SPHERE_POINTS)) * SPHERE_SIDE
    u = u.reshape(SPHERE_SAMPLES, SPHERE_POINTS, 3)
    pvalues = []
    for s in range(SPHERE_SAMPLES):
        r = _min_pair_distance(u[s])
        pvalues.append(1.0 - math.exp(-r ** 3 / SPHERE_MEAN))
    pvalues.append(ks_pvalue(pvalues))
    return pvalues


# --- squeeze ---------------------------------------------------------------

SQUEEZE_RUNS = 100_000
SQUEEZE_START = 2 ** 31
SQUEEZE_LOW = 6
SQUEEZE_HIGH = 48


def squeeze_probabilities(k: int = SQUEEZE_START, nmax: int = 80) -> np.ndarray:
    """Exact P(steps = j), j = 0..nmax, for k <- ceil(k * U) from ``k`` down to 1.

    From state i the next state is uniform on 1..i, so the step count is
    1 plus a sum of independent geometric variables, one for each i in
    2..k, with P(m) = (1 - 1/i) i^-m.  Its generating function is expanded
    as a power series via the log-sum of the factors.
    """
    a = np.zeros(nmax + 1)
    for m in range(1, nmax + 1):
        if m == 1:
            s = (np.log(k) + np.euler_gamma + 1 / (2 * k) - 1 / (12 * k * k)) - 1.0
            if k < 10 ** 6:
                s = float(np.sum(1.0 / np.arange(2, k + 1)))
        else:
            s = float(zeta(m) - 1.0 - zeta(m, k + 1))
        a[m] = s / m
    g = np.zeros(nmax + 1)
    g[0] = 1.0
    for n in range(1, nmax + 1):
        g[n] = np.dot(np.arange(1, n + 1) * a[1:n + 1], g[n - 1::-1][:n]) / n
    g /= k
    return np.concatenate([[0.0], g[:-1]])


@njit(cache=True)
def _squeeze(words, runs, start, cap):
    out = np.empty(runs, dtype=np.int64)
    pos = 0
    n = words.size
    for r in range(runs):
        k = np.int64(start)
        j = 0
        while k != 1 and j < cap:
            w = np.int64(words[pos])
            pos += 1
            if pos == n:
                pos = 0
            # ceil(k * (w + 1/2) / 2^32) without overflowing 64 bits
            kw = k * w
            rem = 2 * (kw & 0xFFFFFFFF) + k
            k = (kw >> 32) + ((rem + (1 << 33) - 1) >> 33)
            j += 1
        out[r] = j
    return out


def squeeze_cells(runs: int = SQUEEZE_RUNS, min_expected: float = 5.0):
    """Cell edges ``(low, high)`` and probabilities for the step-count chi-square.

    Starts from cells ``<= 6``, ``7..47``, ``>= 48`` and folds tail cells
    inward until every expected count reaches ``min_expected``.
    """
    probs = squeeze_probabilities()
    low, high = SQUEEZE_LOW, SQUEEZE_HIGH
    while probs[:low + 1].sum() * runs < min_expected:
        low += 1
    while probs[high:].sum() * runs < min_expected or 1.0 - probs[:high].sum() < 0:
        high -= 1
    cells = np.concatenate([[probs[:low + 1].sum()], probs[low + 1:high]])
    return low, high, np.append(cells, 1.0 - cells.sum())


def squeeze(words: np.ndarray) -> list[float]:
    steps = _squeeze(words, SQUEEZE_RUNS, SQUEEZE_START, SQUEEZE_HIGH)
    low, high, cells = squeeze_cells()
    observed = np.bincount(np.clip(steps, low, high) - low, minlength=cells.size)
    stat = chi_square_bins(observed, cells * SQUEEZE_RUNS)
    return [chi2_cdf(stat, cells.size - 1)]


# --- overlapping sums ------------------------------------------------------

OSUM_REPS = 10
OSUM_SUMS = 100
OSUM_TERMS = 100


def _osum_whitener() -> np.ndarray:
    idx = np.arange(OSUM_SUMS)
    cov = (OSUM_TERMS - np.abs(idx[:, None] - idx[None, :])).clip(min=0) / 12.0
    return np.linalg.inv(np.linalg.cholesky(cov))


def overlapping_sums(words: np.ndarray) -> list[float]:
    span = OSUM_SUMS + OSUM_TERMS - 1
    u = _uniforms(_take(words, 0, OSUM_REPS * span)).reshape(OSUM_REPS, span)
    csum = np.concatenate([np.zeros((OSUM_REPS, 1)), np.cumsum(u, axis=1)], axis=1)
    sums = csum[:, OSUM_TERMS:] - csum[:, :-OSUM_TERMS]
    white = (sums - OSUM_TERMS / 2.0) @ _osum_whitener().T
    pvalues = [ks_pvalue(ndtr(row)) for row in white]
    pvalues.append(ks_pvalue(pvalues))
    return pvalues


# --- runs up and down ------------------------------------------------------

RUNS_REPS = 2
RUNS_LENGTH = 10_000
RUNS_A = np.array([
    [4529.4, 9044.9, 13568, 18091, 22615, 27892],
    [9044.9, 18097, 27139, 36187, 45234, 55789],
    [13568, 27139, 40721, 54281, 67852, 83685],
    [18091, 36187, 54281, 72414, 90470, 111580],
    [22615, 45234, 67852, 90470, 113262, 139476],
    [27892, 55789, 83685, 111580, 139476, 172860],
])
RUNS_B = np.array([1 / 6, 5 / 24, 11 / 120, 19 / 720, 29 / 5040, 1 / 840])


def run_length_counts(x: np.ndarray) -> np.ndarray:
    """Counts of ascending runs of length 1..5 and 6 or more."""
    breaks = np.flatnonzero(x[1:] <= x[:-1]) + 1
    edges = np.concatenate([[0], breaks, [x.size]])
    lengths = np.diff(edges)
    return np.bincount(np.minimum(lengths, 6) - 1, minlength=6)


def runs_statistic(x: np.ndarray) -> float:
    n = x.size
    dev = run_length_counts(x) - n * RUNS_B
    return float(dev @ RUNS_A @ dev / (n - 6))


def runs_up_down(words: np.ndarray) -> list[float]:
    u = _take(words, 0, RUNS_REPS * RUNS_LENGTH).astype(np.int64).reshape(RUNS_REPS, RUNS_LENGTH)
    pvalues = []
    for row in u:
        pvalues.append(chi2_cdf(runs_statistic(row), 6))
        pvalues.append(chi2_cdf(runs_statistic(-row), 6))
    return pvalues


# --- craps -----------------------------------------------------------------

CRAPS_GAMES = 200_000
CRAPS_THROW_CELLS = 21  # 1..20 and 21 or more
CRAPS_WIN_PROB = 244.0 / 495.0
_CRAPS_MAX_THROWS = 1000


def craps_throw_probabilities(cells: int = CRAPS_THROW_CELLS) -> np.ndarray:
    ways = {s: 6 - abs(s - 7) for s in range(2, 13)}
    probs = np.zeros(cells)
    probs[0] = (ways[7] + ways[11] + ways[2] + ways[3] + ways[12]) / 36.0
    for point in (4, 5, 6, 8, 9, 10):
        p = ways[point] / 36.0
        settle = p + 6 / 36.0
        for t in range(2, cells):
            probs[t - 1] += p * (1 - settle) ** (t - 2) * settle
    probs[-1] = 1.0 - probs[:-1].sum()
    return probs


@njit(cache=True)
def _craps(words, games, max_throws):
    n = words.size
    pos = 0
    wins = 0
    throws = np.empty(games, dtype=np.int64)
    for g in range(games):
        t = 0
        point = 0
        while True:
            d1 = 1 + ((np.uint64(words[pos]) * np.uint64(6)) >> np.uint64(32))
            pos += 1
            if pos == n:
                pos = 0
            d2 = 1 + ((np.uint64(words[pos]) * np.uint64(6)) >> np.uint64(32))
            pos += 1
            if pos == n:
                pos = 0
            s = np.int64(d1 + d2)
            t += 1
            if point == 0:
                if s == 7 or s == 11:
                    wins += 1
                    break
                if s == 2 or s == 3 or s == 12:
                    break
                point = s
            else:
                if s == point:
                    wins += 1
                    break
                if s == 7 or t >= max_throws:
                    break
        throws[g] = t
    return wins, throws


def craps(words: np.ndarray) -> list[float]:
    wins, throws = _craps(words, CRAPS_GAMES, _CRAPS_MAX_THROWS)
    mean = CRAPS_GAMES * CRAPS_WIN_PROB
    sd = math.sqrt(mean * (1 - CRAPS_WIN_PROB))
    probs = craps_throw_probabilities()
    observed = np.bincount(np.minimum(throws, CRAPS_THROW_CELLS) - 1, minlength=CRAPS_THROW_CELLS)
    stat = chi_square_bins(observed, probs * CRAPS_GAMES)
    return [normal_cdf((wins - mean) / sd), chi2_cdf(stat, CRAPS_THROW_CELLS - 1)]

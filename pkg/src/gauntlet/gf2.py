"""Batched rank of binary matrices over GF(2)."""

import numpy as np


def gf2_rank(rows: np.ndarray, ncols: int) -> np.ndarray:
    """Rank of each matrix in a batch.

    ``rows`` has shape ``(batch, nrows)``; every entry is one matrix row
    packed into an unsigned integer whose low ``ncols`` bits are the row.
    """
    rows = np.array(rows, dtype=np.uint64)
    batch, nrows = rows.shape
    ar = np.arange(batch)
    used = np.zeros((batch, nrows), dtype=bool)
    rank = np.zeros(batch, dtype=np.int64)
    for bit in range(ncols - 1, -1, -1):
        hasbit = (rows >> np.uint64(bit)) & np.uint64(1) == 1
        cand = hasbit & ~used
        found = cand.any(axis=1)
        if not found.any():
            continue
        piv = cand.argmax(axis=1)
        pivot_rows = rows[ar, piv]
        elim = hasbit & found[:, None]
        elim[ar, piv] = False
        rows ^= np.where(elim, pivot_rows[:, None], np.uint64(0))
        used[ar[found], piv[found]] = True
        rank += found
    return rank


def rank_probabilities(nrows: int, ncols: int) -> np.ndarray:
    """P(rank = r) for r = 0..min(nrows, ncols) of a uniform random matrix."""
    rmax = min(nrows, ncols)
    probs = np.zeros(rmax + 1)
    for r in range(rmax + 1):
        logp = (r * (nrows + ncols - r) - nrows * ncols) * np.log(2.0)
        prod = 1.0
        for i in range(r):
            prod *= (1 - 2.0 ** (i - nrows)) * (1 - 2.0 ** (i - ncols)) / (1 - 2.0 ** (i - r))
        probs[r] = np.exp(logp) * prod
    return probs

"""Template sets and reference probabilities for the template-matching tests."""

from functools import lru_cache

import numpy as np


def is_aperiodic(value: int, m: int) -> bool:
    """True when the m-bit pattern has no proper prefix equal to a suffix."""
    bits = format(value, f"0{m}b")
    return all(bits[k:] != bits[:m - k] for k in range(1, m))


@lru_cache(maxsize=None)
def aperiodic_templates(m: int) -> np.ndarray:
    """All aperiodic m-bit templates in ascending numeric order."""
    values = [v for v in range(1 << m) if is_aperiodic(v, m)]
    arr = np.array(values, dtype=np.int64)
    arr.flags.writeable = False
    return arr


@lru_cache(maxsize=None)
def overlapping_probabilities(block: int, m: int, k: int) -> np.ndarray:
    """Distribution of overlapping matches of m ones in a random block.

    Entry i is P(exactly i matches) for i < k and P(at least k) for i = k.
    Computed exactly by dynamic programming over (trailing run of ones,
    match count).
    """
    dist = np.zeros((m + 1, k + 1))
    dist[0, 0] = 1.0
    for _ in range(block):
        nxt = np.zeros_like(dist)
        nxt[0, :] += 0.5 * dist.sum(axis=0)
        for run in range(m + 1):
            target = min(run + 1, m)
            half = 0.5 * dist[run]
            if target == m:
                nxt[m, 1:] += half[:-1]
                nxt[m, k] += half[k]
            else:
                nxt[target] += half
        dist = nxt
    probs = dist.sum(axis=0)
    probs.flags.writeable = False
    return probs

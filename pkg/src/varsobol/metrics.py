"""Benchmark scores: MAE, probability of failure, and correlation measures."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata

DELTA_NAMES = {1: "raw", 2: "rank", 3: "savage"}


def mae(T, replicates) -> float:
    """Mean over replicates of the mean absolute error across inputs."""
    T = np.asarray(T, dtype=np.float64)
    R = np.atleast_2d(np.asarray(replicates, dtype=np.float64))
    if R.size == 0:
        raise ValueError("no replicates")
    if R.shape[1] != T.shape[0]:
        raise ValueError("replicate length does not match T")
    return float(np.mean(np.mean(np.abs(R - T[None, :]), axis=1)))


def ranks_desc(values) -> np.ndarray:
    """Rank 1 = largest value; ties get the average rank."""
    return rankdata(-np.asarray(values, dtype=np.float64), method="average")


def prob_failure(true_ranking, replicate_estimates, tie_tolerance: float = 0.0) -> float:
    """Fraction of replicates whose estimates invert a strictly ordered true pair.

    ``true_ranking`` gives each input's true rank (1 = most important; equal
    ranks mean a true tie, which is never checked). A replicate fails when
    some pair with ``rank_a < rank_b`` has ``est_b - est_a > tie_tolerance``.
    """
    ranks = np.asarray(true_ranking, dtype=np.float64)
    E = np.atleast_2d(np.asarray(replicate_estimates, dtype=np.float64))
    if E.size == 0:
        raise ValueError("no replicates")
    a, b = np.nonzero(ranks[:, None] < ranks[None, :])
    inverted = (E[:, b] - E[:, a]) > tie_tolerance
    return float(np.mean(inverted.any(axis=1)))


def savage_scores(ranks) -> np.ndarray:
    """Savage score ``sum_{m=j}^{k} 1/m`` for each item of rank ``j``."""
    r = np.asarray(ranks)
    k = r.shape[0]
    if k == 0 or sorted(r.tolist()) != list(range(1, k + 1)):
        raise ValueError("ranks must be a permutation of 1..k")
    tail = np.cumsum(1.0 / np.arange(k, 0, -1))[::-1]
    return tail[r.astype(int) - 1]


def _savage_tied(values) -> np.ndarray:
    # Tied items share the mean of the scores their rank positions span.
    v = np.asarray(values, dtype=np.float64)
    k = v.shape[0]
    tail = np.cumsum(1.0 / np.arange(k, 0, -1))[::-1]
    ordinal = rankdata(-v, method="ordinal").astype(int)
    scores = tail[ordinal - 1]
    dense = rankdata(-v, method="dense").astype(int)
    out = np.empty(k)
    for g in np.unique(dense):
        sel = dense == g
        out[sel] = scores[sel].mean()
    return out


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    dx = x - x.mean()
    dy = y - y.mean()
    sx = np.sqrt(np.sum(dx * dx))
    sy = np.sqrt(np.sum(dy * dy))
    if not (sx > 0 and sy > 0) or not (np.isfinite(sx) and np.isfinite(sy)):
        return float("nan")
    return float(np.clip(np.sum(dx * dy) / (sx * sy), -1.0, 1.0))


def performance_r(delta: int, T, T_hat) -> float:
    """Correlation between true and estimated indices.

    ``delta`` 1: Pearson on raw values; 2: on ranks; 3: on Savage scores.
    Returns NaN (the degenerate flag) when either vector is constant or
    non-finite.
    """
    T = np.asarray(T, dtype=np.float64)
    T_hat = np.asarray(T_hat, dtype=np.float64)
    if T.shape != T_hat.shape or T.shape[0] < 3:
        raise ValueError("need two equal-length vectors with k >= 3")
    if not (np.all(np.isfinite(T)) and np.all(np.isfinite(T_hat))):
        return float("nan")
    if delta == 1:
        return pearson(T, T_hat)
    if delta == 2:
        return pearson(ranks_desc(T), ranks_desc(T_hat))
    if delta == 3:
        return pearson(_savage_tied(T), _savage_tied(T_hat))
    raise ValueError(f"delta must be 1, 2 or 3, got {delta}")

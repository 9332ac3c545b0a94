"""Variance-based index estimators built on the A / A_B^(i) design."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SensitivityEstimate:
    """Per-input index values plus bookkeeping.

    ``degenerate`` is set when the output variance is zero, in which case
    ``values`` is all-NaN instead of a silent 0/0.
    """

    method: str
    values: np.ndarray
    n_evals: int
    variance: float
    degenerate: bool = False
    extra: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def k(self) -> int:
        return len(self.values)

    @property
    def clipped(self) -> np.ndarray:
        return np.clip(self.values, 0.0, 1.0)


def _as_blocks(yA, yAB):
    yA = np.asarray(yA, dtype=np.float64)
    yAB = np.asarray(yAB, dtype=np.float64)
    if yAB.ndim != 2 or yAB.shape[1] != yA.shape[0]:
        raise ValueError("yAB must be a (k, N) array aligned with yA")
    if yA.shape[0] < 2:
        raise ValueError("need N >= 2 rows")
    return yA, yAB


def pop_var(y) -> float:
    y = np.asarray(y, dtype=np.float64)
    # Shifting by the first value makes a constant vector give exactly zero.
    c = y - y.flat[0]
    d = c - c.mean()
    return float(np.mean(d * d))


def _is_degenerate(v: float) -> bool:
    return not np.isfinite(v) or v <= 0.0


def jansen_total(yA, yAB, n_evals: int | None = None) -> SensitivityEstimate:
    """Jansen total-order estimator.

    ``T_i = mean((yA - yAB_i)^2) / 2 / V`` with ``V`` the population variance
    of ``yA``.
    """
    yA, yAB = _as_blocks(yA, yAB)
    k, N = yAB.shape
    V = pop_var(yA)
    n_evals = N * (k + 1) if n_evals is None else n_evals
    if _is_degenerate(V):
        return SensitivityEstimate("jansen_total", np.full(k, np.nan), n_evals, V, True)
    num = 0.5 * np.mean((yA[None, :] - yAB) ** 2, axis=1)
    return SensitivityEstimate("jansen_total", num / V, n_evals, V)


def jansen_first(yB, yAB, V: float, n_evals: int | None = None) -> SensitivityEstimate:
    """Jansen first-order estimator ``S_i = (V - mean((yB - yAB_i)^2) / 2) / V``.

    Raw values are kept (they may fall outside [0, 1]); ``.clipped`` gives the
    clamped view.
    """
    yB, yAB = _as_blocks(yB, yAB)
    k, N = yAB.shape
    n_evals = N * (k + 2) if n_evals is None else n_evals
    if _is_degenerate(V):
        return SensitivityEstimate("jansen_first", np.full(k, np.nan), n_evals, V, True)
    half_sq = 0.5 * np.mean((yB[None, :] - yAB) ** 2, axis=1)
    return SensitivityEstimate("jansen_first", (V - half_sq) / V, n_evals, V)


def midpoint_grid(grid_n: int) -> np.ndarray:
    return (np.arange(grid_n) + 0.5) / grid_n


def single_trajectory_first(model, i: int, anchor, grid_n: int | None = None, V: float | None = None, points=None) -> float:
    """First-order index of an input the model is additive in, from one trajectory.

    The model is evaluated along axis ``i`` with every other coordinate held at
    ``anchor``; the trajectory's variance over the global variance ``V`` is the
    index. Trajectory abscissae are the ``grid_n`` midpoint grid unless
    ``points`` is given.
    """
    if V is None or not V > 0:
        raise ValueError(f"global variance must be positive, got {V}")
    anchor = np.asarray(anchor, dtype=np.float64)
    if points is None:
        if grid_n is None or grid_n < 8:
            raise ValueError("grid_n must be at least 8")
        xs = midpoint_grid(grid_n)
    else:
        xs = np.asarray(points, dtype=np.float64)
    X = np.repeat(anchor[None, :], len(xs), axis=0)
    X[:, i] = xs
    return pop_var(model(X)) / V


@dataclass(frozen=True)
class BootstrapCI:
    level: float
    first_lo: np.ndarray
    first_hi: np.ndarray
    total_lo: np.ndarray
    total_hi: np.ndarray
    n_redrawn: int = 0
    flagged: bool = False


def bootstrap_percentile(yA, yB, yAB, R: int = 500, level: float = 0.95, seed: int = 0, max_retries: int = 100) -> BootstrapCI:
    """Percentile bootstrap intervals for Jansen first- and total-order indices.

    Row indices are resampled with replacement. A resample with zero output
    variance is redrawn, at most ``max_retries`` times in total; after that the
    result is flagged and the degenerate draws are dropped.
    """
    if R < 100:
        raise ValueError("need R >= 100 bootstrap replicates")
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    yA, yAB = _as_blocks(yA, yAB)
    yB = np.asarray(yB, dtype=np.float64)
    k, N = yAB.shape
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    firsts, totals = [], []
    redrawn = 0
    flagged = False
    while len(totals) < R:
        idx = rng.integers(0, N, size=N)
        a = yA[idx]
        V = pop_var(a)
        if _is_degenerate(V):
            redrawn += 1
            if redrawn > max_retries:
                flagged = True
                break
            continue
        sub = yAB[:, idx]
        totals.append(0.5 * np.mean((a[None, :] - sub) ** 2, axis=1) / V)
        firsts.append((V - 0.5 * np.mean((yB[idx][None, :] - sub) ** 2, axis=1)) / V)
    if not totals:
        nan = np.full(k, np.nan)
        return BootstrapCI(level, nan, nan, nan, nan, redrawn, True)
    q = 100 * np.array([(1 - level) / 2, (1 + level) / 2])
    f_lo, f_hi = np.percentile(np.array(firsts), q, axis=0)
    t_lo, t_hi = np.percentile(np.array(totals), q, axis=0)
    return BootstrapCI(level, f_lo, f_hi, t_lo, t_hi, redrawn, flagged)

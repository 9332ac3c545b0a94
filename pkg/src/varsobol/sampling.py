"""Point sets and the two sampling designs.

Sample matrices are plain ``float64`` arrays of shape ``(n, d)`` with every
value in ``[0, 1)``. They are returned read-only so they can be shared freely.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

# Dimension limit of scipy's Joe-Kuo direction-number table.
SOBOL_MAX_DIM = 21201

ACCEPTED_H = (0.01, 0.02, 0.05, 0.1, 0.2)


class DimensionError(ValueError):
    """Requested more Sobol' dimensions than the direction table holds."""


class DesignError(ValueError):
    """Invalid design input (odd column count, bad lag spacing, ...)."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _check_sizes(n: int, d: int) -> None:
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")


def random_points(n: int, d: int, seed: int) -> np.ndarray:
    """Uniform pseudo-random ``(n, d)`` matrix from a Philox counter-based stream."""
    _check_sizes(n, d)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    return _frozen(rng.random((n, d)))


def sobol_points(n: int, d: int, scramble_seed: int | None = None) -> np.ndarray:
    """First ``n`` points of the ``d``-dimensional Sobol' sequence.

    Without ``scramble_seed`` the unscrambled sequence is returned with its
    all-zeros first point skipped. With a seed, an Owen-type (linear matrix
    scramble plus digital shift) randomisation is applied and no point is
    skipped.
    """
    _check_sizes(n, d)
    if d > SOBOL_MAX_DIM:
        raise DimensionError(f"Sobol' table supports d <= {SOBOL_MAX_DIM}, got {d}")
    with warnings.catch_warnings():
        # scipy warns when n is not a power of two; prefixes are still valid.
        warnings.simplefilter("ignore", UserWarning)
        if scramble_seed is None:
            engine = qmc.Sobol(d, scramble=False)
            engine.fast_forward(1)
        else:
            rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(scramble_seed)))
            engine = qmc.Sobol(d, scramble=True, seed=rng)
        pts = engine.random(n)
    return _frozen(np.ascontiguousarray(pts))


def sample_points(n: int, d: int, tau: int, seed: int) -> np.ndarray:
    """Dispatch on the benchmark sampler code: 1 random, 2 scrambled Sobol'."""
    if tau == 1:
        return random_points(n, d, seed)
    if tau == 2:
        return sobol_points(n, d, scramble_seed=seed)
    raise ValueError(f"sampler code must be 1 or 2, got {tau}")


@dataclass(frozen=True)
class DesignAB:
    """Pick-freeze design. ``ab(i)`` is ``A`` with column ``i`` taken from ``B``."""

    A: np.ndarray
    B: np.ndarray

    @property
    def N(self) -> int:
        return self.A.shape[0]

    @property
    def k(self) -> int:
        return self.A.shape[1]

    def ab(self, i: int) -> np.ndarray:
        out = np.array(self.A, copy=True)
        out[:, i] = self.B[:, i]
        return _frozen(out)

    @property
    def AB(self) -> list[np.ndarray]:
        return [self.ab(i) for i in range(self.k)]

    @property
    def total_order_cost(self) -> int:
        return self.N * (self.k + 1)

    def transformed(self, fn) -> "DesignAB":
        """Apply a columnwise map to ``A`` and ``B``.

        Because ``ab(i)`` only swaps whole columns, transforming the two base
        matrices is equivalent to transforming every derived matrix.
        """
        return DesignAB(_frozen(np.asarray(fn(self.A))), _frozen(np.asarray(fn(self.B))))


def build_ab(base: np.ndarray) -> DesignAB:
    """Split an ``(N, 2k)`` base matrix: A is the first ``k`` columns, B the rest."""
    base = np.asarray(base, dtype=np.float64)
    if base.ndim != 2 or base.shape[1] % 2:
        raise DesignError(f"base must have an even number of columns, got shape {base.shape}")
    k = base.shape[1] // 2
    A = np.ascontiguousarray(base[:, :k])
    B = np.ascontiguousarray(base[:, k:])
    return DesignAB(_frozen(A), _frozen(B))


def grid_size(h: float) -> int:
    """Number of points per cross-section, ``1/h``, validated to be an integer."""
    if not h > 0 or h > 0.5:
        raise DesignError(f"lag spacing must lie in (0, 0.5], got {h}")
    m = round(1.0 / h)
    if m < 2 or not math.isclose(m * h, 1.0, rel_tol=0, abs_tol=1e-9):
        raise DesignError(f"1/h must be an integer, got h={h}")
    return m


@dataclass(frozen=True)
class StarDesign:
    """STAR-VARS design.

    ``grids[v, i]`` holds the ``1/h`` ordered grid values of input ``i`` for
    star ``v``; ``center_pos[v, i]`` is the grid slot occupied by the star
    center. Points are laid out star by star: the center first, then for each
    input the non-center grid points in grid order.
    """

    centers: np.ndarray
    grids: np.ndarray
    center_pos: np.ndarray
    h: float

    @property
    def n_star(self) -> int:
        return self.centers.shape[0]

    @property
    def k(self) -> int:
        return self.centers.shape[1]

    @property
    def m(self) -> int:
        return self.grids.shape[2]

    @property
    def points_per_star(self) -> int:
        return self.k * (self.m - 1) + 1

    @property
    def n_points(self) -> int:
        return self.n_star * self.points_per_star

    @property
    def sections(self) -> np.ndarray:
        """Point indices, shape ``(n_star, k, 1/h)``, ordered along each grid."""
        S, k, m = self.n_star, self.k, self.m
        P = self.points_per_star
        j = np.arange(m)
        # Slot j of section i maps to offset 1 + i(m-1) + j, minus one past the center.
        past = (j[None, None, :] > self.center_pos[:, :, None]).astype(np.int64)
        idx = 1 + np.arange(k)[None, :, None] * (m - 1) + j[None, None, :] - past
        idx = idx + (np.arange(S) * P)[:, None, None]
        is_center = j[None, None, :] == self.center_pos[:, :, None]
        center_idx = np.broadcast_to((np.arange(S) * P)[:, None, None], idx.shape)
        return np.where(is_center, center_idx, idx)

    @property
    def points(self) -> np.ndarray:
        return assemble_star(self.centers, self.grids, self.center_pos)

    def transformed(self, fn) -> "StarDesign":
        """Apply a columnwise map to centers and grid values (not the expanded points)."""
        S, k, m = self.grids.shape
        g = np.transpose(self.grids, (0, 2, 1)).reshape(S * m, k)
        g = np.asarray(fn(g)).reshape(S, m, k).transpose(0, 2, 1)
        return StarDesign(
            _frozen(np.asarray(fn(self.centers))),
            _frozen(np.ascontiguousarray(g)),
            self.center_pos,
            self.h,
        )


def assemble_star(centers: np.ndarray, grids: np.ndarray, center_pos: np.ndarray) -> np.ndarray:
    S, k = centers.shape
    m = grids.shape[2]
    P = k * (m - 1) + 1
    pts = np.repeat(centers, P, axis=0).reshape(S, P, k)
    r = 1
    for i in range(k):
        for j_slot in range(m - 1):
            # j_slot counts non-center slots; map back to grid index.
            j = j_slot + (j_slot >= center_pos[:, i])
            pts[:, r, i] = grids[np.arange(S), i, j]
            r += 1
    return pts.reshape(S * P, k)


def build_stars(centers: np.ndarray, h: float) -> StarDesign:
    """Build star cross-sections through each center with spacing ``h``.

    The grid for a center coordinate ``c`` is ``(c mod h) + j*h`` for
    ``j = 0 .. 1/h - 1``, so it has exactly ``1/h`` points and passes through
    ``c``.
    """
    centers = np.asarray(centers, dtype=np.float64)
    if centers.ndim != 2:
        raise DesignError("centers must be a 2-D matrix")
    m = grid_size(h)
    S, k = centers.shape
    pos = np.floor(centers * m + 1e-9).astype(np.int64)
    pos = np.clip(pos, 0, m - 1)
    offset = centers - pos * h
    # Guard against offsets a hair below zero or at h from floating point.
    neg = offset < 0
    pos[neg] -= 1
    offset[neg] += h
    over = offset >= h
    pos[over] += 1
    offset[over] -= h
    grids = offset[:, :, None] + np.arange(m)[None, None, :] * h
    grids[np.arange(S)[:, None], np.arange(k)[None, :], pos] = centers
    np.clip(grids, 0.0, np.nextafter(1.0, 0.0), out=grids)
    return StarDesign(_frozen(centers.copy()), _frozen(grids), _frozen(pos.astype(np.intc)), float(h))


def star_cost(n_star: int, k: int, h: float) -> int:
    """Model evaluations of a star design: ``N_star * (k (1/h - 1) + 1)``."""
    return n_star * (k * (grid_size(h) - 1) + 1)

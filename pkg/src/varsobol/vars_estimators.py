"""Directional variograms, covariograms, IVARS and VARS-TO over star designs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .sampling import StarDesign
from .sobol_estimators import SensitivityEstimate, _is_degenerate, pop_var

MAX_LAG = 0.5


class CoverageError(ValueError):
    """The variogram's lags do not reach far enough (or fine enough) for the request."""


def n_lags(h: float, m: int | None = None) -> int:
    """Number of lags ``h, 2h, ...`` not exceeding half the factor range."""
    L = int(math.floor(MAX_LAG / h + 1e-9))
    if m is not None:
        L = min(L, m - 1)
    return L


@dataclass(frozen=True)
class SectionStats:
    """Pair statistics per lag for one or many cross-sections.

    Arrays have shape ``(n_sections, n_lags)`` (or ``(n_lags,)`` for a single
    section). Variances and covariances use population normalisation.
    """

    lags: np.ndarray
    gamma: np.ndarray
    cov: np.ndarray
    mean_head: np.ndarray
    mean_tail: np.ndarray
    var_head: np.ndarray
    var_tail: np.ndarray
    pairs: np.ndarray

    def closure_residual(self) -> np.ndarray:
        """``gamma + cov`` minus its head/tail moment decomposition (zero up to rounding)."""
        rhs = 0.5 * (self.var_head + self.var_tail) + 0.5 * (self.mean_head - self.mean_tail) ** 2
        return self.gamma + self.cov - rhs


def _stats(y, sections, h, max_lag):
    sections = np.atleast_2d(sections)
    m = sections.shape[1]
    L = n_lags(h, m) if max_lag is None else min(int(max_lag), m - 1)
    G, C, MH, MT, VH, VT = kernels.section_stats(y, sections, L)
    lags = h * np.arange(1, L + 1)
    pairs = m - np.arange(1, L + 1)
    return SectionStats(lags, G, C, MH, MT, VH, VT, pairs)


def cross_section_stats(y, h: float, max_lag: int | None = None) -> SectionStats:
    """Variogram/covariogram of one ordered cross-section.

    For lag ``l*h`` the pairs are ``(y[j], y[j+l])``. ``max_lag`` counts lag
    steps; lags that would exceed the section length are dropped.
    """
    y = np.asarray(y, dtype=np.float64)
    st = _stats(y, np.arange(len(y))[None, :], h, max_lag)
    return SectionStats(st.lags, *(a[0] for a in (st.gamma, st.cov, st.mean_head, st.mean_tail, st.var_head, st.var_tail)), st.pairs)


@dataclass(frozen=True)
class VariogramCurve:
    input: int
    lags: np.ndarray
    gamma: np.ndarray
    cov: np.ndarray
    pairs: np.ndarray
    mean_head: np.ndarray
    mean_tail: np.ndarray


def _pool(values, weights):
    # Weighted mean over sections; every section of a design has the same
    # pair count per lag, but the weights keep this honest.
    w = np.broadcast_to(weights, values.shape)
    return (values * w).sum(axis=0) / w.sum(axis=0)


def pooled_variogram(design: StarDesign, outputs, i: int) -> VariogramCurve:
    """Pair-count-weighted mean of section statistics for input ``i`` over all stars."""
    if design.n_star == 0:
        raise ValueError("empty design")
    outputs = np.asarray(outputs, dtype=np.float64)
    if outputs.shape[0] != design.n_points:
        raise ValueError(f"expected {design.n_points} outputs, got {outputs.shape[0]}")
    st = _stats(outputs, design.sections[:, i, :], design.h, None)
    w = st.pairs[None, :].astype(np.float64)
    return VariogramCurve(
        i,
        st.lags,
        _pool(st.gamma, w),
        _pool(st.cov, w),
        st.pairs * design.n_star,
        _pool(st.mean_head, w),
        _pool(st.mean_tail, w),
    )


def all_variograms(design: StarDesign, outputs) -> list[VariogramCurve]:
    return [pooled_variogram(design, outputs, i) for i in range(design.k)]


IVARS_H = (0.1, 0.3, 0.5)


def ivars(curve: VariogramCurve, H: float) -> float:
    """Integrated variogram over ``[0, H]`` by the trapezoid rule, with ``gamma(0) = 0``.

    If ``H`` falls between two lags the curve is interpolated linearly.
    """
    lags = np.asarray(curve.lags, dtype=np.float64)
    if len(lags) == 0 or lags[0] > H + 1e-12 or lags[-1] < H - 1e-12:
        raise CoverageError(f"lags {lags.tolist()} cannot cover IVARS over [0, {H}]")
    x = np.concatenate([[0.0], lags])
    g = np.concatenate([[0.0], curve.gamma])
    keep = x < H - 1e-12
    xs = np.concatenate([x[keep], [H]])
    gs = np.concatenate([g[keep], [np.interp(H, x, g)]])
    return float(np.sum(0.5 * (gs[1:] + gs[:-1]) * np.diff(xs)))


def vars_to(design: StarDesign, outputs, lag: str = "mean") -> SensitivityEstimate:
    """VARS-TO total-order estimate.

    Per lag, ``(E[gamma] + E[C]) / V`` with ``V`` the population variance of
    all design outputs. ``lag="mean"`` averages the per-lag ratios over every
    lag up to half the range; ``lag="smallest"`` keeps only the first lag.
    Per-lag values are in ``extra["per_lag"]`` (shape ``(k, n_lags)``).
    """
    if lag not in ("mean", "smallest"):
        raise ValueError(f"lag must be 'mean' or 'smallest', got {lag!r}")
    outputs = np.asarray(outputs, dtype=np.float64)
    curves = all_variograms(design, outputs)
    V = pop_var(outputs)
    k = design.k
    extra = {"curves": curves}
    if _is_degenerate(V):
        return SensitivityEstimate("vars_to", np.full(k, np.nan), design.n_points, V, True, extra)
    per_lag = np.array([(c.gamma + c.cov) / V for c in curves])
    extra["per_lag"] = per_lag
    values = per_lag.mean(axis=1) if lag == "mean" else per_lag[:, 0]
    return SensitivityEstimate("vars_to", values, design.n_points, V, False, extra)

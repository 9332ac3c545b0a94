"""Test-model bank.

Covers the one-dimensional illustration functions, the additive
six-dimensional response surface (with closed-form variances), the Liu ratio
model and the seeded random metafunction used by the benchmark.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import kernels
from .distributions import chi2_ppf


@dataclass(frozen=True)
class Model:
    k: int
    fn: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    label: str = ""

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            return self.fn(X[None, :])[0]
        if X.shape[1] != self.k:
            raise ValueError(f"{self.label}: expected {self.k} columns, got {X.shape[1]}")
        return self.fn(X)


# -- one-dimensional illustration functions ---------------------------------

def _fig1a(fn_id, x):
    if fn_id == 1:
        return x**2
    if fn_id == 2:
        return np.abs(x)
    if fn_id == 3:
        return np.where(x < 0, -((x + 1) ** 2), -((x - 1) ** 2))
    raise KeyError(fn_id)


def _fig1b(fn_id, x):
    if fn_id == 1:
        return 1.11 * x**2
    if fn_id == 2:
        return 2 - 0.2 * np.cos(7 * np.pi * x)
    raise KeyError(fn_id)


def _fig1c(fn_id, x):
    if fn_id == 1:
        return np.asarray(x, dtype=np.float64) * 1.0
    if fn_id == 2:
        sign = np.where(np.floor(4 * x) % 2 == 0, 1.0, -1.0)
        return sign * (0.125 - np.mod(x, 0.25)) + 0.125
    if fn_id == 3:
        sign = np.where(np.floor(32 * x) % 2 == 0, 1.0, -1.0)
        return sign * (0.0325 - np.mod(x, 0.0325)) + 0.0325
    raise KeyError(fn_id)


_FIG1 = {"1a": _fig1a, "1b": _fig1b, "1c": _fig1c}
FIG1_DOMAINS = {"1a": (-1.0, 1.0), "1b": (0.0, 1.0), "1c": (0.0, 1.0)}


def fig1_eval(figure: str, fn_id: int, x):
    """Evaluate function ``fn_id`` (1-based) of illustration panel ``figure``.

    Panel ``1a`` lives on [-1, 1]; ``1b`` and ``1c`` on [0, 1]. The sign
    exponent in ``1c`` is the integer part of ``4x`` (or ``32x``).
    """
    try:
        panel = _FIG1[figure]
    except KeyError:
        raise KeyError(f"unknown figure {figure!r}") from None
    x = np.asarray(x, dtype=np.float64)
    try:
        out = panel(fn_id, x)
    except KeyError:
        raise KeyError(f"figure {figure} has no function {fn_id}") from None
    return out if out.ndim else float(out)


# -- six-dimensional additive surface ---------------------------------------

@dataclass(frozen=True)
class SineTerm:
    """``a sin(b (x + e)) + c sin(d x) + f``."""

    a: float = 0.0
    b: float = 1.0
    e: float = 0.0
    c: float = 0.0
    d: float = 1.0
    f: float = 0.0

    def __call__(self, x):
        return self.a * np.sin(self.b * (x + self.e)) + self.c * np.sin(self.d * x) + self.f

    def mean(self, lo=0.0, hi=1.0) -> float:
        a, b, e, c, d, f = self.a, self.b, self.e, self.c, self.d, self.f

        def F(x):
            v = f * x
            if a:
                v -= a / b * math.cos(b * (x + e))
            if c:
                v -= c / d * math.cos(d * x)
            return v

        return (F(hi) - F(lo)) / (hi - lo)

    def mean_square(self, lo=0.0, hi=1.0) -> float:
        a, b, e, c, d, f = self.a, self.b, self.e, self.c, self.d, self.f

        def F(x):
            v = f * f * x
            if a:
                u = b * (x + e)
                v += a * a / (2 * b) * (u - 0.5 * math.sin(2 * u))
                v -= 2 * a * f / b * math.cos(u)
            if c:
                v += c * c / (2 * d) * (d * x - 0.5 * math.sin(2 * d * x))
                v -= 2 * c * f / d * math.cos(d * x)
            if a and c:
                v += a * c * (
                    math.sin((b - d) * x + b * e) / (b - d)
                    - math.sin((b + d) * x + b * e) / (b + d)
                )
            return v

        return (F(hi) - F(lo)) / (hi - lo)

    def variance(self, lo=0.0, hi=1.0) -> float:
        return self.mean_square(lo, hi) - self.mean(lo, hi) ** 2


PI = math.pi
SIXDIM_TERMS = (
    SineTerm(a=-1.0, b=PI, c=-0.3, d=3.33 * PI),
    SineTerm(a=-0.76, b=PI, e=-0.2, f=-0.315),
    SineTerm(a=-0.12, b=1.05 * PI, e=-0.2, c=-0.02, d=95.24 * PI, f=-0.96),
    SineTerm(a=-0.12, b=1.05 * PI, e=-0.2, f=-0.96),
    SineTerm(a=-0.05, b=PI, e=-0.2, f=-1.02),
    SineTerm(f=-1.08),
)


def sixdim_component(i: int, x):
    """The ``i``-th (0-based) additive term of the six-dimensional surface."""
    return SIXDIM_TERMS[i](np.asarray(x, dtype=np.float64))


def sixdim_eval(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.shape[1] != 6:
        raise ValueError("six-dimensional model needs 6 inputs")
    y = np.zeros(X.shape[0])
    for i, term in enumerate(SIXDIM_TERMS):
        y += term(X[:, i])
    return y[0] if single else y


@dataclass(frozen=True)
class AnalyticIndices:
    V: np.ndarray
    S: np.ndarray

    @property
    def total_variance(self) -> float:
        return float(self.V.sum())


def sixdim_analytic() -> AnalyticIndices:
    """Per-input variances over [0, 1] from closed-form antiderivatives.

    The model is additive, so first-order and total-order indices coincide and
    equal each term's variance share.
    """
    V = np.array([max(t.variance(), 0.0) if (t.a or t.c) else 0.0 for t in SIXDIM_TERMS])
    V.setflags(write=False)
    S = V / V.sum()
    S.setflags(write=False)
    return AnalyticIndices(V, S)


SIXDIM = Model(6, sixdim_eval, "sixdim")


# -- Liu's skewed ratio -----------------------------------------------------

LIU_DF = (10.0, 13.978)


def liu_build(seed: int = 0) -> Model:
    """``y = x1 / x2`` with ``x1 ~ chi2(10)`` and ``x2 ~ chi2(13.978)``.

    Unit-hypercube points are mapped through the chi-square quantile
    functions. A denominator below 1e-12 (only reachable at ``u2 == 0``) is
    replaced by a redraw from a stream seeded with ``seed``.
    """

    def fn(U):
        x1 = chi2_ppf(U[:, 0], LIU_DF[0])
        x2 = chi2_ppf(U[:, 1], LIU_DF[1])
        bad = x2 < 1e-12
        if bad.any():
            rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
            for j in np.flatnonzero(bad):
                while x2[j] < 1e-12:
                    x2[j] = chi2_ppf(rng.random(), LIU_DF[1])
        return x1 / x2

    return Model(2, fn, "liu")


# -- metafunction -----------------------------------------------------------

BANK = (
    "linear",
    "quadratic",
    "cubic",
    "exponential",
    "periodic",
    "discontinuous",
    "non-monotonic",
    "inverse",
    "trigonometric",
    "no-effect",
)
NO_EFFECT = BANK.index("no-effect")


def bank_function(name_or_id, x):
    fid = BANK.index(name_or_id) if isinstance(name_or_id, str) else int(name_or_id)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    return kernels.bank_eval(x[:, None], np.array([fid]))[:, 0]


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@lru_cache(maxsize=64)
def _combinations(k: int, r: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(k), r)), dtype=np.intc).reshape(-1, r)


@dataclass(frozen=True)
class MetafunctionSpec:
    """Seeded random test function.

    The candidate pools and their coefficients are drawn independently of the
    activation fractions; the active terms are pool prefixes, so raising
    ``k2`` only ever adds pair terms.
    """

    k: int
    eps: int
    k2: float
    k3: float
    ids: np.ndarray
    alpha: np.ndarray
    pool_pairs: np.ndarray
    pool_beta: np.ndarray
    pool_triples: np.ndarray
    pool_gamma: np.ndarray

    @property
    def n_pairs(self) -> int:
        return _round_half_up(self.k2 * len(self.pool_pairs))

    @property
    def n_triples(self) -> int:
        return _round_half_up(self.k3 * len(self.pool_triples))

    @property
    def pairs(self) -> np.ndarray:
        return self.pool_pairs[: self.n_pairs]

    @property
    def beta(self) -> np.ndarray:
        return self.pool_beta[: self.n_pairs]

    @property
    def triples(self) -> np.ndarray:
        return self.pool_triples[: self.n_triples]

    @property
    def gamma(self) -> np.ndarray:
        return self.pool_gamma[: self.n_triples]

    def terms(self):
        return self.alpha, self.pairs, self.beta, self.triples, self.gamma

    def bank(self, X) -> np.ndarray:
        """Univariate effects ``f_id(i)(x_i)``, columnwise."""
        return kernels.bank_eval(np.atleast_2d(X), self.ids)

    def combine(self, F) -> np.ndarray:
        return kernels.combine(F, *self.terms())

    def __call__(self, X):
        return metafunction_eval(self, X)


def metafunction_build(k: int, eps: int, k2: float, k3: float) -> MetafunctionSpec:
    if k < 3:
        raise ValueError(f"metafunction needs k >= 3, got {k}")
    if not (0.0 <= k2 <= 1.0 and 0.0 <= k3 <= 1.0):
        raise ValueError("interaction fractions must lie in [0, 1]")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(eps))))
    ids = rng.integers(0, len(BANK), size=k).astype(np.intc)
    alpha = rng.normal(0.0, 1.0, size=k)
    pools = []
    for r in (2, 3):
        combos = _combinations(k, r)
        size = min(k, len(combos))
        pick = rng.choice(len(combos), size=size, replace=False)
        pools.append((combos[pick], rng.normal(0.0, 0.5, size=size)))
    (pp, pb), (pt, pg) = pools
    for a in (ids, alpha, pp, pb, pt, pg):
        a.setflags(write=False)
    return MetafunctionSpec(k, int(eps), float(k2), float(k3), ids, alpha, pp, pb, pt, pg)


def metafunction_eval(spec: MetafunctionSpec, X):
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.shape[1] != spec.k:
        raise ValueError(f"metafunction has k={spec.k}, got {X.shape[1]} inputs")
    y = spec.combine(spec.bank(X))
    return float(y[0]) if single else y

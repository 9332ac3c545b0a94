"""Input distributions of the benchmark and their inverse CDFs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

# Unit-interval values are clamped into [CLAMP_LO, CLAMP_HI] before any
# inverse-CDF transform so unbounded families stay finite.
CLAMP_LO = 0.001
CLAMP_HI = 0.999


@dataclass(frozen=True)
class Family:
    name: str
    params: tuple[float, ...] = ()

    def __str__(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({', '.join(f'{p:g}' for p in self.params)})"


UNIFORM = Family("uniform01")
NORMAL = Family("normal", (0.5, 0.2))
BETA_8_2 = Family("beta", (8.0, 2.0))
BETA_2_8 = Family("beta", (2.0, 8.0))
BETA_2_05 = Family("beta", (2.0, 0.5))
BETA_05_2 = Family("beta", (0.5, 2.0))
LOGITNORMAL = Family("logitnormal", (0.0, 3.16))

# phi codes 1..7 in order; code 8 mixes these per input.
PHI_FAMILIES = (UNIFORM, NORMAL, BETA_8_2, BETA_2_8, BETA_2_05, BETA_05_2, LOGITNORMAL)


@dataclass(frozen=True)
class DistributionSpec:
    phi: int
    per_input: tuple[Family, ...]

    @property
    def k(self) -> int:
        return len(self.per_input)

    def transform(self, U: np.ndarray) -> np.ndarray:
        """Map a unit-hypercube matrix columnwise through the inverse CDFs."""
        U = np.asarray(U, dtype=np.float64)
        if U.shape[-1] != self.k:
            raise ValueError(f"expected {self.k} columns, got {U.shape[-1]}")
        out = np.empty_like(U)
        for fam in set(self.per_input):
            cols = [c for c, f in enumerate(self.per_input) if f == fam]
            out[..., cols] = inv_cdf(U[..., cols], fam)
        return out


def resolve_phi(phi: int, k: int, seed: int = 0) -> DistributionSpec:
    """Turn a ``phi`` code 1-8 into per-input families.

    Code 8 draws each input's family uniformly from codes 1-7 using ``seed``.
    """
    if phi not in range(1, 9):
        raise ValueError(f"phi must be in 1..8, got {phi}")
    if k < 1:
        raise ValueError("k must be positive")
    if phi <= 7:
        return DistributionSpec(phi, (PHI_FAMILIES[phi - 1],) * k)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 8])))
    codes = rng.integers(0, 7, size=k)
    return DistributionSpec(phi, tuple(PHI_FAMILIES[c] for c in codes))


def clamp(u):
    return np.clip(u, CLAMP_LO, CLAMP_HI)


def inv_cdf(u, family: Family):
    """Quantile function of ``family`` evaluated at clamped ``u``.

    Normal quantiles use the Cephes rational approximation (``ndtri``); beta
    quantiles invert the regularized incomplete beta function iteratively.
    """
    u = clamp(np.asarray(u, dtype=np.float64))
    name, p = family.name, family.params
    if name == "uniform01":
        return u
    if name == "normal":
        return p[0] + p[1] * special.ndtri(u)
    if name == "beta":
        return special.betaincinv(p[0], p[1], u)
    if name == "logitnormal":
        return special.expit(p[0] + p[1] * special.ndtri(u))
    raise ValueError(f"unknown family {name!r}")


def cdf(x, family: Family):
    x = np.asarray(x, dtype=np.float64)
    name, p = family.name, family.params
    if name == "uniform01":
        return np.clip(x, 0.0, 1.0)
    if name == "normal":
        return special.ndtr((x - p[0]) / p[1])
    if name == "beta":
        return special.betainc(p[0], p[1], np.clip(x, 0.0, 1.0))
    if name == "logitnormal":
        return special.ndtr((special.logit(x) - p[0]) / p[1])
    raise ValueError(f"unknown family {name!r}")


def chi2_ppf(u, df: float):
    """Chi-square quantile (no clamping), used by the Liu model."""
    return 2.0 * special.gammaincinv(0.5 * df, np.asarray(u, dtype=np.float64))

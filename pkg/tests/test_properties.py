"""Invariant properties, runnable on their own with ``pytest tests/test_properties.py``."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varsobol.metrics import savage_scores
from varsobol.models import SIXDIM, Model, metafunction_build, sixdim_analytic
from varsobol.sampling import build_ab, build_stars, random_points, sobol_points
from varsobol.sobol_estimators import jansen_first, jansen_total, pop_var, single_trajectory_first
from varsobol.vars_estimators import cross_section_stats, ivars, pooled_variogram, vars_to

_affine = st.tuples(
    st.floats(0.01, 100.0).flatmap(lambda a: st.sampled_from([a, -a])),
    st.floats(-1e3, 1e3),
)


@settings(max_examples=25, deadline=None)
@given(_affine)
def test_indices_invariant_under_affine_rescaling(ab):
    a, b = ab
    spec = metafunction_build(5, 9, 0.8, 0.6)
    d = build_ab(sobol_points(64, 10, scramble_seed=1))
    yA, yB = spec(d.A), spec(d.B)
    yAB = np.array([spec(d.ab(i)) for i in range(5)])
    T0 = jansen_total(yA, yAB).values
    T1 = jansen_total(a * yA + b, a * yAB + b).values
    np.testing.assert_allclose(T1, T0, rtol=1e-8, atol=1e-10)
    S0 = jansen_first(yB, yAB, pop_var(yA)).values
    S1 = jansen_first(a * yB + b, a * yAB + b, pop_var(a * yA + b)).values
    np.testing.assert_allclose(S1, S0, rtol=1e-8, atol=1e-10)

    stars = build_stars(np.asarray(sobol_points(4, 5, scramble_seed=2)), 0.1)
    y = spec(stars.points)
    np.testing.assert_allclose(vars_to(stars, a * y + b).values, vars_to(stars, y).values, rtol=1e-8, atol=1e-10)
    V0, V1 = pop_var(y), pop_var(a * y + b)
    for i in range(5):
        g0 = ivars(pooled_variogram(stars, y, i), 0.5) / V0
        g1 = ivars(pooled_variogram(stars, a * y + b, i), 0.5) / V1
        assert g1 == pytest.approx(g0, rel=1e-8, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.0, 1.0), min_size=6, max_size=6), st.lists(st.floats(0.0, 1.0), min_size=6, max_size=6), st.integers(0, 5))
def test_single_trajectory_anchor_independent(a1, a2, i):
    V = sixdim_analytic().total_variance
    s1 = single_trajectory_first(SIXDIM, i, np.array(a1), grid_n=256, V=V)
    s2 = single_trajectory_first(SIXDIM, i, np.array(a2), grid_n=256, V=V)
    assert abs(s1 - s2) <= 1e-12


@given(st.integers(1, 400))
def test_savage_scores_sum_to_k(k):
    assert savage_scores(np.arange(1, k + 1)).sum() == pytest.approx(k, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 8), st.integers(0, 10_000), st.integers(0, 7))
def test_ignored_inputs_give_exact_zero_total(k, seed, j):
    j = j % k
    w = np.random.default_rng(seed).normal(size=k)
    w[j] = 0.0
    model = Model(k, lambda X: np.sin(X @ w) + (X @ w) ** 2, "m")
    d = build_ab(random_points(32, 2 * k, seed))
    yAB = np.array([model(d.ab(i)) for i in range(k)])
    assert jansen_total(model(d.A), yAB).values[j] == 0.0


def test_ignored_input_zero_through_model():
    model = Model(3, lambda X: X[:, 0] * np.exp(X[:, 1]), "m")
    d = build_ab(sobol_points(128, 6, scramble_seed=0))
    yAB = np.array([model(d.ab(i)) for i in range(3)])
    assert jansen_total(model(d.A), yAB).values[2] == 0.0


def test_ivars_half_range_for_identity():
    h = 0.02
    d = build_stars(np.array([[0.01]]), h)
    val = ivars(pooled_variogram(d, d.points[:, 0], 0), 0.5)
    assert abs(val - 1 / 48) <= h**2 * 0.5 / 12 * (1 + 1e-9)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 60), st.integers(0, 2**32 - 1), st.floats(1e-6, 1e6))
def test_variogram_closure(m, seed, scale):
    y = scale * np.random.default_rng(seed).normal(size=m)
    st_ = cross_section_stats(y, 1.0 / m)
    ref = np.maximum(np.abs(st_.gamma + st_.cov), scale**2)
    assert np.all(np.abs(st_.closure_residual()) <= 1e-12 * ref)

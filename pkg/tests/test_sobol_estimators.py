import numpy as np
import pytest

from varsobol.models import SIXDIM, Model, sixdim_analytic
from varsobol.sampling import build_ab, random_points, sobol_points
from varsobol.sobol_estimators import (
    bootstrap_percentile,
    jansen_first,
    jansen_total,
    single_trajectory_first,
)


def _ab_outputs(model, N, seed=0, scrambled=True):
    base = sobol_points(N, 2 * model.k, scramble_seed=seed) if scrambled else random_points(N, 2 * model.k, seed)
    d = build_ab(base)
    return model(d.A), model(d.B), np.array([model(d.ab(i)) for i in range(model.k)])


def test_total_zero_for_ignored_input():
    yA = np.array([1.0, 2.0, 5.0])
    assert jansen_total(yA, yA[None, :]).values[0] == 0.0


def test_total_hand_example():
    est = jansen_total(np.array([1.0, 3.0]), np.array([[3.0, 1.0]]))
    assert est.values[0] == 2.0
    assert est.variance == 1.0
    assert est.clipped[0] == 1.0


def test_total_degenerate_flag():
    est = jansen_total(np.ones(4), np.ones((2, 4)))
    assert est.degenerate and np.all(np.isnan(est.values))


def test_first_equal_columns_gives_one():
    yB = np.array([0.0, 1.0, 4.0])
    assert jansen_first(yB, yB[None, :], 2.0).values[0] == 1.0


def test_sixdim_totals_match_analytic():
    yA, _, yAB = _ab_outputs(SIXDIM, 2**12)
    np.testing.assert_allclose(jansen_total(yA, yAB).values, sixdim_analytic().S, atol=0.01)


def test_linear_first_orders_sum_to_one():
    lin = Model(2, lambda X: X[:, 0] + 2 * X[:, 1], "lin")
    yA, yB, yAB = _ab_outputs(lin, 2**13)
    est = jansen_first(yB, yAB, np.var(yA))
    assert est.values.sum() == pytest.approx(1.0, abs=0.02)
    np.testing.assert_allclose(est.values, [0.2, 0.8], atol=0.02)


def test_single_trajectory_exact_zero_for_constant_term():
    V = sixdim_analytic().total_variance
    assert single_trajectory_first(SIXDIM, 5, np.full(6, 0.3), grid_n=1000, V=V) == 0.0


def test_single_trajectory_converges():
    V = sixdim_analytic().total_variance
    s2 = single_trajectory_first(SIXDIM, 1, np.full(6, 0.5), grid_n=10**4, V=V)
    assert s2 == pytest.approx(sixdim_analytic().S[1], abs=1e-3)


def test_single_trajectory_anchor_independent():
    V = sixdim_analytic().total_variance
    a = single_trajectory_first(SIXDIM, 0, np.full(6, 0.1), grid_n=512, V=V)
    b = single_trajectory_first(SIXDIM, 0, np.linspace(0.2, 0.9, 6), grid_n=512, V=V)
    assert abs(a - b) <= 1e-12


def test_single_trajectory_validates():
    with pytest.raises(ValueError):
        single_trajectory_first(SIXDIM, 0, np.full(6, 0.5), grid_n=100, V=0.0)
    with pytest.raises(ValueError):
        single_trajectory_first(SIXDIM, 0, np.full(6, 0.5), grid_n=4, V=1.0)


def test_bootstrap_zero_width_for_ignored_input():
    yA, yB, yAB = _ab_outputs(Model(3, lambda X: X[:, 0] + X[:, 1], "two"), 256)
    ci = bootstrap_percentile(yA, yB, yAB, R=200, seed=1)
    assert ci.total_lo[2] == ci.total_hi[2] == 0.0


def test_bootstrap_percentiles():
    yA, yB, yAB = _ab_outputs(SIXDIM, 256, seed=2)
    ci = bootstrap_percentile(yA, yB, yAB, R=500, seed=3)
    # Recompute the 2.5/97.5 percentiles from an identical resampling stream.
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(3)))
    T = []
    for _ in range(500):
        idx = rng.integers(0, 256, size=256)
        T.append(jansen_total(yA[idx], yAB[:, idx]).values)
    lo, hi = np.percentile(np.array(T), [2.5, 97.5], axis=0)
    np.testing.assert_allclose(ci.total_lo, lo, rtol=1e-12)
    np.testing.assert_allclose(ci.total_hi, hi, rtol=1e-12)


def test_bootstrap_ci_contains_estimate():
    lin = Model(3, lambda X: X[:, 0] + 0.5 * X[:, 1] + 0.2 * X[:, 2], "lin")
    hits = total = 0
    for t in range(100):
        yA, yB, yAB = _ab_outputs(lin, 128, seed=t, scrambled=False)
        est = jansen_total(yA, yAB).values
        ci = bootstrap_percentile(yA, yB, yAB, R=100, seed=t)
        hits += np.sum((ci.total_lo <= est) & (est <= ci.total_hi))
        total += 3
    assert hits / total >= 0.99


def test_bootstrap_validates():
    with pytest.raises(ValueError):
        bootstrap_percentile(np.ones(3), np.ones(3), np.ones((1, 3)), R=50)

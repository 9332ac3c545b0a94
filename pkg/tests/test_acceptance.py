"""Acceptance criteria.

Each test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary and when this file is run as a script.
"""

import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.integrate import quad

from varsobol import bench, replicate
from varsobol.models import SIXDIM, SIXDIM_TERMS, liu_build, sixdim_analytic
from varsobol.sampling import build_ab, build_stars, sobol_points
from varsobol.sobol_estimators import jansen_total
from varsobol.vars_estimators import cross_section_stats, vars_to

REPORT: list[str] = []

TABLE_V = (0.0972, 0.136, 0.00358, 0.00301, 0.000587, 0.0)
LIU_T = 0.5462


def _report(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    REPORT.append(line)
    print(line)
    assert ok, line


def _sig3(x):
    return float(f"{x:.3g}")


def test_c01_analytic_oracle():
    t0 = time.perf_counter()
    V = sixdim_analytic().V
    table_ok = [(_sig3(v) == t) for v, t in zip(V, TABLE_V)]
    quad_err = []
    for term, v in zip(SIXDIM_TERMS, V):
        m = quad(term, 0, 1, limit=500, epsabs=1e-13)[0]
        m2 = quad(lambda x: term(x) ** 2, 0, 1, limit=500, epsabs=1e-13)[0]
        quad_err.append(abs((m2 - m * m) - v))
    secs = time.perf_counter() - t0
    ok = all(table_ok) and max(quad_err) <= 1e-6 and secs < 1.0
    shown = ", ".join(f"{_sig3(v):g}" for v in V)
    _report(1, ok, f"V=({shown}) table match={table_ok} max|quad-closed|={max(quad_err):.1e} {secs:.2f}s")


def test_c02_fig4a_pf():
    t0 = time.perf_counter()
    rec = {r["Nt"]: r for r in replicate.fig4a(N_values=(128,), replicates=500, seed=0)}
    secs = time.perf_counter() - t0
    pf = rec[896]["PF"]
    _report(2, pf < 0.05 and secs < 60, f"PF at Nt=896 over 500 replicates = {pf:.3f} {secs:.1f}s")


def test_c03_fig4b_mae():
    t0 = time.perf_counter()
    recs = replicate.fig4b(replicates=50, seed=0)
    secs = time.perf_counter() - t0
    ok = all(r["mae_trajectory"] < r["mae_vars"] for r in recs) and len(recs) == 5 and secs < 300
    pairs = "; ".join(f"Nt={r['Nt_vars']}: {r['mae_trajectory']:.4f}<{r['mae_vars']:.4f}" for r in recs)
    _report(3, ok, f"{pairs} {secs:.1f}s")


def test_c04_liu():
    t0 = time.perf_counter()
    liu = liu_build(0)
    d = build_ab(sobol_points(2**14, 4, scramble_seed=0))
    yA = liu(d.A)
    yAB = np.array([liu(d.ab(i)) for i in range(2)])
    T = jansen_total(yA, yAB).values
    secs = time.perf_counter() - t0
    ok = np.all(np.abs(T - LIU_T) <= 0.02) and abs(T[0] - T[1]) <= 0.01 and secs < 30
    _report(4, ok, f"T=({T[0]:.4f}, {T[1]:.4f}) {secs:.1f}s")


def test_c05_closure():
    t0 = time.perf_counter()
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(1000):
        m = int(rng.integers(2, 101))
        y = rng.normal(size=m) * 10 ** rng.uniform(-3, 3) + rng.normal() * 10
        st = cross_section_stats(y, 1.0 / m)
        lhs = st.gamma + st.cov
        scale = np.maximum(np.abs(lhs), np.maximum(st.var_head + st.var_tail, 1e-300))
        worst = max(worst, float(np.max(np.abs(st.closure_residual()) / scale)))
    secs = time.perf_counter() - t0
    _report(5, worst <= 1e-12 and secs < 10, f"max relative residual {worst:.1e} {secs:.1f}s")


def test_c06_additive_equivalence():
    t0 = time.perf_counter()
    S = sixdim_analytic().S
    stars = build_stars(np.asarray(sobol_points(50, 6, scramble_seed=0)), 0.1)
    Tv = vars_to(stars, SIXDIM(stars.points)).values
    d = build_ab(sobol_points(2**12, 12, scramble_seed=0))
    Tj = jansen_total(SIXDIM(d.A), np.array([SIXDIM(d.ab(i)) for i in range(6)])).values
    secs = time.perf_counter() - t0
    gaps = {
        "vars-analytic": np.max(np.abs(Tv - S)),
        "jansen-analytic": np.max(np.abs(Tj - S)),
        "vars-jansen": np.max(np.abs(Tv - Tj)),
    }
    ok = all(g <= 0.02 for g in gaps.values()) and secs < 60
    shown = ", ".join(f"{k}={v:.4f}" for k, v in gaps.items())
    _report(6, ok, f"max per-input gaps: {shown} {secs:.1f}s")


def test_c07_budget_matching():
    t0 = time.perf_counter()
    rows = bench.sample_rows(10**4, 0)
    diff = np.array([abs(v - j) for v, _, j in (bench.matched_budget(r.N_star, r.h, r.k) for r in rows)])
    secs = time.perf_counter() - t0
    frac = float(np.mean(diff <= 10))
    ok = diff.max() <= 25 and frac >= 0.9 and secs < 10
    _report(7, ok, f"max diff {diff.max()}, fraction <= 10 = {frac:.4f} {secs:.1f}s")


def test_c08_scaled_benchmark():
    t0 = time.perf_counter()
    res = bench.run_all(bench.sample_rows(2**7, 0), master_seed=0)
    secs = time.perf_counter() - t0
    rv = np.nanmedian([r.r_vars for r in res])
    rj = np.nanmedian([r.r_jansen for r in res])
    ok = rj >= 0.95 and rv >= 0.90 and rj >= rv and secs < 900
    _report(8, ok, f"median r_jansen={rj:.4f} r_vars={rv:.4f} {secs:.0f}s")


@pytest.mark.slow
def test_c09_meta_analysis():
    t0 = time.perf_counter()
    meta = bench.meta_analysis(2**10, master_seed=0)
    secs = time.perf_counter() - t0
    T = dict(zip(meta.parameters, meta.Ti))
    top = max(T, key=T.get)
    ok = top == "phi" and T["k2"] < 0.05 and T["k3"] < 0.05 and secs <= 3600
    shown = ", ".join(f"{k}={v:.3f}" for k, v in T.items())
    _report(9, ok, f"T: {shown}; largest={top}, dropped groups={meta.n_dropped} {secs:.0f}s")


def test_c10_property_suites_standalone():
    path = Path(__file__).with_name("test_properties.py")
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(path)],
        capture_output=True,
        text=True,
    )
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr.strip()
    _report(10, proc.returncode == 0, f"standalone property run: {tail}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))

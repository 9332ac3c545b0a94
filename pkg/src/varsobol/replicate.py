"""Replication tables for the six-dimensional and benchmark figures.

Every function returns a list of plain dict records so the CLI can write
them straight to CSV.
"""

from __future__ import annotations

import numpy as np

from .metrics import mae, prob_failure, ranks_desc
from .models import SIXDIM, sixdim_analytic
from .sampling import build_ab, build_stars, sobol_points, star_cost
from .sobol_estimators import pop_var, single_trajectory_first
from .vars_estimators import vars_to

FIG4A_N = (16, 32, 64, 128, 256)
FIG4B_N_STAR = (2, 5, 10, 20, 50)
FIG4_H = 0.1

FIG4A_COLUMNS = ("N", "Nt", "replicates", "PF")
FIG4B_COLUMNS = ("N_star", "Nt_vars", "N", "Nt_trajectory", "replicates", "mae_trajectory", "mae_vars")
FIG5_COLUMNS = ("row", "r_vars", "r_jansen", "delta")
FIG6_COLUMNS = ("method", "bin_lo", "bin_hi", "count", "median")


def trajectory_estimates(N: int, seed, model=SIXDIM) -> np.ndarray:
    """Single-trajectory indices from one ``N``-row scrambled Sobol' A/B design.

    Input ``i`` is swept over ``B[:, i]`` with the others fixed at ``A[0]``.
    The global variance is the population variance of the model on ``A``.
    Cost is ``N (k + 1)`` evaluations.
    """
    k = model.k
    d = build_ab(sobol_points(N, 2 * k, scramble_seed=seed))
    V = pop_var(model(d.A))
    return np.array(
        [single_trajectory_first(model, i, d.A[0], V=V, points=d.B[:, i]) for i in range(k)]
    )


def vars_estimates(N_star: int, h: float, seed, model=SIXDIM) -> np.ndarray:
    centers = sobol_points(N_star, model.k, scramble_seed=seed)
    design = build_stars(centers, h)
    return vars_to(design, model(design.points)).values


def fig4a(N_values=FIG4A_N, replicates: int = 500, seed: int = 0) -> list[dict]:
    """Probability of failure of the single-trajectory ranking against the analytic ranking."""
    truth = sixdim_analytic().S
    ranks = ranks_desc(truth)
    out = []
    for N in N_values:
        est = np.array([trajectory_estimates(N, [seed, N, r]) for r in range(replicates)])
        out.append({"N": N, "Nt": N * (SIXDIM.k + 1), "replicates": replicates, "PF": prob_failure(ranks, est)})
    return out


def fig4b(N_star_values=FIG4B_N_STAR, h: float = FIG4_H, replicates: int = 50, seed: int = 0) -> list[dict]:
    """MAE of VARS-TO and of the single-trajectory estimator at matched budgets."""
    truth = sixdim_analytic().S
    k = SIXDIM.k
    out = []
    for n_star in N_star_values:
        nt = star_cost(n_star, k, h)
        N = max(2, int(nt / (k + 1) + 0.5))
        vt = [vars_estimates(n_star, h, [seed, n_star, r, 1]) for r in range(replicates)]
        tr = [trajectory_estimates(N, [seed, n_star, r, 2]) for r in range(replicates)]
        out.append(
            {
                "N_star": n_star,
                "Nt_vars": nt,
                "N": N,
                "Nt_trajectory": N * (k + 1),
                "replicates": replicates,
                "mae_trajectory": mae(truth, tr),
                "mae_vars": mae(truth, vt),
            }
        )
    return out


def fig5(results) -> list[dict]:
    """Scatter source: one record per benchmark row."""
    return [
        {"row": r.row, "r_vars": r.r_vars, "r_jansen": r.r_jansen, "delta": r.params.delta}
        for r in results
    ]


def fig6(results, bins: int = 20, lo: float = -1.0) -> list[dict]:
    """Histogram of r per method over ``[lo, 1]``; flagged rows are left out."""
    edges = np.linspace(lo, 1.0, bins + 1)
    out = []
    for method, attr in (("vars", "r_vars"), ("jansen", "r_jansen")):
        r = np.array([getattr(x, attr) for x in results], dtype=np.float64)
        r = r[np.isfinite(r)]
        med = float(np.median(r)) if r.size else float("nan")
        counts, _ = np.histogram(np.clip(r, lo, 1.0), bins=edges)
        for j in range(bins):
            out.append(
                {"method": method, "bin_lo": float(edges[j]), "bin_hi": float(edges[j + 1]), "count": int(counts[j]), "median": med}
            )
    return out

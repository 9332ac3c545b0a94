"""Randomized VARS-TO vs Jansen comparison over the 9-parameter benchmark space.

Every random stream a row consumes is seeded from ``(master_seed, eps)``, so a
row's outcome is a pure function of its nine parameters. That keeps results
independent of worker count and execution order, and keeps the
meta-analysis from attributing seed noise to the parameters.
"""

from __future__ import annotations

import csv
import logging
import math
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .distributions import resolve_phi
from .metrics import performance_r
from .models import metafunction_build
from .sampling import build_ab, build_stars, sample_points, sobol_points, star_cost
from .sobol_estimators import bootstrap_percentile, jansen_first, jansen_total, pop_var
from .vars_estimators import vars_to

log = logging.getLogger(__name__)

H_LEVELS_TABLE = (0.01, 0.05, 0.1, 0.2)
H_LEVELS_SM = (0.02, 0.05, 0.1, 0.2)
K2_LEVELS = tuple(round(0.5 + 0.05 * j, 2) for j in range(11))
K3_LEVELS = tuple(round(0.3 + 0.05 * j, 2) for j in range(15))

PARAMS = ("N_star", "h", "k", "eps", "tau", "phi", "k2", "k3", "delta")
TRUTH_N = 2**12

RESULT_COLUMNS = (
    "row", "N_star", "h", "k", "eps", "tau", "phi", "k2", "k3", "delta",
    "Nt_vars", "Nt_jansen", "r_vars", "r_jansen", "flag_vars", "flag_jansen", "seconds",
)
TIMING_COLUMNS = ("seconds",)
META_COLUMNS = ("parameter", "Si", "Si_lo", "Si_hi", "Ti", "Ti_lo", "Ti_hi")


@dataclass(frozen=True)
class BenchmarkRow:
    N_star: int
    h: float
    k: int
    eps: int
    tau: int
    phi: int
    k2: float
    k3: float
    delta: int


def _levels(h_levels):
    return (
        tuple(range(3, 51)),
        tuple(h_levels),
        tuple(range(3, 51)),
        tuple(range(1, 201)),
        (1, 2),
        tuple(range(1, 9)),
        K2_LEVELS,
        K3_LEVELS,
        (1, 2, 3),
    )


def rows_from_unit(U, h_levels=H_LEVELS_TABLE) -> list[BenchmarkRow]:
    """Map a unit ``(n, 9)`` matrix to benchmark rows by uniform binning."""
    U = np.asarray(U, dtype=np.float64)
    if U.ndim != 2 or U.shape[1] != 9:
        raise ValueError("need an (n, 9) matrix")
    cols = []
    for j, lv in enumerate(_levels(h_levels)):
        idx = np.minimum((U[:, j] * len(lv)).astype(int), len(lv) - 1)
        cols.append([lv[t] for t in idx])
    return [BenchmarkRow(*vals) for vals in zip(*cols)]


def sample_rows(n: int, master_seed: int = 0, h_levels=H_LEVELS_TABLE) -> list[BenchmarkRow]:
    if n < 1:
        raise ValueError("need at least one row")
    return rows_from_unit(sobol_points(n, 9, scramble_seed=master_seed), h_levels)


def matched_budget(N_star: int, h: float, k: int) -> tuple[int, int, int]:
    """``(Nt_vars, N, Nt_jansen)`` with ``N`` rounded to nearest (half up), at least 2."""
    nt_vars = star_cost(N_star, k, h)
    N = max(2, int(math.floor(nt_vars / (k + 1) + 0.5)))
    return nt_vars, N, N * (k + 1)


@dataclass(frozen=True)
class RowResult:
    row: int
    params: BenchmarkRow
    Nt_vars: int
    Nt_jansen: int
    r_vars: float
    r_jansen: float
    flag_vars: bool
    flag_jansen: bool
    seconds: float = 0.0
    error: str = ""

    def as_record(self) -> dict:
        rec = {"row": self.row, **asdict(self.params)}
        rec.update(
            Nt_vars=self.Nt_vars,
            Nt_jansen=self.Nt_jansen,
            r_vars=self.r_vars,
            r_jansen=self.r_jansen,
            flag_vars=int(self.flag_vars),
            flag_jansen=int(self.flag_jansen),
            seconds=round(self.seconds, 4),
        )
        return rec


def _seed(master_seed: int, eps: int, stream: int) -> list[int]:
    return [int(master_seed), int(eps), stream]


def _mapper(spec, dist):
    return lambda U: spec.bank(dist.transform(U))


def _finite(*arrays) -> bool:
    return all(np.all(np.isfinite(a)) for a in arrays)


@lru_cache(maxsize=16384)
def reference_truth(k: int, eps: int, k2: float, k3: float, phi: int, master_seed: int = 0, n: int = TRUTH_N):
    """Jansen total-order indices from an ``n``-row scrambled Sobol' design.

    Returns ``None`` when the outputs are non-finite or have zero variance.
    """
    spec = metafunction_build(k, eps, k2, k3)
    dist = resolve_phi(phi, k, seed=eps)
    base = sobol_points(n, 2 * k, scramble_seed=_seed(master_seed, eps, 3))
    fd = build_ab(base).transformed(_mapper(spec, dist))
    yA, yAB = kernels.combine_ab(fd.A, fd.B, *spec.terms())
    if not _finite(yA, yAB):
        return None
    est = jansen_total(yA, yAB)
    if est.degenerate:
        return None
    est.values.setflags(write=False)
    return est.values


@lru_cache(maxsize=16384)
def _estimates(N_star, h, k, eps, tau, phi, k2, k3, master_seed):
    spec = metafunction_build(k, eps, k2, k3)
    dist = resolve_phi(phi, k, seed=eps)
    fmap = _mapper(spec, dist)

    centers = sample_points(N_star, k, tau, _seed(master_seed, eps, 1))
    fs = build_stars(centers, h).transformed(fmap)
    y_star = kernels.combine_star(fs.centers, fs.grids, fs.center_pos, *spec.terms())
    if _finite(y_star):
        est_v = vars_to(fs, y_star)
        t_vars = None if est_v.degenerate else est_v.values
    else:
        t_vars = None

    _, N, _ = matched_budget(N_star, h, k)
    base = sample_points(N, 2 * k, tau, _seed(master_seed, eps, 2))
    fd = build_ab(base).transformed(fmap)
    yA, yAB = kernels.combine_ab(fd.A, fd.B, *spec.terms())
    if _finite(yA, yAB):
        est_j = jansen_total(yA, yAB)
        t_jansen = None if est_j.degenerate else est_j.values
    else:
        t_jansen = None
    return t_vars, t_jansen


def _score(delta, T, T_hat):
    if T is None or T_hat is None:
        return float("nan")
    return performance_r(delta, T, T_hat)


def run_row(row: BenchmarkRow, row_id: int = 0, master_seed: int = 0, truth_n: int = TRUTH_N) -> RowResult:
    """Run one benchmark row: build the metafunction, both designs and the
    reference truth, then score VARS-TO and Jansen with the row's measure."""
    t0 = time.perf_counter()
    nt_vars, _, nt_jansen = matched_budget(row.N_star, row.h, row.k)
    T = reference_truth(row.k, row.eps, row.k2, row.k3, row.phi, master_seed, truth_n)
    t_vars, t_jansen = _estimates(
        row.N_star, row.h, row.k, row.eps, row.tau, row.phi, row.k2, row.k3, master_seed
    )
    r_vars = _score(row.delta, T, t_vars)
    r_jansen = _score(row.delta, T, t_jansen)
    return RowResult(
        row_id,
        row,
        nt_vars,
        nt_jansen,
        r_vars,
        r_jansen,
        bool(np.isnan(r_vars)),
        bool(np.isnan(r_jansen)),
        time.perf_counter() - t0,
    )


def _run_safe(args) -> RowResult:
    row_id, row, master_seed, truth_n = args
    try:
        return run_row(row, row_id, master_seed, truth_n)
    except Exception as exc:  # recorded per row; the sweep goes on
        nt_vars, _, nt_jansen = matched_budget(row.N_star, row.h, row.k)
        log.warning("row %d failed: %s", row_id, exc)
        return RowResult(
            row_id, row, nt_vars, nt_jansen, float("nan"), float("nan"), True, True,
            error="".join(traceback.format_exception_only(type(exc), exc)).strip(),
        )


def format_record(rec: dict) -> dict:
    return {k: (repr(v) if isinstance(v, float) else v) for k, v in rec.items()}


def run_all(
    rows,
    workers: int = 1,
    master_seed: int = 0,
    truth_n: int = TRUTH_N,
    out_path=None,
    progress_every: int = 0,
) -> list[RowResult]:
    """Run every row, optionally in ``workers`` processes.

    Results come back in row order regardless of worker count. When
    ``out_path`` is given, CSV lines are flushed as results arrive.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to run")
    jobs = [(i, r, master_seed, truth_n) for i, r in enumerate(rows)]
    fh = writer = None
    if out_path is not None:
        fh = open(out_path, "w", newline="")
        writer = csv.DictWriter(fh, fieldnames=RESULT_COLUMNS)
        writer.writeheader()
    results: list[RowResult] = []
    t0 = time.perf_counter()
    try:
        if workers <= 1:
            stream = map(_run_safe, jobs)
            pool = None
        else:
            pool = ProcessPoolExecutor(max_workers=workers)
            stream = pool.map(_run_safe, jobs, chunksize=max(1, len(jobs) // (8 * workers)))
        for res in stream:
            results.append(res)
            if writer is not None:
                writer.writerow(format_record(res.as_record()))
                fh.flush()
            if progress_every and len(results) % progress_every == 0:
                log.info("%d/%d rows (%.1fs)", len(results), len(jobs), time.perf_counter() - t0)
        if pool is not None:
            pool.shutdown()
    finally:
        if fh is not None:
            fh.close()
    return results


def write_results(results, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=RESULT_COLUMNS)
        w.writeheader()
        for res in results:
            w.writerow(format_record(res.as_record()))


@dataclass(frozen=True)
class MetaResult:
    parameters: tuple[str, ...]
    Si: np.ndarray
    Si_lo: np.ndarray
    Si_hi: np.ndarray
    Ti: np.ndarray
    Ti_lo: np.ndarray
    Ti_hi: np.ndarray
    n_base: int
    n_runs: int
    n_dropped: int

    def records(self) -> list[dict]:
        return [
            {
                "parameter": p,
                "Si": float(self.Si[j]),
                "Si_lo": float(self.Si_lo[j]),
                "Si_hi": float(self.Si_hi[j]),
                "Ti": float(self.Ti[j]),
                "Ti_lo": float(self.Ti_lo[j]),
                "Ti_hi": float(self.Ti_hi[j]),
            }
            for j, p in enumerate(self.parameters)
        ]


def meta_design(n_base: int, master_seed: int = 0, h_levels=H_LEVELS_TABLE):
    """Benchmark rows for A, B and the nine A_B^(i) blocks, in that order."""
    if n_base < 2 or n_base & (n_base - 1):
        raise ValueError("n_base must be a power of two >= 2")
    design = build_ab(sobol_points(n_base, 18, scramble_seed=master_seed))
    blocks = [design.A, design.B] + design.AB
    return [r for blk in blocks for r in rows_from_unit(blk, h_levels)]


def meta_analysis(
    n_base: int,
    master_seed: int = 0,
    workers: int = 1,
    truth_n: int = TRUTH_N,
    R: int = 500,
    level: float = 0.95,
    target: str = "vars",
    h_levels=H_LEVELS_TABLE,
    results_path=None,
    progress_every: int = 0,
) -> MetaResult:
    """Sobol' indices of the nine benchmark parameters on ``r_vars`` (or ``r_jansen``).

    Row groups in which any design point is flagged are dropped listwise
    before estimation.
    """
    rows = meta_design(n_base, master_seed, h_levels)
    results = run_all(rows, workers, master_seed, truth_n, results_path, progress_every)
    attr = {"vars": "r_vars", "jansen": "r_jansen"}[target]
    y = np.array([getattr(r, attr) for r in results]).reshape(11, n_base)
    keep = np.all(np.isfinite(y), axis=0)
    yA, yB, yAB = y[0, keep], y[1, keep], y[2:, keep]
    V = pop_var(yA)
    tot = jansen_total(yA, yAB)
    first = jansen_first(yB, yAB, V)
    ci = bootstrap_percentile(yA, yB, yAB, R=R, level=level, seed=master_seed)
    return MetaResult(
        PARAMS,
        first.values,
        ci.first_lo,
        ci.first_hi,
        tot.values,
        ci.total_lo,
        ci.total_hi,
        n_base,
        len(rows),
        int((~keep).sum()),
    )


def write_meta(meta: MetaResult, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=META_COLUMNS)
        w.writeheader()
        for rec in meta.records():
            w.writerow(format_record(rec))


def read_results(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


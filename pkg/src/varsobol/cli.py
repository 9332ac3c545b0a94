"""Command-line entry point.

Commands: ``estimate``, ``benchmark``, ``meta`` and ``replicate``. Every
command writes tidy CSV plus the effective ``config.ini`` into ``--out``.
Settings come from defaults, then ``--config`` (INI, section ``[run]``),
then explicit flags. Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import logging
import sys
from dataclasses import asdict, dataclass, fields
from io import StringIO
from pathlib import Path

import numpy as np

from . import bench, replicate
from .distributions import resolve_phi
from .models import SIXDIM, Model, liu_build, metafunction_build, sixdim_analytic
from .sampling import DesignError, build_ab, build_stars, sample_points
from .sobol_estimators import bootstrap_percentile, jansen_total, single_trajectory_first
from .vars_estimators import CoverageError, all_variograms, ivars, vars_to

log = logging.getLogger("varsobol")

MODELS = ("sixdim", "liu", "metafunction")
METHODS = ("jansen", "vars-to", "single-trajectory", "ivars")
FIGURES = ("fig4a", "fig4b", "fig5", "fig6")
ESTIMATE_COLUMNS = ("method", "input", "value", "Nt", "ci_lo", "ci_hi")
VARIOGRAM_COLUMNS = ("input", "lag", "gamma", "cov", "pairs")


@dataclass
class RunConfig:
    """All settings of a run. Each field's default is the documented default."""

    command: str = "estimate"
    model: str = "sixdim"
    method: str = "jansen"
    n: int = 1024
    n_star: int = 50
    h: float = 0.1
    grid: int = 10000
    ivars_h: float = 0.5
    k: int = 10
    eps: int = 1
    k2: float = 0.5
    k3: float = 0.2
    phi: int = 1
    tau: int = 2
    delta: int = 1
    rows: int = 128
    base: int = 1024
    h_set: str = "table"
    truth_n: int = bench.TRUTH_N
    bootstrap: int = 0
    target: str = "vars"
    figure: str = "fig4a"
    replicates: int = 0
    seed: int = 0
    out: str = "out"
    workers: int = 1


_TYPES = {f.name: f.type for f in fields(RunConfig)}
_CASTS = {"int": int, "float": float, "str": str}


class UsageError(Exception):
    pass


def config_to_ini(cfg: RunConfig) -> str:
    cp = configparser.ConfigParser()
    cp["run"] = {k: repr(v) if isinstance(v, float) else str(v) for k, v in asdict(cfg).items()}
    buf = StringIO()
    cp.write(buf)
    return buf.getvalue()


def config_from_ini(text: str) -> dict:
    cp = configparser.ConfigParser()
    cp.read_string(text)
    if "run" not in cp:
        raise UsageError("config file needs a [run] section")
    out = {}
    for key, raw in cp["run"].items():
        if key not in _TYPES:
            raise UsageError(f"unknown config key {key!r}")
        try:
            out[key] = _CASTS[_TYPES[key]](raw)
        except ValueError as exc:
            raise UsageError(f"bad value for {key}: {raw!r}") from exc
    return out


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global")
    g.add_argument("--seed", type=int)
    g.add_argument("--out")
    g.add_argument("--workers", type=int)
    g.add_argument("--config", help="INI file with a [run] section; flags override it")

    p = argparse.ArgumentParser(prog="varsobol", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("estimate", parents=[common], help="indices of a built-in model")
    e.add_argument("--model", choices=MODELS, help="required unless set in --config")
    e.add_argument("--method", choices=METHODS, help="required unless set in --config")
    e.add_argument("--n", type=int, help="rows of A and B (jansen)")
    e.add_argument("--n-star", dest="n_star", type=int, help="star centers (vars-to, ivars)")
    e.add_argument("--h", type=float, help="star grid spacing")
    e.add_argument("--grid", type=int, help="trajectory points (single-trajectory)")
    e.add_argument("--ivars-h", dest="ivars_h", type=float, help="IVARS upper lag")
    e.add_argument("--bootstrap", type=int, help="bootstrap replicates for jansen CIs (0 = none)")
    for name, typ in (("k", int), ("eps", int), ("k2", float), ("k3", float), ("phi", int), ("tau", int)):
        e.add_argument(f"--{name}", type=typ, help="metafunction / sampler setting")

    b = sub.add_parser("benchmark", parents=[common], help="randomized VARS-TO vs Jansen sweep")
    b.add_argument("--rows", type=int)
    b.add_argument("--h-set", dest="h_set", choices=("table", "sm"))
    b.add_argument("--truth-n", dest="truth_n", type=int)

    m = sub.add_parser("meta", parents=[common], help="sensitivity of r to the benchmark parameters")
    m.add_argument("--base", type=int)
    m.add_argument("--target", choices=("vars", "jansen"))
    m.add_argument("--h-set", dest="h_set", choices=("table", "sm"))
    m.add_argument("--truth-n", dest="truth_n", type=int)
    m.add_argument("--bootstrap", type=int)

    r = sub.add_parser("replicate", parents=[common], help="plot-ready tables for a figure")
    r.add_argument("figure", choices=FIGURES)
    r.add_argument("--replicates", type=int, help="default 500 (fig4a) or 50 (fig4b)")
    r.add_argument("--rows", type=int, help="benchmark rows (fig5, fig6)")
    r.add_argument("--truth-n", dest="truth_n", type=int)
    return p


def resolve_config(argv) -> RunConfig:
    ns = _parser().parse_args(argv)
    values = asdict(RunConfig())
    from_file = {}
    if ns.config:
        try:
            text = Path(ns.config).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        from_file = config_from_ini(text)
        values.update(from_file)
    for key, val in vars(ns).items():
        if key in values and val is not None:
            values[key] = val
    if ns.command == "estimate":
        missing = [f"--{f}" for f in ("model", "method") if getattr(ns, f) is None and f not in from_file]
        if missing:
            raise UsageError(f"the following arguments are required: {', '.join(missing)}")
    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    positive = {"n": cfg.n, "n_star": cfg.n_star, "rows": cfg.rows, "base": cfg.base, "workers": cfg.workers}
    for name, val in positive.items():
        if val < 1:
            raise UsageError(f"--{name.replace('_', '-')} must be >= 1, got {val}")
    if cfg.command == "estimate":
        if cfg.model not in MODELS or cfg.method not in METHODS:
            raise UsageError(f"unknown model/method {cfg.model}/{cfg.method}")
        if cfg.method == "single-trajectory" and cfg.model != "sixdim":
            raise UsageError("single-trajectory needs an additive model (sixdim)")
        if cfg.method == "single-trajectory" and cfg.grid < 8:
            raise UsageError("--grid must be at least 8")
    if cfg.command == "replicate" and cfg.figure not in FIGURES:
        raise UsageError(f"unknown figure {cfg.figure}")


def _write_csv(path: Path, columns, records) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=columns)
        w.writeheader()
        for rec in records:
            w.writerow(bench.format_record(rec))


def _model(cfg: RunConfig):
    if cfg.model == "sixdim":
        return SIXDIM
    if cfg.model == "liu":
        return liu_build(cfg.seed)
    spec = metafunction_build(cfg.k, cfg.eps, cfg.k2, cfg.k3)
    dist = resolve_phi(cfg.phi, cfg.k, seed=cfg.eps)
    return Model(cfg.k, lambda X: spec(dist.transform(X)), "metafunction")


def cmd_estimate(cfg: RunConfig, out: Path) -> None:
    model = _model(cfg)
    k = model.k
    rows, curves = [], None
    if cfg.method == "jansen":
        d = build_ab(sample_points(cfg.n, 2 * k, cfg.tau, cfg.seed))
        yA = model(d.A)
        yAB = np.array([model(d.ab(i)) for i in range(k)])
        est = jansen_total(yA, yAB)
        lo = hi = np.full(k, np.nan)
        if cfg.bootstrap:
            ci = bootstrap_percentile(yA, model(d.B), yAB, R=cfg.bootstrap, seed=cfg.seed)
            lo, hi = ci.total_lo, ci.total_hi
        rows = [("jansen_total", i, est.values[i], est.n_evals, lo[i], hi[i]) for i in range(k)]
    elif cfg.method == "single-trajectory":
        V = sixdim_analytic().total_variance
        anchor = np.full(k, 0.5)
        vals = [single_trajectory_first(model, i, anchor, grid_n=cfg.grid, V=V) for i in range(k)]
        rows = [("single_trajectory", i, vals[i], k * cfg.grid, np.nan, np.nan) for i in range(k)]
    else:
        design = build_stars(sample_points(cfg.n_star, k, cfg.tau, cfg.seed), cfg.h)
        y = model(design.points)
        curves = all_variograms(design, y)
        if cfg.method == "vars-to":
            est = vars_to(design, y)
            rows = [("vars_to", i, est.values[i], design.n_points, np.nan, np.nan) for i in range(k)]
        else:
            vals = [ivars(c, cfg.ivars_h) for c in curves]
            label = f"ivars_{round(cfg.ivars_h * 100)}"
            rows = [(label, i, vals[i], design.n_points, np.nan, np.nan) for i in range(k)]
    _write_csv(out / "estimates.csv", ESTIMATE_COLUMNS, [dict(zip(ESTIMATE_COLUMNS, map(_plain, r))) for r in rows])
    if curves is not None:
        recs = [
            {"input": c.input, "lag": float(c.lags[j]), "gamma": float(c.gamma[j]), "cov": float(c.cov[j]), "pairs": int(c.pairs[j])}
            for c in curves
            for j in range(len(c.lags))
        ]
        _write_csv(out / "variogram.csv", VARIOGRAM_COLUMNS, recs)
    for r in rows:
        print(f"{r[0]}[{r[1]}] = {r[2]:.6g}")


def _plain(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def _h_levels(cfg: RunConfig):
    return bench.H_LEVELS_SM if cfg.h_set == "sm" else bench.H_LEVELS_TABLE


def _run_benchmark(cfg: RunConfig, out: Path):
    rows = bench.sample_rows(cfg.rows, cfg.seed, _h_levels(cfg))
    results = bench.run_all(rows, cfg.workers, cfg.seed, cfg.truth_n, out / "results.csv")
    failed = [r for r in results if r.flag_vars or r.flag_jansen]
    if failed:
        log.warning("%d of %d rows flagged", len(failed), len(results))
    if all(r.error for r in results):
        raise RuntimeError("every benchmark row failed")
    return results


def cmd_benchmark(cfg: RunConfig, out: Path) -> None:
    results = _run_benchmark(cfg, out)
    for attr in ("r_vars", "r_jansen"):
        r = np.array([getattr(x, attr) for x in results])
        print(f"median {attr} = {np.nanmedian(r):.4f}")


def cmd_meta(cfg: RunConfig, out: Path) -> None:
    meta = bench.meta_analysis(
        cfg.base,
        cfg.seed,
        cfg.workers,
        cfg.truth_n,
        R=cfg.bootstrap or 500,
        target=cfg.target,
        h_levels=_h_levels(cfg),
        results_path=out / "results.csv",
    )
    bench.write_meta(meta, out / "meta.csv")
    for rec in meta.records():
        print(f"{rec['parameter']:>7}  S={rec['Si']:.4f}  T={rec['Ti']:.4f}")


def cmd_replicate(cfg: RunConfig, out: Path) -> None:
    fig = cfg.figure
    if fig == "fig4a":
        recs = replicate.fig4a(replicates=cfg.replicates or 500, seed=cfg.seed)
        cols = replicate.FIG4A_COLUMNS
    elif fig == "fig4b":
        recs = replicate.fig4b(replicates=cfg.replicates or 50, seed=cfg.seed)
        cols = replicate.FIG4B_COLUMNS
    else:
        results = _run_benchmark(cfg, out)
        if fig == "fig5":
            recs, cols = replicate.fig5(results), replicate.FIG5_COLUMNS
        else:
            recs, cols = replicate.fig6(results), replicate.FIG6_COLUMNS
    _write_csv(out / f"{fig}.csv", cols, recs)
    print(f"wrote {out / (fig + '.csv')} ({len(recs)} rows)")


COMMANDS = {"estimate": cmd_estimate, "benchmark": cmd_benchmark, "meta": cmd_meta, "replicate": cmd_replicate}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(argv)
    except UsageError as exc:
        _parser().print_usage(sys.stderr)
        print(f"varsobol: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.ini").write_text(config_to_ini(cfg))
        COMMANDS[cfg.command](cfg, out)
    except (CoverageError, DesignError, ValueError, RuntimeError, OSError) as exc:
        print(f"varsobol: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

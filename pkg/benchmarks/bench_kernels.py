"""Time the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from varsobol import _fallback, kernels
from varsobol.models import metafunction_build
from varsobol.sampling import build_stars, sobol_points

try:
    from varsobol import _kernels
except ImportError:
    _kernels = None


def cases():
    k = 50
    spec = metafunction_build(k, 7, 0.8, 0.6)
    terms = spec.terms()
    X = np.asarray(sobol_points(4096, k))
    F = spec.bank(X)
    FB = spec.bank(np.asarray(sobol_points(4096, 2 * k))[:, k:])
    stars = build_stars(np.asarray(sobol_points(50, k)), 0.05).transformed(spec.bank)
    y = np.random.default_rng(0).random(stars.n_points)
    sections = stars.sections.reshape(-1, stars.m)
    return {
        "bank_eval 4096x50": lambda impl: kernels.bank_eval(X, spec.ids, impl=impl),
        "combine 4096x50": lambda impl: kernels.combine(F, *terms, impl=impl),
        "combine_ab 4096x50": lambda impl: kernels.combine_ab(F, FB, *terms, impl=impl),
        "combine_star 50 stars h=0.05": lambda impl: kernels.combine_star(
            stars.centers, stars.grids, stars.center_pos, *terms, impl=impl
        ),
        "section_stats 2500 sections": lambda impl: kernels.section_stats(y, sections, 10, impl=impl),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'kernel':<32}{'python ms':>12}{'compiled ms':>14}{'speedup':>10}")
    for name, fn in cases().items():
        t_py = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat)) * 1e3
        if _kernels is None:
            print(f"{name:<32}{t_py:>12.2f}{'-':>14}{'-':>10}")
            continue
        t_c = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<32}{t_py:>12.2f}{t_c:>14.2f}{t_py / t_c:>9.1f}x")


if __name__ == "__main__":
    main()

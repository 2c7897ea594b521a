"""Compare the numba and numpy backends of the mod-P grid kernels.

Usage: python3 benchmarks/bench_kernels.py [--vars 4] [--grid 7] [--repeat 3]

The inputs are random sparse polynomial systems over a grid of candidate
values, the same shape the scan and brute-force searches feed in. Both
backends must return the same mask; the script exits 1 if they do not.
"""

import argparse
import sys
import time

import numpy as np

from funceq import kernels


def random_system(rng, n_vars, n_polys, terms_per_poly, max_exp):
    n_terms = n_polys * terms_per_poly
    coef = rng.integers(1, kernels.P, size=n_terms, dtype=np.int64)
    owner = np.repeat(np.arange(n_polys, dtype=np.int64), terms_per_poly)
    exps = rng.integers(0, max_exp + 1, size=(n_terms, n_vars), dtype=np.int64)
    return coef, owner, exps


def random_matrix(rng, n_vars, n_rows, n_cols, density, max_exp):
    cells = [(i, j) for i in range(n_rows) for j in range(n_cols) if rng.random() < density]
    t_row = np.array([c[0] for c in cells for _ in range(2)], dtype=np.int64)
    t_col = np.array([c[1] for c in cells for _ in range(2)], dtype=np.int64)
    coef = rng.integers(1, kernels.P, size=len(t_row), dtype=np.int64)
    exps = rng.integers(0, max_exp + 1, size=(len(t_row), n_vars), dtype=np.int64)
    return t_row, t_col, coef, exps


def grid_values(n_vars, g):
    vals = [kernels.to_mod(v) for v in range(-(g // 2), g - g // 2)]
    return [vals] * n_vars


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vars", type=int, default=4)
    ap.add_argument("--grid", type=int, default=9)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not kernels.HAVE_NUMBA:
        print("numba unavailable or FUNCEQ_DISABLE_JIT set; only the numpy backend will run")
    rng = np.random.default_rng(args.seed)
    V, g, max_exp = args.vars, args.grid, 4
    sizes = np.full(V, g, dtype=np.int64)
    powtab = kernels.power_table(grid_values(V, g), max_exp)
    points = g ** V
    backends = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])

    coef, owner, exps = random_system(rng, V, n_polys=6, terms_per_poly=8, max_exp=max_exp)
    t_row, t_col, mcoef, mexps = random_matrix(rng, V, n_rows=5, n_cols=6, density=0.5,
                                               max_exp=max_exp)
    groups = [[0, 1], [2, 3], [4, 5]]

    cases = {
        "poly_zero_mask": lambda b: kernels.poly_zero_mask(
            coef, owner, exps, 6, powtab, sizes, backend=b),
        "linear_feasible_mask": lambda b: kernels.linear_feasible_mask(
            t_row, t_col, mcoef, mexps, 5, 6, powtab, sizes, groups, backend=b),
    }

    if kernels.HAVE_NUMBA:
        # compile outside the timed region
        for fn in cases.values():
            fn("numba")

    ok = True
    print(f"grid {g}^{V} = {points} points, best of {args.repeat}")
    print(f"{'kernel':<22}{'backend':<8}{'seconds':>10}{'Mpts/s':>10}{'hits':>8}")
    for name, fn in cases.items():
        masks = {}
        for b in backends:
            secs, mask = best_of(lambda: fn(b), args.repeat)
            masks[b] = mask
            print(f"{name:<22}{b:<8}{secs:>10.4f}{points / secs / 1e6:>10.2f}{int(mask.sum()):>8}")
        if len(masks) == 2 and not np.array_equal(masks["numpy"], masks["numba"]):
            print(f"  MISMATCH between backends on {name}")
            ok = False
        if len(masks) == 2:
            print(f"  speedup numba/numpy: x{best_of(lambda: fn('numpy'), 1)[0] / best_of(lambda: fn('numba'), 1)[0]:.1f}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

import os
import subprocess
import sys
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from funceq import kernels
from funceq.search import (compile_polys, grid_zero_search, integer_grid, linear_grid_search,
                           rational_grid)
from funceq.sympoly import UnknownPoly

U = UnknownPoly.var
needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba disabled")


def random_case(seed, V=3, g=5, n_polys=3, terms=4):
    rng = np.random.default_rng(seed)
    n = n_polys * terms
    coef = rng.integers(1, kernels.P, size=n, dtype=np.int64)
    owner = np.repeat(np.arange(n_polys, dtype=np.int64), terms)
    exps = rng.integers(0, 4, size=(n, V), dtype=np.int64)
    vals = [[kernels.to_mod(v) for v in range(-(g // 2), g - g // 2)]] * V
    return coef, owner, exps, n_polys, kernels.power_table(vals, 3), np.full(V, g, dtype=np.int64)


def test_to_mod():
    assert kernels.to_mod(Fraction(1, 2)) * 2 % kernels.P == 1
    assert kernels.to_mod(-1) == kernels.P - 1


def test_reference_loop_agrees_with_numpy():
    for seed in range(5):
        args = random_case(seed)
        ref = np.zeros(125, dtype=np.bool_)
        kernels._zero_mask_py(*args, 0, 125, ref)
        assert np.array_equal(ref, kernels.poly_zero_mask(*args, backend="numpy"))


@needs_numba
@pytest.mark.parametrize("seed", range(6))
def test_zero_mask_backends_agree(seed):
    args = random_case(seed, V=4, g=7)
    a = kernels.poly_zero_mask(*args, backend="numpy")
    b = kernels.poly_zero_mask(*args, backend="numba")
    assert np.array_equal(a, b)
    # chunked evaluation covers the same points
    c = np.concatenate([kernels.poly_zero_mask(*args, start=s, count=min(1000, 2401 - s),
                                               backend="numba") for s in range(0, 2401, 1000)])
    assert np.array_equal(a, c)


def _linear_case(seed):
    rng = np.random.default_rng(seed)
    V, g = 2, 7
    cells = [(i, j) for i in range(3) for j in range(4) if rng.random() < 0.6]
    t_row = np.array([i for i, _ in cells], dtype=np.int64)
    t_col = np.array([j for _, j in cells], dtype=np.int64)
    coef = rng.integers(1, 4, size=len(cells), dtype=np.int64)
    exps = rng.integers(0, 3, size=(len(cells), V), dtype=np.int64)
    vals = [[kernels.to_mod(v) for v in range(-3, 4)]] * V
    return (t_row, t_col, coef, exps, 3, 4, kernels.power_table(vals, 2),
            np.full(V, g, dtype=np.int64), [[0, 1], [2, 3]])


@pytest.mark.parametrize("seed", range(6))
def test_linear_mask_backends_agree(seed):
    args = _linear_case(seed)
    a = kernels.linear_feasible_mask(*args, backend="numpy")
    if kernels.HAVE_NUMBA:
        b = kernels.linear_feasible_mask(*args, backend="numba")
        assert np.array_equal(a, b)
    ref = np.zeros(49, dtype=np.bool_)
    t_row, t_col, coef, exps, nr, nc, powtab, sizes, groups = args
    ptr = np.array([0, 2, 4], dtype=np.int64)
    cols = np.array([0, 1, 2, 3], dtype=np.int64)
    kernels._linear_mask_py(t_row, t_col, coef, exps, nr, nc, powtab, sizes, ptr, cols, 0, 49, ref)
    assert np.array_equal(a, ref)


def test_unknown_backend():
    args = random_case(0)
    with pytest.raises(ValueError):
        kernels.poly_zero_mask(*args, backend="cuda")


def test_disable_flag_selects_numpy():
    env = dict(os.environ, FUNCEQ_DISABLE_JIT="1")
    out = subprocess.run([sys.executable, "-c",
                          "from funceq import kernels; print(kernels.HAVE_NUMBA, kernels.default_backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "numpy"]


# exact searches

def test_grid_search_matches_naive():
    a, b, c = U("a"), U("b"), U("c")
    polys = [a * b - 2, b + c, a * c * c - UnknownPoly.const(2) * a]
    variables = ["a", "b", "c"]
    vals = [integer_grid(3)] * 3
    res = grid_zero_search(polys, variables, vals)
    naive = []
    for pt in product(*vals):
        assign = dict(zip(variables, pt))
        if all(p.evaluate(assign) == 0 for p in polys):
            naive.append(assign)
    assert res.solutions == naive
    assert res.exhausted and res.points == 7 ** 3
    assert res.candidates >= len(naive)


def test_grid_search_numpy_and_numba_same_solutions():
    a, b = U("a"), U("b")
    polys = [a ** 2 - b * 2]
    vals = [rational_grid(3)] * 2
    r1 = grid_zero_search(polys, ["a", "b"], vals, backend="numpy")
    if kernels.HAVE_NUMBA:
        r2 = grid_zero_search(polys, ["a", "b"], vals, backend="numba")
        assert r1.solutions == r2.solutions
    assert {"a": Fraction(2), "b": Fraction(2)} in r1.solutions


def test_rational_grid_contents():
    g = rational_grid(2)
    assert g[0] == 0
    assert set(g) == {Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
                      Fraction(1, 2), Fraction(-1, 2)}


def test_compile_shapes():
    coef, owner, exps, maxdeg = compile_polys([U("a") * U("b") ** 3 + 1], ["a", "b"])
    assert coef.shape == (2,) and exps.shape == (2, 2) and maxdeg == 3


def test_linear_grid_search_witness_and_exhaustion():
    # y = s x and (s^2 - 4) y = 0 with x, y nonzero forces s = +-2
    s, x, y = U("s"), U("x"), U("y")
    res = linear_grid_search([s * x - y, (s * s - 4) * y], ["x", "y"], [[0], [1]],
                             ["s"], [integer_grid(3)])
    assert res.witness is not None and res.witness["s"] in (2, -2)
    assert res.witness["y"] == res.witness["s"] * res.witness["x"] != 0
    none = linear_grid_search([s * x - y, y], ["x", "y"], [[0], [1]], ["s"], [integer_grid(3)])
    assert none.witness is None and none.exhausted

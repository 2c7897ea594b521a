"""Grid-search kernels, modulo the prime 2^31 - 1.

Two hot loops of the search code live here, each with a numba version and a
vectorized numpy version:

* ``poly_zero_mask``: evaluate a system of integer polynomials at every point
  of a Cartesian grid and flag the common zeros.
* ``linear_feasible_mask``: for every grid point of the parameters mu, build
  the matrix A(mu) of a homogeneous linear system in the remaining unknowns,
  row-reduce it and decide whether some kernel vector has every required
  coordinate group not identically zero.

Everything is done modulo P so products fit in int64.  Points are candidates
only: callers confirm each hit in exact rational arithmetic.  A true solution
can be missed only if P divides one of the relevant integer minors.

Set FUNCEQ_DISABLE_JIT=1 to force the numpy path.
"""

from __future__ import annotations

import os
from fractions import Fraction

import numpy as np

P = 2147483647

_DISABLED = os.environ.get("FUNCEQ_DISABLE_JIT", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLED:
        raise ImportError("jit disabled by FUNCEQ_DISABLE_JIT")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    njit = None
    HAVE_NUMBA = False


def default_backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def to_mod(x) -> int:
    """Residue of a rational (denominator prime to P) modulo P."""
    x = Fraction(x)
    num = x.numerator % P
    if x.denominator == 1:
        return num
    return num * pow(x.denominator % P, P - 2, P) % P


def power_table(values, maxdeg: int) -> np.ndarray:
    """values: list (per variable) of lists of residues -> (V, Gmax, maxdeg+1)."""
    V = len(values)
    gmax = max((len(v) for v in values), default=1)
    tab = np.zeros((V, max(gmax, 1), maxdeg + 1), dtype=np.int64)
    for v, vals in enumerate(values):
        for i, a in enumerate(vals):
            acc = 1
            for e in range(maxdeg + 1):
                tab[v, i, e] = acc
                acc = acc * a % P
    return tab


# --------------------------------------------------------------------------
# kernel 1: common zeros of a polynomial system

def _zero_mask_py(coef, poly_of_term, exps, n_polys, powtab, sizes, start, count, out):
    V = exps.shape[1]
    T = coef.shape[0]
    digits = np.empty(V, dtype=np.int64)
    acc = np.empty(n_polys, dtype=np.int64)
    for idx in range(count):
        rem = start + idx
        for v in range(V - 1, -1, -1):
            digits[v] = rem % sizes[v]
            rem //= sizes[v]
        for i in range(n_polys):
            acc[i] = 0
        for t in range(T):
            val = coef[t]
            for v in range(V):
                e = exps[t, v]
                if e:
                    val = (val * powtab[v, digits[v], e]) % P
            i = poly_of_term[t]
            acc[i] = (acc[i] + val) % P
        ok = True
        for i in range(n_polys):
            if acc[i] != 0:
                ok = False
                break
        out[idx] = ok


def _zero_mask_numpy(coef, poly_of_term, exps, n_polys, powtab, sizes, start, count, out,
                     chunk=1 << 16):
    V = exps.shape[1]
    for c0 in range(0, count, chunk):
        c1 = min(count, c0 + chunk)
        rem = np.arange(start + c0, start + c1, dtype=np.int64)
        digits = np.empty((c1 - c0, V), dtype=np.int64)
        for v in range(V - 1, -1, -1):
            digits[:, v] = rem % sizes[v]
            rem //= sizes[v]
        acc = np.zeros((n_polys, c1 - c0), dtype=np.int64)
        for t in range(coef.shape[0]):
            val = np.full(c1 - c0, coef[t], dtype=np.int64)
            for v in range(V):
                e = exps[t, v]
                if e:
                    val = val * powtab[v, digits[:, v], e] % P
            i = poly_of_term[t]
            acc[i] = (acc[i] + val) % P
        out[c0:c1] = ~np.any(acc, axis=0)


# --------------------------------------------------------------------------
# kernel 2: feasibility of A(mu) lam = 0 with required coordinate groups

def _modinv(a):
    # Fermat inverse; a != 0 mod P
    result = 1
    base = a % P
    e = P - 2
    while e > 0:
        if e & 1:
            result = result * base % P
        base = base * base % P
        e >>= 1
    return result


def _linear_mask_py(t_row, t_col, coef, exps, n_rows, n_cols, powtab, sizes,
                    group_ptr, group_cols, start, count, out):
    V = exps.shape[1]
    T = coef.shape[0]
    digits = np.empty(V, dtype=np.int64)
    M = np.empty((n_rows, n_cols), dtype=np.int64)
    forced = np.empty(n_cols, dtype=np.bool_)
    n_groups = group_ptr.shape[0] - 1
    for idx in range(count):
        rem = start + idx
        for v in range(V - 1, -1, -1):
            digits[v] = rem % sizes[v]
            rem //= sizes[v]
        for i in range(n_rows):
            for j in range(n_cols):
                M[i, j] = 0
        for t in range(T):
            val = coef[t]
            for v in range(V):
                e = exps[t, v]
                if e:
                    val = (val * powtab[v, digits[v], e]) % P
            M[t_row[t], t_col[t]] = (M[t_row[t], t_col[t]] + val) % P
        # reduced row echelon form mod P
        r = 0
        for c in range(n_cols):
            if r == n_rows:
                break
            piv = -1
            for i in range(r, n_rows):
                if M[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(n_cols):
                    tmp = M[r, j]
                    M[r, j] = M[piv, j]
                    M[piv, j] = tmp
            inv = _modinv(M[r, c])
            for j in range(n_cols):
                M[r, j] = M[r, j] * inv % P
            for i in range(n_rows):
                if i != r and M[i, c] != 0:
                    f = M[i, c]
                    for j in range(n_cols):
                        M[i, j] = (M[i, j] - f * M[r, j]) % P
            r += 1
        for j in range(n_cols):
            forced[j] = False
        for i in range(r):
            nz = 0
            col = -1
            for j in range(n_cols):
                if M[i, j] != 0:
                    nz += 1
                    if col < 0:
                        col = j
            if nz == 1:
                forced[col] = True
        ok = True
        for g in range(n_groups):
            any_free = False
            for k in range(group_ptr[g], group_ptr[g + 1]):
                if not forced[group_cols[k]]:
                    any_free = True
                    break
            if not any_free:
                ok = False
                break
        out[idx] = ok


def _modinv_vec(a):
    result = np.ones_like(a)
    base = a % P
    e = P - 2
    while e > 0:
        if e & 1:
            result = result * base % P
        base = base * base % P
        e >>= 1
    return result


def _linear_mask_numpy(t_row, t_col, coef, exps, n_rows, n_cols, powtab, sizes,
                       group_ptr, group_cols, start, count, out, chunk=1 << 12):
    V = exps.shape[1]
    rows_idx = np.arange(n_rows)
    for c0 in range(0, count, chunk):
        c1 = min(count, c0 + chunk)
        B = c1 - c0
        rem = np.arange(start + c0, start + c1, dtype=np.int64)
        digits = np.empty((B, V), dtype=np.int64)
        for v in range(V - 1, -1, -1):
            digits[:, v] = rem % sizes[v]
            rem //= sizes[v]
        M = np.zeros((B, n_rows, n_cols), dtype=np.int64)
        for t in range(coef.shape[0]):
            val = np.full(B, coef[t], dtype=np.int64)
            for v in range(V):
                e = exps[t, v]
                if e:
                    val = val * powtab[v, digits[:, v], e] % P
            M[:, t_row[t], t_col[t]] = (M[:, t_row[t], t_col[t]] + val) % P
        r = np.zeros(B, dtype=np.int64)
        bidx = np.arange(B)
        for c in range(n_cols):
            cand = (M[:, :, c] != 0) & (rows_idx[None, :] >= r[:, None])
            has = cand.any(axis=1) & (r < n_rows)
            if not has.any():
                continue
            piv = np.argmax(cand, axis=1)
            rr = np.minimum(r, n_rows - 1)
            # swap rows rr and piv where has
            b = bidx[has]
            top = M[b, rr[has], :].copy()
            M[b, rr[has], :] = M[b, piv[has], :]
            M[b, piv[has], :] = top
            inv = _modinv_vec(M[b, rr[has], c])
            M[b, rr[has], :] = M[b, rr[has], :] * inv[:, None] % P
            factor = M[:, :, c].copy()
            factor[~has, :] = 0
            factor[bidx, rr] = np.where(has, 0, factor[bidx, rr])
            pivrow = M[bidx, rr, :]
            M = (M - factor[:, :, None] * pivrow[:, None, :] % P) % P
            r = r + has
        nz = M != 0
        single = (nz.sum(axis=2) == 1) & (rows_idx[None, :] < r[:, None])
        first = np.argmax(nz, axis=2)
        forced = np.zeros((B, n_cols), dtype=bool)
        bb, ii = np.nonzero(single)
        forced[bb, first[bb, ii]] = True
        ok = np.ones(B, dtype=bool)
        for g in range(group_ptr.shape[0] - 1):
            cols = group_cols[group_ptr[g]:group_ptr[g + 1]]
            ok &= (~forced[:, cols]).any(axis=1)
        out[c0:c1] = ok


if HAVE_NUMBA:
    _zero_mask_jit = njit(cache=False)(_zero_mask_py)
    _modinv = njit(cache=False)(_modinv)
    _linear_mask_jit = njit(cache=False)(_linear_mask_py)
else:
    _zero_mask_jit = None
    _linear_mask_jit = None


# --------------------------------------------------------------------------
# public wrappers

def _pick(backend):
    backend = backend or default_backend()
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but unavailable or disabled")
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def poly_zero_mask(coef, poly_of_term, exps, n_polys, powtab, sizes,
                   start=0, count=None, backend=None) -> np.ndarray:
    """Boolean mask over grid points [start, start+count) of common zeros mod P."""
    sizes = np.asarray(sizes, dtype=np.int64)
    total = int(np.prod(sizes)) if len(sizes) else 1
    if count is None:
        count = total - start
    out = np.zeros(count, dtype=np.bool_)
    args = (np.asarray(coef, dtype=np.int64), np.asarray(poly_of_term, dtype=np.int64),
            np.asarray(exps, dtype=np.int64).reshape(len(coef), len(sizes)),
            int(n_polys), powtab, sizes, int(start), int(count), out)
    if _pick(backend) == "numba":
        _zero_mask_jit(*args)
    else:
        _zero_mask_numpy(*args)
    return out


def linear_feasible_mask(t_row, t_col, coef, exps, n_rows, n_cols, powtab, sizes,
                         groups, start=0, count=None, backend=None) -> np.ndarray:
    """Mask of grid points where some kernel vector meets every column group."""
    sizes = np.asarray(sizes, dtype=np.int64)
    total = int(np.prod(sizes)) if len(sizes) else 1
    if count is None:
        count = total - start
    group_ptr = np.zeros(len(groups) + 1, dtype=np.int64)
    for i, g in enumerate(groups):
        group_ptr[i + 1] = group_ptr[i] + len(g)
    group_cols = np.array([c for g in groups for c in g], dtype=np.int64)
    out = np.zeros(count, dtype=np.bool_)
    args = (np.asarray(t_row, dtype=np.int64), np.asarray(t_col, dtype=np.int64),
            np.asarray(coef, dtype=np.int64),
            np.asarray(exps, dtype=np.int64).reshape(len(coef), len(sizes)),
            int(n_rows), int(n_cols), powtab, sizes, group_ptr, group_cols,
            int(start), int(count), out)
    if _pick(backend) == "numba":
        _linear_mask_jit(*args)
    else:
        _linear_mask_numpy(*args)
    return out


def decode_index(idx: int, sizes) -> list:
    digits = [0] * len(sizes)
    for v in range(len(sizes) - 1, -1, -1):
        digits[v] = idx % sizes[v]
        idx //= sizes[v]
    return digits

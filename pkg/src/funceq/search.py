"""Exact grid searches over rational values, with kernel prefilters."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .linalg import nullspace, rref
from .sympoly import UnknownPoly


def rational_grid(bound: int = 3, include_zero: bool = True) -> list:
    """Distinct a/b with a, b in {-bound..bound} minus 0, simplest first."""
    vals = {Fraction(a, b) for a in range(-bound, bound + 1) if a
            for b in range(1, bound + 1)}
    out = sorted(vals, key=lambda v: (max(abs(v.numerator), v.denominator),
                                      v.denominator, abs(v), v < 0))
    return ([Fraction(0)] if include_zero else []) + out


def integer_grid(bound: int = 3, include_zero: bool = True) -> list:
    out = [Fraction(0)] if include_zero else []
    for a in range(1, bound + 1):
        out += [Fraction(a), Fraction(-a)]
    return out


def compile_polys(polys: Sequence[UnknownPoly], variables: Sequence[str]):
    """Flatten polys into (coef mod P, poly index, exponent matrix, max degree)."""
    index = {v: i for i, v in enumerate(variables)}
    coef, owner, exps = [], [], []
    maxdeg = 0
    for r, poly in enumerate(polys):
        for mono, c in poly.terms.items():
            row = [0] * len(variables)
            for name, e in mono:
                row[index[name]] = e
                maxdeg = max(maxdeg, e)
            coef.append(kernels.to_mod(c))
            owner.append(r)
            exps.append(row)
    return (np.array(coef, dtype=np.int64), np.array(owner, dtype=np.int64),
            np.array(exps, dtype=np.int64).reshape(len(coef), len(variables)), maxdeg)


def _value_tables(values_per_var, maxdeg):
    residues = [[kernels.to_mod(v) for v in vals] for vals in values_per_var]
    return kernels.power_table(residues, max(maxdeg, 1))


@dataclass
class GridResult:
    solutions: list          # exact assignments (dict name -> Fraction)
    points: int              # grid points examined
    total: int               # size of the full grid
    candidates: int          # kernel hits before exact confirmation

    @property
    def exhausted(self) -> bool:
        return self.points >= self.total


def grid_zero_search(polys, variables, values_per_var, max_points=None,
                     backend=None, accept=None, first_only=False, batch=1 << 18) -> GridResult:
    """All grid points where every poly vanishes (confirmed exactly).

    ``accept`` is an optional predicate on the exact assignment applied after
    confirmation (e.g. nontriviality).
    """
    variables = list(variables)
    polys = [p for p in polys if not p.is_zero()]
    sizes = [len(v) for v in values_per_var]
    total = int(np.prod(sizes)) if sizes else 1
    limit = total if max_points is None else min(total, max_points)
    for p in polys:
        if p.is_constant():
            return GridResult([], limit, total, 0)
    if not variables:
        ok = all(p.is_zero() for p in polys)
        sol = [{}] if ok and (accept is None or accept({})) else []
        return GridResult(sol, 1, 1, int(ok))
    coef, owner, exps, maxdeg = compile_polys(polys, variables)
    powtab = _value_tables(values_per_var, maxdeg)
    sols, cands, done = [], 0, 0
    while done < limit:
        count = min(batch, limit - done)
        if polys:
            mask = kernels.poly_zero_mask(coef, owner, exps, len(polys), powtab, sizes,
                                          start=done, count=count, backend=backend)
            hits = np.nonzero(mask)[0]
        else:
            hits = np.arange(count)
        cands += len(hits)
        for h in hits:
            digits = kernels.decode_index(done + int(h), sizes)
            assign = {v: values_per_var[i][d] for i, (v, d) in enumerate(zip(variables, digits))}
            if all(p.evaluate(assign) == 0 for p in polys):
                if accept is None or accept(assign):
                    sols.append(assign)
                    if first_only:
                        return GridResult(sols, done + int(h) + 1, total, cands)
        done += count
    return GridResult(sols, done, total, cands)


# --------------------------------------------------------------------------
# linear-in-some-unknowns systems

def linear_matrix(polys, columns, params=()):
    """Decompose polys linear homogeneous in ``columns``.

    Returns entries[(row, col)] -> UnknownPoly in the remaining unknowns.
    Raises ValueError when some term is not of degree exactly 1 in columns.
    """
    colset = {c: i for i, c in enumerate(columns)}
    entries: dict = {}
    for r, poly in enumerate(polys):
        for mono, c in poly.terms.items():
            hit = [(n, e) for n, e in mono if n in colset]
            if len(hit) != 1 or hit[0][1] != 1:
                raise ValueError(f"term {mono} is not linear in the column unknowns")
            rest = tuple((n, e) for n, e in mono if n not in colset)
            key = (r, colset[hit[0][0]])
            d = entries.setdefault(key, {})
            d[rest] = d.get(rest, 0) + c
    return {k: UnknownPoly(v) for k, v in entries.items() if UnknownPoly(v)}


def evaluate_matrix(entries, n_rows, n_cols, assignment):
    M = [[Fraction(0)] * n_cols for _ in range(n_rows)]
    for (r, c), poly in entries.items():
        M[r][c] = Fraction(poly.evaluate(assignment))
    return M


def forced_zero_columns(M, n_cols):
    """Columns that vanish on the whole kernel of M (exact)."""
    if not M:
        return set()
    R, pivots = rref(M)
    forced = set()
    for i, pc in enumerate(pivots):
        if all(R[i][j] == 0 for j in range(n_cols) if j != pc):
            forced.add(pc)
    return forced


def kernel_vector(M, n_cols, groups):
    """A kernel vector meeting every column group, or None.

    Tries combinations of the kernel basis along the moment curve
    (1, s, s^2, ...); since the bad set is a finite union of proper subspaces
    some s <= (number of groups) * (dim) + 1 always works.
    """
    basis = nullspace(M, n_cols) if M else [[Fraction(int(i == j)) for i in range(n_cols)]
                                             for j in range(n_cols)]
    if not basis:
        return None
    forced = forced_zero_columns(M, n_cols) if M else set()
    if any(all(c in forced for c in g) for g in groups):
        return None
    dim = len(basis)
    for s in range(1, len(groups) * max(dim, 1) * n_cols + 3):
        coeffs = [Fraction(s) ** i for i in range(dim)]
        v = [sum(coeffs[b] * basis[b][c] for b in range(dim)) for c in range(n_cols)]
        if all(any(v[c] != 0 for c in g) for g in groups):
            return v
    return None


@dataclass
class LinearGridResult:
    witness: dict | None
    points: int
    total: int
    candidates: int

    @property
    def exhausted(self) -> bool:
        return self.points >= self.total


def linear_grid_search(polys, columns, groups, grid_vars, values_per_var,
                       max_points=None, backend=None, accept=None, batch=1 << 14) -> LinearGridResult:
    """Search grid values of ``grid_vars`` for which the system, linear in
    ``columns``, has a kernel vector meeting every group of column indices."""
    polys = [p for p in polys if not p.is_zero()]
    n_cols = len(columns)
    entries = linear_matrix(polys, columns)
    rows_used = sorted({r for r, _ in entries})
    remap = {r: i for i, r in enumerate(rows_used)}
    entries = {(remap[r], c): v for (r, c), v in entries.items()}
    n_rows = len(rows_used)
    sizes = [len(v) for v in values_per_var]
    total = int(np.prod(sizes)) if sizes else 1
    limit = total if max_points is None else min(total, max_points)

    def confirm(assign):
        M = evaluate_matrix(entries, n_rows, n_cols, assign)
        v = kernel_vector(M if n_rows else [], n_cols, groups)
        if v is None:
            return None
        full = dict(assign)
        full.update({c: v[i] for i, c in enumerate(columns)})
        if accept is not None and not accept(full):
            return None
        return full

    if not grid_vars:
        w = confirm({})
        return LinearGridResult(w, 1, 1, int(w is not None))

    t_row, t_col, coef, exps = [], [], [], []
    index = {v: i for i, v in enumerate(grid_vars)}
    maxdeg = 1
    for (r, c), poly in entries.items():
        for mono, cc in poly.terms.items():
            row = [0] * len(grid_vars)
            for n, e in mono:
                row[index[n]] = e
                maxdeg = max(maxdeg, e)
            t_row.append(r)
            t_col.append(c)
            coef.append(kernels.to_mod(cc))
            exps.append(row)
    powtab = _value_tables(values_per_var, maxdeg)
    exps_arr = np.array(exps, dtype=np.int64).reshape(len(coef), len(grid_vars))
    done = cands = 0
    while done < limit:
        count = min(batch, limit - done)
        mask = kernels.linear_feasible_mask(t_row, t_col, coef, exps_arr, max(n_rows, 1), n_cols,
                                            powtab, sizes, groups, start=done, count=count,
                                            backend=backend)
        hits = np.nonzero(mask)[0]
        cands += len(hits)
        for h in hits:
            digits = kernels.decode_index(done + int(h), sizes)
            assign = {v: values_per_var[i][d] for i, (v, d) in enumerate(zip(grid_vars, digits))}
            w = confirm(assign)
            if w is not None:
                return LinearGridResult(w, done + int(h) + 1, total, cands)
        done += count
    return LinearGridResult(None, done, total, cands)


def monomial_propagation(polys, nonzero: set):
    """Deduce forced zeros from single-term constraints.

    A constraint that is a single term c * prod u^e forces one of its
    factors to vanish.  If all factors are declared nonzero the system is
    contradictory; if exactly one is not, that unknown must be zero.
    Returns (contradiction: bool, forced_zero: list, trace: list).
    """
    polys = [p for p in polys if not p.is_zero()]
    forced, trace = [], []
    changed = True
    while changed:
        changed = False
        for p in polys:
            if len(p.terms) != 1:
                continue
            (mono, c), = p.terms.items()
            free = [n for n, _ in mono if n not in nonzero]
            if not free:
                trace.append(f"{p} = 0 contradicts nonvanishing")
                return True, forced, trace
            if len(free) == 1:
                name = free[0]
                forced.append(name)
                trace.append(f"{p} = 0 forces {name} = 0")
                polys = [q.substitute({name: 0}) for q in polys]
                polys = [q for q in polys if not q.is_zero()]
                changed = True
                break
    return False, forced, trace

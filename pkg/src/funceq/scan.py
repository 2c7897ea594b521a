"""Bounded search for single-exponential solutions of bounded order.

Every function is given an order k and the ansatz sum_{j<=k} c_j d^j(x).
Assignments whose g functions are all linear (and can be normalized) give a
system that is linear in the f coefficients and are decided exactly.  The
rest are searched on a rational grid; a negative answer there is only
"inconclusive" unless single-term constraints already force a contradiction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Mapping

from .analysis import mixed_alternative, vandermonde_certificate
from .equation import (EquationSpec, FunctionSpec, build_lhs, extract_constraints,
                       substitute_ansatz, verify_solution)
from .errors import ScanCapError
from .linalg import fmt_matrix, rref
from .search import (evaluate_matrix, grid_zero_search, kernel_vector, linear_grid_search,
                     linear_matrix, monomial_propagation, rational_grid)
from .sympoly import Generator, Monomial, UnknownPoly

K_CAP = 6
ASSIGNMENT_CAP = 5000
DEFAULT_MAX_POINTS = 20000


def coeff_name(fname: str, k: int) -> str:
    return f"{fname}_{k}"


def order_ansatz(orders: Mapping) -> dict:
    return {name: FunctionSpec.build(name, {(0, k): UnknownPoly.var(coeff_name(name, k))
                                            for k in range(o + 1)})
            for name, o in orders.items()}


def _fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class AssignmentResult:
    orders: dict
    verdict: str                 # found | only_trivial | inconclusive
    method: str                  # linear | monomial | grid
    certificate: dict | None = None
    witness: dict | None = None
    witness_order: int | None = None
    witness_verified: bool | None = None
    alternatives: list = field(default_factory=list)
    points: int = 0
    total: int = 0
    g_linear: bool = False

    @property
    def key(self):
        return tuple(self.orders.values())

    @property
    def max_order(self) -> int:
        return max(self.orders.values())

    def to_dict(self) -> dict:
        d = {
            "orders": dict(self.orders),
            "verdict": self.verdict,
            "method": self.method,
            "g_linear": self.g_linear,
        }
        if self.certificate is not None:
            d["certificate"] = self.certificate
        if self.witness is not None:
            d["witness"] = {n: f.render() for n, f in self.witness.items()}
            d["witness_order"] = self.witness_order
            d["witness_verified"] = self.witness_verified
            d["alternatives"] = list(self.alternatives)
        if self.method == "grid":
            d["points_searched"] = self.points
            d["grid_size"] = self.total
            d["exhausted"] = self.points >= self.total
        return d


@dataclass
class ScanReport:
    spec: EquationSpec
    K_max: int
    mode: str
    grid: int
    max_points: int
    results: list
    vandermonde: dict | None = None

    @property
    def found(self) -> list:
        return [r for r in self.results if r.verdict == "found"]

    @property
    def max_nontrivial_order(self) -> int:
        return max((r.witness_order for r in self.found), default=-1)

    @property
    def n_minus_1(self) -> int:
        return self.spec.n - 1

    @property
    def consistent(self) -> bool:
        return self.max_nontrivial_order <= self.n_minus_1

    def counts(self) -> dict:
        out = {"found": 0, "only_trivial": 0, "inconclusive": 0}
        for r in self.results:
            out[r.verdict] += 1
        return out

    def to_dict(self) -> dict:
        return {
            "terms": [[t.p, t.q] for t in self.spec.terms],
            "K_max": self.K_max,
            "mode": self.mode,
            "grid": self.grid,
            "max_points": self.max_points,
            "max_nontrivial_order": self.max_nontrivial_order,
            "n_minus_1": self.n_minus_1,
            "consistent": self.consistent,
            "counts": self.counts(),
            "vandermonde": self.vandermonde,
            "assignments": [r.to_dict() for r in self.results],
        }


def _roles(spec: EquationSpec):
    g_names = {t.g_ref for t in spec.terms}
    f_only = [n for n in spec.function_names() if n not in g_names]
    return f_only, [n for n in spec.function_names() if n in g_names]


def _normalizable(spec: EquationSpec, gname: str, f_only) -> bool:
    """Scaling g by c can be absorbed into the f's of the terms using it."""
    users = [t for t in spec.terms if t.g_ref == gname]
    qs = {t.q for t in users}
    if len(qs) != 1:
        return False
    for t in users:
        if t.f_ref not in f_only:
            return False
        if any(s.f_ref == t.f_ref and s.g_ref != gname for s in spec.terms):
            return False
    return True


def row_combination(M, c: int):
    """y with sum_r y_r M_r = e_c, or None."""
    n_rows, n_cols = len(M), len(M[0])
    aug = [[M[r][j] for r in range(n_rows)] + [Fraction(int(j == c))] for j in range(n_cols)]
    R, piv = rref(aug)
    if n_rows in piv:
        return None
    y = [Fraction(0)] * n_rows
    for i, pc in enumerate(piv):
        y[pc] = R[i][n_rows]
    return y


def _vandermonde_check(spec, orders, f_only, columns, M, rows_index):
    """Cross-check a linear trivial-only verdict against the falling
    factorial matrix of the top-order f coefficients."""
    K = max(orders[n] for n in f_only)
    top = [n for n in f_only if orders[n] == K]
    terms = [t for t in spec.terms if t.f_ref in top]
    if len(terms) != len(top) or K < len(top) or K < 1:
        return None
    N = spec.N
    cert = vandermonde_certificate([t.p for t in terms])
    if not cert.trivial_kernel:
        return {"p": [t.p for t in terms], "trivial_kernel": False}
    match = True
    for tt in range(len(terms)):
        if K - tt == 1:
            m = Monomial([(Generator(0, 0, 1), K), (Generator(0, 0, 0), N - K)])
            scale = Fraction(1)
        else:
            m = Monomial([(Generator(0, 0, K - tt), 1), (Generator(0, 0, 1), tt),
                          (Generator(0, 0, 0), N - tt - 1)])
            scale = Fraction(comb(K, tt))
        r = rows_index.get(m)
        for t in terms:
            col = columns.index(coeff_name(t.f_ref, K))
            entry = M[r][col] if r is not None else Fraction(0)
            # p * C(p-1, t) * K!/(K-t)! = p(p-1)...(p-t) * C(K, t)
            want = t.scalar * cert.falling_matrix[tt][terms.index(t)] * scale
            if entry != want:
                match = False
    return {"p": [t.p for t in terms], "order": K, "rows_match": match,
            "trivial_kernel": cert.trivial_kernel}


def scan_assignment(spec: EquationSpec, orders: Mapping, mode: str = "leading",
                    grid: int = 3, max_points: int = DEFAULT_MAX_POINTS,
                    backend=None) -> AssignmentResult:
    spec = spec.canonical()
    f_only, g_like = _roles(spec)
    orders = {n: orders[n] for n in spec.function_names()}
    ans = order_ansatz(orders)
    fixed, nonzero, leading = {}, set(), {}
    for name, o in orders.items():
        leading[name] = coeff_name(name, o)
        if mode == "leading":
            nonzero.add(leading[name])
    for g in g_like:
        if mode == "leading" and _normalizable(spec, g, f_only):
            fixed[leading[g]] = 1
    g_linear = all(orders[g] == 0 for g in g_like)
    sym = substitute_ansatz(ans, fixed)
    system = extract_constraints(build_lhs(spec, sym))
    rows = list(system.entries)
    polys = [p for _, p in rows]
    columns = [coeff_name(n, k) for n in f_only for k in range(orders[n] + 1)]
    grid_vars = [coeff_name(n, k) for n in g_like for k in range(orders[n] + 1)
                 if coeff_name(n, k) not in fixed]

    if grid_vars:
        contra, zeros, trace = monomial_propagation(polys, nonzero)
    else:
        # linear systems are decided exactly below, with a rank certificate
        contra, zeros, trace = False, [], []
    if contra:
        return AssignmentResult(orders, "only_trivial", "monomial",
                                {"kind": "monomial", "steps": trace}, g_linear=g_linear)
    if zeros:
        rows = [(m, p.substitute({z: 0 for z in zeros})) for m, p in rows]
        rows = [(m, p) for m, p in rows if not p.is_zero()]
        polys = [p for _, p in rows]
        fixed.update({z: 0 for z in zeros})
        columns = [c for c in columns if c not in zeros]
        grid_vars = [v for v in grid_vars if v not in zeros]

    def groups_for(cols):
        out = []
        for n in f_only:
            if mode == "leading":
                g = [cols.index(leading[n])] if leading[n] in cols else []
            else:
                g = [i for i, c in enumerate(cols) if c.rsplit("_", 1)[0] == n]
            out.append(g)
        return out

    def g_nonzero(assign):
        if mode == "leading":
            return True
        for g in g_like:
            if all(Fraction(assign.get(coeff_name(g, k), fixed.get(coeff_name(g, k), 0))) == 0
                   for k in range(orders[g] + 1)):
                return False
        return True

    def finish(assign, method, points=0, total=0):
        full = {**{k: Fraction(v) for k, v in fixed.items()}, **assign}
        for n in orders:
            for k in range(orders[n] + 1):
                full.setdefault(coeff_name(n, k), Fraction(0))
        wit = substitute_ansatz(ans, full)
        verdict = verify_solution(spec, wit)
        order = max(f.order() for f in wit.values())
        return AssignmentResult(orders, "found", method, None, wit, order, verdict.passed,
                                mixed_alternative(spec, wit), points, total, g_linear)

    groups = groups_for(columns)
    if any(not g for g in groups):
        # a required f coordinate was forced to zero by propagation
        return AssignmentResult(orders, "only_trivial", "monomial",
                                {"kind": "monomial", "steps": trace}, g_linear=g_linear)

    if not grid_vars:
        # exact linear decision
        entries = linear_matrix(polys, columns)
        used = sorted({r for r, _ in entries})
        remap = {r: i for i, r in enumerate(used)}
        M = evaluate_matrix({(remap[r], c): v for (r, c), v in entries.items()},
                            len(used), len(columns), {})
        v = kernel_vector(M, len(columns), groups)
        if v is not None:
            return finish({c: v[i] for i, c in enumerate(columns)}, "linear")
        # certificate: some required group lies in the row space
        R, piv = rref(M)
        forced = [c for i, c in enumerate(piv)
                  if all(R[i][j] == 0 for j in range(len(columns)) if j != c)]
        bad = next(g for g in groups if all(c in forced for c in g))
        combos = {columns[c]: [_fmt(y) for y in row_combination(M, c)] for c in bad}
        cert = {
            "kind": "rank",
            "columns": columns,
            "rank": len(piv),
            "n_columns": len(columns),
            "forced_zero": [columns[c] for c in forced],
            "row_combinations": combos,
        }
        if mode == "leading":
            rows_index = {rows[r][0]: i for i, r in enumerate(used)}
            chk = _vandermonde_check(spec, orders, f_only, columns, M, rows_index)
            if chk is not None:
                cert["vandermonde"] = chk
        cert["matrix"] = fmt_matrix(M)
        return AssignmentResult(orders, "only_trivial", "linear", cert, g_linear=g_linear)

    # grid search over the g coefficients
    values = []
    for v in grid_vars:
        lead = v in nonzero
        values.append(rational_grid(grid, include_zero=not lead))
    if columns:
        res = linear_grid_search(polys, columns, groups, grid_vars, values,
                                 max_points=max_points, backend=backend, accept=g_nonzero)
        if res.witness is not None:
            return finish(res.witness, "grid", res.points, res.total)
        return AssignmentResult(orders, "inconclusive", "grid", None,
                                points=res.points, total=res.total, g_linear=g_linear)
    res = grid_zero_search(polys, grid_vars, values, max_points=max_points, backend=backend,
                           accept=g_nonzero, first_only=True)
    if res.solutions:
        return finish(res.solutions[0], "grid", res.points, res.total)
    return AssignmentResult(orders, "inconclusive", "grid", None,
                            points=res.points, total=res.total, g_linear=g_linear)


def conjecture_scan(spec: EquationSpec, K_max: int, strategy: str = "grid", mode: str = "leading",
                    grid: int = 3, max_points: int = DEFAULT_MAX_POINTS, backend=None) -> ScanReport:
    """Scan all order assignments up to K_max."""
    if strategy != "grid":
        raise ValueError(f"unknown strategy {strategy!r}")
    if mode not in ("leading", "nonzero"):
        raise ValueError(f"unknown mode {mode!r}")
    if K_max > K_CAP or K_max < 0:
        raise ScanCapError(f"K_max={K_max} outside 0..{K_CAP}")
    spec = spec.canonical()
    names = spec.function_names()
    count = (K_max + 1) ** len(names)
    if count > ASSIGNMENT_CAP:
        raise ScanCapError(f"{count} order assignments exceed the cap {ASSIGNMENT_CAP}")
    results = []
    for combo in product(range(K_max + 1), repeat=len(names)):
        orders = dict(zip(names, combo))
        results.append(scan_assignment(spec, orders, mode, grid, max_points, backend))
    results.sort(key=lambda r: r.key)
    vd = None
    N = spec.N
    if all(2 * t.q >= N for t in spec.terms) and len({t.p for t in spec.terms}) == spec.n:
        vd = vandermonde_certificate([t.p for t in spec.terms]).to_dict()
    return ScanReport(spec, K_max, mode, grid, max_points, results, vd)

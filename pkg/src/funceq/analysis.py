"""Solution families, two-term classification and related certificates."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, prod
from typing import Mapping

from .equation import (EquationSpec, FunctionSpec, build_lhs, extract_constraints,
                       require_conditions, substitute_ansatz, verify_solution)
from .errors import ConditionError, FunctionalEquationError
from .linalg import bareiss_det, bareiss_rank, fmt_matrix, matmul
from .search import grid_zero_search, integer_grid
from .sympoly import Generator, Monomial, UnknownPoly

U = UnknownPoly.var
C = UnknownPoly.const


@dataclass
class SolutionFamily:
    """A parametrized family of solutions.

    ``parametrization`` maps every template unknown to a polynomial in the
    free ``params``; it describes the generic part of the variety cut out by
    ``constraints``.
    """
    family_id: str
    spec: EquationSpec
    templates: dict
    constraints: list
    nonvanishing: list
    parametrization: dict
    params: list
    notes: list = field(default_factory=list)
    verified: bool | None = None
    generic_names: dict | None = None

    def unknowns(self) -> list:
        out = set()
        for f in self.templates.values():
            out |= f.unknowns()
        return sorted(out)

    def instantiate(self, values: Mapping) -> dict:
        """Numeric ansatz from parameter values."""
        assign = {k: v.substitute(values) for k, v in self.parametrization.items()}
        for k in self.params:
            if k not in assign and k in values:
                assign[k] = UnknownPoly.coerce(values[k])
        return substitute_ansatz(self.templates, assign)

    def to_dict(self) -> dict:
        return {
            "family": self.family_id,
            "terms": [[t.p, t.q] for t in self.spec.terms],
            "templates": {n: f.render() for n, f in sorted(self.templates.items())},
            "constraints": [str(c) for c in self.constraints],
            "nonvanishing": list(self.nonvanishing),
            "params": list(self.params),
            "parametrization": {k: str(v) for k, v in sorted(self.parametrization.items())},
            "verified": self.verified,
            "notes": list(self.notes),
        }


def verify_family(fam: SolutionFamily) -> bool:
    """Symbolic check: the parametrization solves both the family's
    constraints and the full constraint system of the templates, and does
    not force any declared-nonzero unknown to vanish."""
    system = extract_constraints(build_lhs(fam.spec, fam.templates))
    par = fam.parametrization
    ok = all(c.substitute(par).is_zero() for c in fam.constraints)
    ok = ok and all(p.substitute(par).is_zero() for p in system.polys())
    ok = ok and all(not U(n).substitute(par).is_zero() for n in fam.nonvanishing)
    covered = set(par) | set(fam.params)
    ok = ok and set(fam.unknowns()) <= covered
    fam.verified = ok
    return ok


def random_rational(rng: random.Random, nonzero: bool = True) -> Fraction:
    while True:
        v = Fraction(rng.randint(-7, 7), rng.randint(1, 5))
        if v or not nonzero:
            return v


def sample_family(fam: SolutionFamily, count: int, seed: int = 0, fixed: Mapping | None = None):
    """Instantiate at ``count`` random parameter points; returns (point, Verdict) pairs."""
    rng = random.Random(seed)
    out = []
    fixed = dict(fixed or {})
    while len(out) < count:
        vals = {p: fixed.get(p, random_rational(rng)) for p in fam.params}
        assign = {k: v.substitute(vals) for k, v in fam.parametrization.items()}
        if any(assign.get(n, U(n)).substitute(vals).evaluate({}) == 0
               for n in fam.nonvanishing):
            continue
        ans = fam.instantiate(vals)
        out.append((vals, verify_solution(fam.spec, ans)))
    return out


def family_contains(fam: SolutionFamily, assignment: Mapping) -> bool:
    """Membership of a numeric assignment of the generic ansatz unknowns.

    The assignment must respect the template shape (coefficients absent from
    a template must be zero, constants must match) and satisfy the family
    constraints.  Nonvanishing conditions are not required.
    """
    if fam.generic_names is None:
        raise ValueError(f"family {fam.family_id} has no generic-name map")
    vals: dict = {}
    for fname, coords in fam.generic_names.items():
        tmpl = fam.templates[fname]
        for (exp, order), gname in coords.items():
            gv = Fraction(assignment.get(gname, 0))
            tc = tmpl.coeff(exp, order)
            if tc.is_constant():
                if gv != tc.constant_value():
                    return False
                continue
            (mono, c), = tc.terms.items()
            if c != 1 or len(mono) != 1 or mono[0][1] != 1:
                raise ValueError(f"template coefficient {tc} is not a bare unknown")
            u = mono[0][0]
            if u in vals and vals[u] != gv:
                return False
            vals[u] = gv
    return all(c.evaluate(vals) == 0 for c in fam.constraints)


# --------------------------------------------------------------------------
# two-term classification

def order1_ansatz(spec: EquationSpec) -> tuple:
    """Generic order <= 1 single-exponential ansatz for a two-term spec.

    Returns (ansatz, names) where names[fname][(0, k)] is the unknown used
    for the order-k coefficient: lam_i_k for f_i and mu_i_k for g_i, with i
    the position in p-ascending order.
    """
    spec = spec.canonical()
    ans, names = {}, {}
    for i, t in enumerate(spec.terms, start=1):
        for fname, sym in ((t.f_ref, "lam"), (t.g_ref, "mu")):
            names[fname] = {(0, k): f"{sym}_{i}_{k}" for k in (0, 1)}
            ans[fname] = FunctionSpec.build(fname, {(0, k): U(f"{sym}_{i}_{k}") for k in (0, 1)})
    return ans, names


def _template(name, coeffs):
    return FunctionSpec.build(name, {(0, k): c for k, c in coeffs.items()})


@dataclass
class Classification:
    spec: EquationSpec
    families: list
    cases: dict
    notes: list

    def to_dict(self) -> dict:
        return {
            "terms": [[t.p, t.q] for t in self.spec.terms],
            "cases": self.cases,
            "families": [f.to_dict() for f in self.families],
            "notes": self.notes,
        }


def _two_term_setup(spec: EquationSpec):
    if spec.n != 2:
        raise ConditionError("two-term classification needs exactly two terms")
    spec = spec.canonical()
    require_conditions(spec)
    refs = [r for t in spec.terms for r in (t.f_ref, t.g_ref)]
    if len(set(refs)) != 4:
        raise ConditionError("two-term classification needs four distinct functions")
    return spec


def classify_two_term(spec: EquationSpec) -> Classification:
    """Families A, B, C of order <= 1 solutions, each symbolically verified."""
    spec = _two_term_setup(spec)
    (p1, q1), (p2, q2) = spec.pairs()
    t1, t2 = spec.terms
    s1, s2 = t1.scalar, t2.scalar
    _, names = order1_ansatz(spec)
    lam = {(i, k): U(f"lam_{i}_{k}") for i in (1, 2) for k in (0, 1)}
    mu = {(i, k): U(f"mu_{i}_{k}") for i in (1, 2) for k in (0, 1)}
    u, v, w, a = U("u"), U("v"), U("w"), U("a")
    families, cases, notes = [], {}, []

    # Case A: consecutive p.  The larger-p term i1 carries the derivation in f.
    if p2 == p1 + 1:
        i1, i2 = 2, 1
        P, q = p2, q2
        ti1, ti2 = t2, t1
        sc1, sc2 = s2, s1
        templates = {
            ti1.f_ref: _template(ti1.f_ref, {0: lam[i1, 0], 1: lam[i1, 1]}),
            ti1.g_ref: _template(ti1.g_ref, {0: mu[i1, 0], 1: mu[i1, 1]}),
            ti2.f_ref: _template(ti2.f_ref, {0: lam[i2, 0]}),
            ti2.g_ref: _template(ti2.g_ref, {0: mu[i2, 0], 1: mu[i2, 1]}),
        }
        e1 = sc1 * P * lam[i1, 1] * mu[i1, 1] ** q + sc2 * lam[i2, 0] * mu[i2, 1] ** (q + 1)
        align_f = lam[i1, 0] * mu[i1, 1] - P * lam[i1, 1] * mu[i1, 0]
        align_g = mu[i1, 0] * mu[i2, 1] - mu[i2, 0] * mu[i1, 1]
        m1, m2 = U("m1"), U("m2")
        param = {
            f"lam_{i1}_1": sc2 * u * m2 ** (q + 1),
            f"lam_{i2}_0": -sc1 * P * u * m1 ** q,
            f"lam_{i1}_0": sc2 * a * P * u * m2 ** (q + 1),
            f"mu_{i1}_1": m1, f"mu_{i2}_1": m2,
            f"mu_{i1}_0": a * m1, f"mu_{i2}_0": a * m2,
        }
        fam = SolutionFamily(
            "A", spec, templates, [e1, align_f, align_g],
            [f"lam_{i1}_1", f"mu_{i1}_1", f"lam_{i2}_0", f"mu_{i2}_1"],
            param, ["u", "m1", "m2", "a"],
            notes=[f"partner terms: i1=({P},{q}) carries d in f, i2=({P - 1},{q + 1}); "
                   "the partner has p one smaller, as p+q=N forces",
                   "g_i1, g_i2 and f_i1(x^p)/x^(p-1) share the root h = d + a*x"])
        fam.generic_names = names
        _finish(fam, families, cases)
    else:
        cases["A"] = {"status": "inapplicable",
                      "reason": f"needs p values differing by 1, got {p1}, {p2}"}

    # Case B: the larger-p term has q = 1 (p = N - 1).
    if q2 == 1:
        templates = {
            t1.f_ref: _template(t1.f_ref, {0: lam[1, 0], 1: lam[1, 1]}),
            t1.g_ref: _template(t1.g_ref, {0: mu[1, 0]}),
            t2.f_ref: _template(t2.f_ref, {0: lam[2, 0]}),
            t2.g_ref: _template(t2.g_ref, {0: mu[2, 0], 1: mu[2, 1]}),
        }
        c1 = s1 * p1 * lam[1, 1] * mu[1, 0] ** q1 + s2 * lam[2, 0] * mu[2, 1]
        c2 = s1 * lam[1, 0] * mu[1, 0] ** q1 + s2 * lam[2, 0] * mu[2, 0]
        param = {
            "lam_1_1": s2 * u * mu[2, 1],
            "lam_1_0": s2 * p1 * u * mu[2, 0],
            "lam_2_0": -s1 * p1 * u * mu[1, 0] ** q1,
        }
        fam = SolutionFamily(
            "B", spec, templates, [c1, c2],
            ["lam_1_1", "lam_2_0", "mu_1_0", "mu_2_1"],
            param, ["u", "mu_1_0", "mu_2_0", "mu_2_1"],
            notes=["g of the q=1 term is the only function carrying d besides f_1"])
        fam.generic_names = names
        _finish(fam, families, cases)
    else:
        cases["B"] = {"status": "inapplicable",
                      "reason": f"needs a term with q = 1, got q values {q1}, {q2}"}

    # Case C: both g linear; always applicable.
    templates = {
        t1.f_ref: _template(t1.f_ref, {0: lam[1, 0], 1: lam[1, 1]}),
        t1.g_ref: _template(t1.g_ref, {0: mu[1, 0]}),
        t2.f_ref: _template(t2.f_ref, {0: lam[2, 0], 1: lam[2, 1]}),
        t2.g_ref: _template(t2.g_ref, {0: mu[2, 0]}),
    }
    c1 = s1 * p1 * lam[1, 1] * mu[1, 0] ** q1 + s2 * p2 * lam[2, 1] * mu[2, 0] ** q2
    c2 = s1 * lam[1, 0] * mu[1, 0] ** q1 + s2 * lam[2, 0] * mu[2, 0] ** q2
    param = {
        "lam_1_1": s2 * p2 * v * mu[2, 0] ** q2,
        "lam_2_1": -s1 * p1 * v * mu[1, 0] ** q1,
        "lam_1_0": s2 * w * mu[2, 0] ** q2,
        "lam_2_0": -s1 * w * mu[1, 0] ** q1,
    }
    fam = SolutionFamily("C", spec, templates, [c1, c2], ["mu_1_0", "mu_2_0"],
                         param, ["v", "w", "mu_1_0", "mu_2_0"],
                         notes=["includes the all-linear solutions (v = 0)"])
    fam.generic_names = names
    _finish(fam, families, cases)
    return Classification(spec, families, cases, notes)


def _finish(fam, families, cases):
    if verify_family(fam):
        families.append(fam)
        cases[fam.family_id] = {"status": "emitted"}
    else:
        cases[fam.family_id] = {"status": "rejected", "reason": "template failed verification"}


@dataclass
class BruteForceReport:
    points: int
    solutions: int
    nontrivial: int
    outside: list
    by_family: dict

    def to_dict(self) -> dict:
        return {"points": self.points, "solutions": self.solutions,
                "nontrivial": self.nontrivial, "by_family": self.by_family,
                "outside": [{k: str(v) for k, v in sorted(s.items())} for s in self.outside]}


def brute_force_two_term(spec: EquationSpec, bound: int = 3, backend=None,
                         families=None) -> BruteForceReport:
    """Enumerate all order <= 1 ansaetze with integer coefficients in
    [-bound, bound] and check every nontrivial solution against the families."""
    spec = _two_term_setup(spec)
    ans, names = order1_ansatz(spec)
    system = extract_constraints(build_lhs(spec, ans))
    variables = [f"{s}_{i}_{k}" for i in (1, 2) for s in ("lam", "mu") for k in (0, 1)]
    values = [integer_grid(bound) for _ in variables]

    def nontrivial(a):
        return all(a[f"{s}_{i}_0"] != 0 or a[f"{s}_{i}_1"] != 0
                   for i in (1, 2) for s in ("lam", "mu"))

    res = grid_zero_search(system.polys(), variables, values, backend=backend)
    if families is None:
        families = classify_two_term(spec).families
    by_family = {f.family_id: 0 for f in families}
    outside, nt = [], 0
    for sol in res.solutions:
        if not nontrivial(sol):
            continue
        nt += 1
        hit = False
        for fam in families:
            if family_contains(fam, sol):
                by_family[fam.family_id] += 1
                hit = True
        if not hit:
            outside.append(sol)
    return BruteForceReport(res.points, len(res.solutions), nt, outside, by_family)


# --------------------------------------------------------------------------
# two exponentials

def two_exponential_family(spec: EquationSpec) -> SolutionFamily | None:
    """The phi_1/phi_2 family; exists only when the p values are {1, 2}.

    The documented template (f for the p=2 term proportional to
    phi_2 - c^2 phi_1) is tried first; it does not verify, and the swapped
    version phi_1 - c^2 phi_2 is emitted instead with a note.
    """
    if spec.n != 2 or not spec.is_homogeneous():
        raise ConditionError("two_exponential_family needs a homogeneous two-term spec")
    spec = spec.canonical()
    (p1, q1), (p2, q2) = spec.pairs()
    if (p1, p2) != (1, 2):
        return None
    N = spec.N
    t1, t2 = spec.terms
    a1, a2, b1, b2, c = U("a_1"), U("a_2"), U("b_1"), U("b_2"), U("c")
    u = U("u")

    def lin(name, x1, x2):
        return FunctionSpec.build(name, {(1, 0): x1, (2, 0): x2})

    g1 = lin(t1.g_ref, b1, -c * b1)
    g2 = lin(t2.g_ref, b2, -c * b2)
    f1 = lin(t1.f_ref, a1, c * a1)
    s1, s2 = t1.scalar, t2.scalar
    constraint = s1 * a1 * b1 ** (N - 1) + s2 * a2 * b2 ** (N - 2)
    param = {"a_1": s2 * u * b2 ** (N - 2), "a_2": -s1 * u * b1 ** (N - 1)}
    notes = []
    for label, f2 in (("stated", lin(t2.f_ref, -c ** 2 * a2, a2)),
                      ("corrected", lin(t2.f_ref, a2, -c ** 2 * a2))):
        templates = {t1.f_ref: f1, t1.g_ref: g1, t2.f_ref: f2, t2.g_ref: g2}
        fam = SolutionFamily("TwoExponential", spec, templates, [constraint],
                             ["a_1", "a_2", "b_1", "b_2", "c"], param,
                             ["u", "b_1", "b_2", "c"], notes=list(notes))
        if verify_family(fam):
            if label == "corrected":
                fam.notes.append("the p=2 function is a_2*(m1 - c^2*m2); the variant "
                                 "a_2*(m2 - c^2*m1) fails verification")
            return fam
        notes.append(f"{label} template rejected by verification")
    raise FunctionalEquationError("no two-exponential template verified")


def constant_two_exp_ansatz(spec: EquationSpec, order: str = "given", b1=None) -> tuple:
    """f_i = a_i_1 m1 + a_i_2 m2, g_i = m1 + b_i m2 (indices by term position)."""
    ans = {}
    for i, t in enumerate(spec.terms, start=1):
        ans[t.f_ref] = FunctionSpec.build(t.f_ref, {(1, 0): U(f"a_{i}_1"), (2, 0): U(f"a_{i}_2")})
        bi = U(f"b_{i}") if not (i == 1 and b1 is not None) else C(b1)
        ans[t.g_ref] = FunctionSpec.build(t.g_ref, {(1, 0): C(1), (2, 0): bi})
    return ans


def two_exp_monomial(e1: int, e2: int) -> Monomial:
    return Monomial([(Generator(0, 1, 0), e1), (Generator(0, 2, 0), e2)])


def two_exp_gap_probe(k: int, l: int, N: int, b1=1) -> dict:
    """Surviving constraints of the constant two-exponential ansatz for the
    terms (k, N-k), (N-l, l) at monomials m1^s m2^(N-s), l < s < k."""
    if not (l + 1 < k <= N // 2) or 2 * k > N:
        raise ValueError("needs l + 1 < k <= N/2")
    spec = EquationSpec.from_pairs([(k, N - k), (N - l, l)])
    ans = constant_two_exp_ansatz(spec, b1=b1)
    system = extract_constraints(build_lhs(spec, ans))
    out = {}
    for s in range(l + 1, k):
        m = two_exp_monomial(s, N - s)
        expected = comb(N - k, s) * U("a_1_2") * C(b1) ** (N - k - s)
        got = system.get(m)
        out[s] = {"monomial": str(m), "constraint": got, "expected": expected,
                  "matches": got == expected, "nonzero": not got.is_zero()}
    return out


def mixed_exponential_probe(spec: EquationSpec) -> dict:
    """Constant two-exponential ansatz with terms indexed by p descending;
    returns the constraint at m1^(N-q_n) m2^(q_n) for the last term n."""
    spec = EquationSpec(tuple(sorted(spec.terms, key=lambda t: -t.p)))
    N = spec.N
    n = spec.n
    ans = constant_two_exp_ansatz(spec)
    system = extract_constraints(build_lhs(spec, ans))
    qn = spec.terms[-1].q
    m = two_exp_monomial(N - qn, qn)
    return {"spec": spec, "system": system, "monomial": m, "constraint": system.get(m),
            "expected": U(f"a_{n}_1") * U(f"b_{n}") ** qn, "n": n, "q_n": qn}


def two_exp_coefficient(spec: EquationSpec, l: int) -> UnknownPoly:
    """Closed form of the coefficient of m1^(N-l) m2^l for the constant
    two-exponential ansatz: sum_i C(q_i, l) a_i1 b_i^l + C(q_i, N-l) a_i2 b_i^(l-p_i)."""
    N = spec.N
    acc = C(0)
    for i, t in enumerate(spec.terms, start=1):
        a1, a2, b = U(f"a_{i}_1"), U(f"a_{i}_2"), U(f"b_{i}")
        if l <= t.q:
            acc = acc + t.scalar * comb(t.q, l) * a1 * b ** l
        if 0 <= N - l <= t.q:
            acc = acc + t.scalar * comb(t.q, N - l) * a2 * b ** (l - t.p)
    return acc


# --------------------------------------------------------------------------
# Vandermonde step

def falling(p: int, t: int) -> int:
    """p (p-1) ... (p-t)."""
    return prod(p - s for s in range(t + 1))


def stirling1_signed(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return stirling1_signed(n - 1, k - 1) - (n - 1) * stirling1_signed(n - 1, k)


@dataclass
class VandermondeCertificate:
    p_list: tuple
    falling_matrix: list
    vandermonde: list
    transform: list
    det_falling: int
    det_vandermonde: int
    rank_falling: int
    rank_vandermonde: int
    closed_form: int
    trivial_kernel: bool

    def to_dict(self) -> dict:
        return {
            "p": list(self.p_list),
            "falling_factorial_matrix": fmt_matrix(self.falling_matrix),
            "vandermonde_matrix": fmt_matrix(self.vandermonde),
            "transform": fmt_matrix(self.transform),
            "rank_falling": self.rank_falling,
            "rank_vandermonde": self.rank_vandermonde,
            "det_falling": str(self.det_falling),
            "det_vandermonde": str(self.det_vandermonde),
            "trivial_kernel": self.trivial_kernel,
        }


def vandermonde_certificate(p_list, depth: int | None = None) -> VandermondeCertificate:
    """Rows t = 0..depth-1: falling factorials p(p-1)...(p-t) and powers p^(t+1).

    FF = L V with L unit lower triangular (signed Stirling numbers of the
    first kind), so both matrices have the same rank; rank equal to the
    number of columns means trivial kernel.
    """
    p_list = tuple(int(p) for p in p_list)
    if len(set(p_list)) != len(p_list):
        raise ValueError(f"p values must be distinct: {p_list}")
    if any(p < 1 for p in p_list):
        raise ValueError("p values must be positive")
    m = len(p_list) if depth is None else depth
    if m > len(p_list) or m < 1:
        raise ValueError("depth must be between 1 and the number of p values")
    FF = [[falling(p, t) for p in p_list] for t in range(m)]
    V = [[p ** (t + 1) for p in p_list] for t in range(m)]
    L = [[stirling1_signed(t + 1, s + 1) for s in range(m)] for t in range(m)]
    if matmul(L, V) != FF:
        raise ArithmeticError("falling factorial reduction failed")
    rf, rv = bareiss_rank(FF), bareiss_rank(V)
    square = m == len(p_list)
    dF = bareiss_det(FF) if square else 0
    dV = bareiss_det(V) if square else 0
    closed = prod(p_list) * prod(pj - pi for pi, pj in combinations(p_list, 2)) if square else 0
    if square and (dV != closed or dF != dV):
        raise ArithmeticError("determinant cross-check failed")
    return VandermondeCertificate(p_list, FF, V, L, dF, dV, rf, rv, closed,
                                  rf == rv == len(p_list))


# --------------------------------------------------------------------------
# alternatives for order-bounded single-exponential solutions

def mixed_alternative(spec: EquationSpec, ansatz: Mapping) -> list:
    """Which of the two structural alternatives a numeric single-exponential
    solution satisfies: "A" (some g_i = c x with f_i of maximal order) and/or
    "B" (all orders <= 1 with a consecutive pair sharing a root)."""
    spec = spec.canonical()
    orders = [ansatz[n].order() for n in spec.function_names()]
    K = max(orders)
    out = []
    for t in spec.terms:
        f, g = ansatz[t.f_ref], ansatz[t.g_ref]
        if g.order() == 0 and f.order() == K and not g.is_zero():
            out.append("A")
            break
    if K <= 1:
        for t1 in spec.terms:
            for t2 in spec.terms:
                if t2.p != t1.p - 1:
                    continue
                f1, g1, f2, g2 = (ansatz[t1.f_ref], ansatz[t1.g_ref],
                                  ansatz[t2.f_ref], ansatz[t2.g_ref])
                l11 = f1.coeff(0, 1).constant_value()
                m11 = g1.coeff(0, 1).constant_value()
                l20 = f2.coeff(0, 0).constant_value()
                m21 = g2.coeff(0, 1).constant_value()
                if (f2.order() == 0 and 0 not in (l11, m11, l20, m21)
                        and t1.scalar * t1.p * l11 * m11 ** t1.q
                        + t2.scalar * l20 * m21 ** (t1.q + 1) == 0):
                    out.append("B")
                    return out
    return out


def rational_root(value, e: int):
    """Exact rational e-th root of value (e may be negative), or None."""
    value = Fraction(value)
    if e == 0:
        raise ValueError("zero exponent")
    if e < 0:
        if value == 0:
            return None
        value, e = 1 / value, -e
    if value == 0:
        return Fraction(0)
    sign = 1
    if value < 0:
        if e % 2 == 0:
            return None
        sign = -1
        value = -value

    def iroot(n):
        r = round(n ** (1.0 / e)) if n < 2 ** 1000 else int(n ** (1.0 / e))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** e == n:
                return cand
        lo, hi = 0, 1
        while hi ** e < n:
            hi *= 2
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** e < n:
                lo = mid + 1
            else:
                hi = mid
        return lo if lo ** e == n else None

    a, b = iroot(value.numerator), iroot(value.denominator)
    if a is None or b is None:
        return None
    return sign * Fraction(a, b)

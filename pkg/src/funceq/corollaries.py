"""Specializations: equal orders, proportional pairs and the two kappa equations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm, prod

from .analysis import SolutionFamily, rational_root, verify_family
from .equation import (EquationSpec, FunctionSpec, Term, build_lhs, extract_constraints,
                       require_conditions, verify_solution)
from .errors import ConditionError
from .linalg import nullspace
from .scan import conjecture_scan
from .search import evaluate_matrix, grid_zero_search, linear_matrix, rational_grid
from .sympoly import UnknownPoly

U = UnknownPoly.var
C = UnknownPoly.const

KINDS = ("equal-g-order", "equal-f-order", "proportional", "kappa-fg", "kappa-ff")


@dataclass
class CorollaryResult:
    kind: str
    spec: EquationSpec
    families: list
    cases: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    scan: object = None
    claim_holds: bool = True

    @property
    def passed(self) -> bool:
        return self.claim_holds and all(f.verified for f in self.families)

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "terms": [[t.p, t.q] for t in self.spec.terms],
            "passed": self.passed,
            "claim_holds": self.claim_holds,
            "cases": self.cases,
            "families": [f.to_dict() for f in self.families],
            "data": self.data,
            "notes": self.notes,
        }
        if self.scan is not None:
            d["scan"] = self.scan.to_dict()
        return d


def _spec_from(params) -> EquationSpec:
    spec = params.get("spec")
    if spec is None:
        terms = params.get("terms")
        if not terms:
            raise ConditionError("params need 'spec' or 'terms'")
        spec = EquationSpec.from_pairs([tuple(t) for t in terms])
    return spec.canonical()


def _distinct_names(spec):
    refs = [r for t in spec.terms for r in (t.f_ref, t.g_ref)]
    if len(set(refs)) != len(refs):
        raise ConditionError("this corollary needs distinct functions in every slot")


def _kappa(params):
    try:
        N, p, q = int(params["N"]), int(params["p"]), int(params["q"])
        kappa = Fraction(params["kappa"])
    except KeyError as e:
        raise ConditionError(f"missing parameter {e.args[0]}") from None
    if kappa == 0:
        raise ConditionError("kappa must be nonzero")
    if p == q or not (1 <= p < N and 1 <= q < N):
        raise ConditionError("p, q must be distinct and in 1..N-1")
    if q == N - p:
        raise ConditionError("q = N - p is excluded")
    return N, p, q, kappa


def equal_order(kind, params) -> CorollaryResult:
    """g_i = mu_i x; the f coefficients span the kernel of the reduced system."""
    spec = _spec_from(params)
    require_conditions(spec)
    _distinct_names(spec)
    n = spec.n
    K = int(params.get("max_order", n))
    lam = {(i, k): f"lam_{i}_{k}" for i in range(1, n + 1) for k in range(K + 1)}
    templates = {}
    for i, t in enumerate(spec.terms, start=1):
        templates[t.f_ref] = FunctionSpec.build(t.f_ref, {(0, k): U(lam[i, k]) for k in range(K + 1)})
        templates[t.g_ref] = FunctionSpec.build(t.g_ref, {(0, 0): U(f"mu_{i}")})
    system = extract_constraints(build_lhs(spec, templates))
    # reduced system at mu = 1: linear in lam
    columns = [lam[i, k] for i in range(1, n + 1) for k in range(K + 1)]
    ones = {f"mu_{i}": 1 for i in range(1, n + 1)}
    polys = [p.substitute(ones) for p in system.polys()]
    polys = [p for p in polys if not p.is_zero()]
    entries = linear_matrix(polys, columns)
    M = evaluate_matrix(entries, len(polys), len(columns), {})
    basis = nullspace(M, len(columns)) if polys else nullspace([], len(columns))
    params_out = [f"t_{b + 1}" for b in range(len(basis))] + [f"mu_{i}" for i in range(1, n + 1)]
    qs = [t.q for t in spec.terms]
    param = {}
    for i in range(1, n + 1):
        other = prod((U(f"mu_{j}") ** qs[j - 1] for j in range(1, n + 1) if j != i), start=C(1))
        for k in range(K + 1):
            c = columns.index(lam[i, k])
            lin = C(0)
            for b, vec in enumerate(basis):
                if vec[c]:
                    lin = lin + vec[c] * U(f"t_{b + 1}")
            param[lam[i, k]] = lin * other
    orders = [k for (i, k), name in lam.items()
              if any(vec[columns.index(name)] for vec in basis)]
    found = max(orders, default=-1)
    fam = SolutionFamily("EqualOrder", spec, templates, system.polys(),
                         [f"mu_{i}" for i in range(1, n + 1)], param, params_out,
                         notes=[f"hypothesis: {kind}", "g_i linear; f_i from the kernel of the "
                                "reduced equation sum_i mu_i^q_i f_i(x^p_i) x^q_i = 0"])
    verify_family(fam)
    res = CorollaryResult(kind, spec, [fam])
    res.data = {"max_order_searched": K, "nullity": len(basis), "max_f_order": found,
                "n_minus_1": n - 1, "bounded": found <= n - 1}
    res.claim_holds = found <= n - 1
    return res


def proportional(params) -> CorollaryResult:
    """f_i = lam_i x, g_i = c_i lam_i x with sum_i c_i^q_i lam_i^(q_i+1) = 0."""
    spec = _spec_from(params)
    require_conditions(spec)
    _distinct_names(spec)
    n = spec.n
    cs = [Fraction(c) for c in params.get("c", [1] * n)]
    if len(cs) != n or any(c == 0 for c in cs):
        raise ConditionError(f"need {n} nonzero constants c")
    names = [f"lam_{i}" for i in range(1, n + 1)]
    templates = {}
    for i, t in enumerate(spec.terms):
        templates[t.f_ref] = FunctionSpec.build(t.f_ref, {(0, 0): U(names[i])})
        templates[t.g_ref] = FunctionSpec.build(t.g_ref, {(0, 0): cs[i] * U(names[i])})
    stated = sum((t.scalar * cs[i] ** t.q * U(names[i]) ** (t.q + 1)
                  for i, t in enumerate(spec.terms)), start=C(0))
    system = extract_constraints(build_lhs(spec, templates))
    res = CorollaryResult("proportional", spec, [])
    res.data = {"c": [str(c) for c in cs], "stated_constraint": str(stated),
                "constraint_matches": system.polys() == [stated]}
    grid = rational_grid(int(params.get("grid", 3)), include_zero=False)
    hit = grid_zero_search([stated], names, [grid] * n, first_only=True)
    if not hit.solutions:
        res.cases["Proportional"] = {"status": "no rational point on the grid"}
        res.notes.append("no grid point found; nothing to instantiate")
        return res
    w = hit.solutions[0]
    L = lcm(*(t.q + 1 for t in spec.terms))
    param = {names[i]: w[names[i]] * U("u") ** (L // (t.q + 1)) for i, t in enumerate(spec.terms)}
    fam = SolutionFamily("Proportional", spec, templates, [stated], names, param, ["u"],
                         notes=[f"curve through the grid point {', '.join(str(w[x]) for x in names)}"])
    verify_family(fam)
    res.families.append(fam)
    res.cases["Proportional"] = {"status": "emitted"}
    res.data["witness"] = {k: str(v) for k, v in w.items()}
    return res


def kappa_fg(params) -> CorollaryResult:
    """f(x^p) g(x)^(N-p) = kappa f(x^q) g(x)^(N-q)."""
    N, p, q, kappa = _kappa(params)
    spec = EquationSpec((Term(p, N - p, "f", "g"), Term(q, N - q, "f", "g", -kappa))).canonical()
    res = CorollaryResult("kappa-fg", spec, [])
    l0, l1, m0 = U("lam_0"), U("lam_1"), U("mu_0")
    stated_a = [l0 * (m0 ** (N - p) - kappa * m0 ** (N - q)),
                l1 * (p * m0 ** (N - p) - kappa * q * m0 ** (N - q))]
    full = {"f": FunctionSpec.build("f", {(0, 0): l0, (0, 1): l1}),
            "g": FunctionSpec.build("g", {(0, 0): m0})}
    derived = extract_constraints(build_lhs(spec, full)).polys()
    res.data["A_stated_constraints"] = [str(c) for c in stated_a]
    res.data["A_constraints_match"] = all(any((d - s).is_zero() or (d + s).is_zero()
                                              for s in stated_a) for d in derived)
    res.notes.append("with lam_0, lam_1 both nonzero the two relations force p = q, "
                     "so A is realized with lam_0 = 0")

    # A: f = lam_1 d, mu_0^(p-q) = p/(kappa q)
    r = rational_root(Fraction(p) / (kappa * q), p - q)
    if r is None:
        res.cases["A"] = {"status": "unrepresentable over Q",
                          "reason": f"mu_0^{p - q} = {Fraction(p) / (kappa * q)} has no rational root"}
    else:
        tmpl = {"f": FunctionSpec.build("f", {(0, 1): l1}), "g": FunctionSpec.build("g", {(0, 0): m0})}
        fam = SolutionFamily("KappaCase", spec, tmpl, stated_a[1:], ["lam_1", "mu_0"],
                             {"lam_1": U("u"), "mu_0": C(r)}, ["u"],
                             notes=["case A: f a pure derivation", f"mu_0 = {r}"])
        verify_family(fam)
        res.families.append(fam)
        res.cases["A"] = {"status": "emitted", "mu_0": str(r)}

    # B: f = lam_0 x, mu_0^(p-q) = 1/kappa
    r = rational_root(1 / kappa, p - q)
    if r is None:
        res.cases["B"] = {"status": "unrepresentable over Q",
                          "reason": f"mu_0^{p - q} = {1 / kappa} has no rational root"}
    else:
        tmpl = {"f": FunctionSpec.build("f", {(0, 0): l0}), "g": FunctionSpec.build("g", {(0, 0): m0})}
        fam = SolutionFamily("KappaCase", spec, tmpl, stated_a[:1], ["lam_0", "mu_0"],
                             {"lam_0": U("u"), "mu_0": C(r)}, ["u"],
                             notes=["case B: f linear", f"mu_0 = {r}"])
        verify_family(fam)
        res.families.append(fam)
        res.cases["B"] = {"status": "emitted", "mu_0": str(r)}

    # C: two exponentials, only for {p, q} = {1, 2}
    if {p, q} != {1, 2}:
        res.cases["C"] = {"status": "inapplicable", "reason": "needs {p, q} = {1, 2}"}
        return res
    a, b = U("a"), U("b")
    tmpl = {"f": FunctionSpec.build("f", {(1, 0): a, (2, 0): -a}),
            "g": FunctionSpec.build("g", {(1, 0): b, (2, 0): b})}
    system = extract_constraints(build_lhs(spec, tmpl))
    bval = 1 / kappa if p == 2 else kappa
    rel = 1 - kappa * b if p == 2 else b - kappa
    fam = SolutionFamily("KappaCase", spec, tmpl, [rel], ["a", "b"],
                         {"a": U("u"), "b": C(bval)}, ["u"],
                         notes=["case C: f = a(m1 - m2), g = b(m1 + m2)", f"b = {bval}"])
    verify_family(fam)
    res.families.append(fam)
    stated = a - kappa * b
    res.cases["C"] = {"status": "emitted", "b": str(bval)}
    res.data["C_derived_constraints"] = sorted({str(c) for c in system.polys()})
    res.data["C_stated_relation"] = str(stated)
    res.data["C_stated_relation_holds"] = stated.substitute(fam.parametrization).is_zero()
    return res


def linear_kappa_curve(kappa, e1: int, e2: int):
    """Rational curve on lam^e1 = kappa mu^e2, or None when it has no
    rational point with lam, mu nonzero."""
    g = gcd(e1, e2)
    k = rational_root(kappa, g)
    if k is None:
        return None
    e1, e2 = e1 // g, e2 // g
    # a e1 - b e2 = 1
    a = pow(e1, -1, e2) if e2 > 1 else 0
    b = (a * e1 - 1) // e2
    return {"lam_0": C(k ** a) * U("u") ** e2, "mu_0": C(k ** b) * U("u") ** e1}


def kappa_ff(params) -> CorollaryResult:
    """f(x^p) f(x)^(N-p) = kappa g(x^q) g(x)^(N-q)."""
    N, p, q, kappa = _kappa(params)
    spec = EquationSpec((Term(p, N - p, "f", "f"), Term(q, N - q, "g", "g", -kappa))).canonical()
    res = CorollaryResult("kappa-ff", spec, [])
    ident = {"f": FunctionSpec.build("f", {(0, 0): 1}), "g": FunctionSpec.build("g", {(0, 0): 1})}
    res.data["identity_passes"] = verify_solution(spec, ident).passed
    l0, m0 = U("lam_0"), U("mu_0")
    tmpl = {"f": FunctionSpec.build("f", {(0, 0): l0}), "g": FunctionSpec.build("g", {(0, 0): m0})}
    # f(x^p) f(x)^(N-p) is of degree N - p + 1 in the coefficient of f
    e1, e2 = N - p + 1, N - q + 1
    rel = l0 ** e1 - kappa * m0 ** e2
    res.data["linear_relation"] = str(rel)
    par = linear_kappa_curve(kappa, e1, e2)
    if par is not None:
        fam = SolutionFamily("KappaCase", spec, tmpl, [rel], ["lam_0", "mu_0"], par, ["u"],
                             notes=["f, g linear"])
        verify_family(fam)
        res.families.append(fam)
        res.cases["linear"] = {"status": "emitted"}
    else:
        res.cases["linear"] = {"status": "unrepresentable over Q",
                               "reason": f"kappa = {kappa} has no rational root of order {gcd(e1, e2)}"}
    if kappa != 1:
        scan = conjecture_scan(spec, int(params.get("max_order", 1)),
                               grid=int(params.get("grid", 3)),
                               max_points=params.get("max_points", 100000))
        res.scan = scan
        res.data["witnesses_found"] = len(scan.found)
        res.claim_holds = not scan.found and not res.families
        if not res.claim_holds:
            res.notes.append("nonzero solutions exist for this kappa != 1")
    return res


def corollary_specialization(kind: str, params: dict) -> CorollaryResult:
    if kind in ("equal-g-order", "equal-f-order"):
        return equal_order(kind, params)
    if kind == "proportional":
        return proportional(params)
    if kind == "kappa-fg":
        return kappa_fg(params)
    if kind == "kappa-ff":
        return kappa_ff(params)
    raise ConditionError(f"unknown corollary kind {kind!r}; expected one of {', '.join(KINDS)}")

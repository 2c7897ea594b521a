"""Equation instances, ansatz functions and the constraint engine.

An equation is sum_i c_i * f_i(x^{p_i}) * g_i(x)^{q_i} = 0 where every f_i, g_i
is an additive function given by an ansatz: a finite sum of coefficients
times generators m_j(d^k(x)).  Function names may repeat across terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .errors import (ConditionError, NonHomogeneousError, NotNumericError,
                     SymmetrizationCapError, UnresolvedFunctionError)
from .expansion import function_as_poly, substitute_power, substitute_product
from .sympoly import (Monomial, Number, SymPoly, UnknownPoly,
                      as_number)

SYMMETRIZE_CAP = 10


@dataclass(frozen=True)
class Term:
    p: int
    q: int
    f_ref: str
    g_ref: str
    scalar: Number = 1

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError(f"exponents must be positive, got p={self.p}, q={self.q}")
        object.__setattr__(self, "scalar", as_number(self.scalar))

    @property
    def N(self) -> int:
        return self.p + self.q


@dataclass(frozen=True)
class EquationSpec:
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("an equation needs at least one term")

    @classmethod
    def from_pairs(cls, pairs, f_names=None, g_names=None, scalars=None) -> "EquationSpec":
        """Build from [(p, q), ...] with default names f1, g1, f2, g2, ..."""
        terms = []
        for i, (p, q) in enumerate(pairs):
            f = f_names[i] if f_names else f"f{i + 1}"
            g = g_names[i] if g_names else f"g{i + 1}"
            s = scalars[i] if scalars else 1
            terms.append(Term(p, q, f, g, s))
        return cls(tuple(terms))

    @property
    def n(self) -> int:
        return len(self.terms)

    def degrees(self) -> list:
        return sorted({t.N for t in self.terms})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) == 1

    @property
    def N(self) -> int:
        degs = self.degrees()
        if len(degs) != 1:
            raise NonHomogeneousError(f"equation mixes degrees {degs}")
        return degs[0]

    def pairs(self) -> list:
        return [(t.p, t.q) for t in self.terms]

    def canonical(self) -> "EquationSpec":
        """Terms sorted by p ascending (stable)."""
        return EquationSpec(tuple(sorted(self.terms, key=lambda t: t.p)))

    def function_names(self) -> list:
        out = []
        for t in self.terms:
            for name in (t.f_ref, t.g_ref):
                if name not in out:
                    out.append(name)
        return out


@dataclass(frozen=True)
class FunctionTerm:
    exp: int
    order: int
    coeff: UnknownPoly

    def __post_init__(self):
        if self.exp < 0 or self.order < 0:
            raise ValueError("exp and order must be nonnegative")
        object.__setattr__(self, "coeff", UnknownPoly.coerce(self.coeff))


@dataclass(frozen=True)
class FunctionSpec:
    name: str
    terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        seen = set()
        for t in self.terms:
            key = (t.exp, t.order)
            if key in seen:
                raise ValueError(f"{self.name}: repeated term exp={t.exp}, order={t.order}")
            seen.add(key)

    @classmethod
    def build(cls, name: str, coeffs: Mapping) -> "FunctionSpec":
        """FunctionSpec.build("f", {(exp, order): coeff, ...})"""
        terms = [FunctionTerm(e, k, UnknownPoly.coerce(c))
                 for (e, k), c in sorted(coeffs.items())]
        return cls(name, tuple(terms))

    def as_poly(self) -> SymPoly:
        return function_as_poly(self)

    def coeff(self, exp: int, order: int) -> UnknownPoly:
        for t in self.terms:
            if t.exp == exp and t.order == order:
                return t.coeff
        return UnknownPoly.const(0)

    def is_zero(self) -> bool:
        return all(t.coeff.is_zero() for t in self.terms)

    def is_numeric(self) -> bool:
        return all(t.coeff.is_constant() for t in self.terms)

    def order(self) -> int:
        """Largest derivation order with a coefficient that is not the zero poly."""
        return max((t.order for t in self.terms if not t.coeff.is_zero()), default=-1)

    def unknowns(self) -> set:
        out = set()
        for t in self.terms:
            out |= t.coeff.unknowns()
        return out

    def substitute(self, mapping: Mapping) -> "FunctionSpec":
        return FunctionSpec(self.name, tuple(
            FunctionTerm(t.exp, t.order, t.coeff.substitute(mapping)) for t in self.terms))

    def relabel(self, exp_map: Mapping) -> "FunctionSpec":
        return FunctionSpec(self.name, tuple(sorted(
            (FunctionTerm(exp_map.get(t.exp, t.exp), t.order, t.coeff) for t in self.terms),
            key=lambda t: (t.exp, t.order))))

    def render(self) -> str:
        poly = self.as_poly()
        return poly.render()


def make_ansatz(functions: Iterable) -> dict:
    out = {}
    for f in functions:
        if f.name in out:
            raise ValueError(f"duplicate function name {f.name!r}")
        out[f.name] = f
    return out


def substitute_ansatz(ansatz: Mapping, mapping: Mapping) -> dict:
    return {name: f.substitute(mapping) for name, f in ansatz.items()}


def ansatz_unknowns(ansatz: Mapping) -> list:
    out = set()
    for f in ansatz.values():
        out |= f.unknowns()
    return sorted(out)


# --------------------------------------------------------------------------
# conditions and homogenization

@dataclass
class ConditionReport:
    sorted_pairs: list
    c1: bool
    duplicate_p: list
    c2: bool
    N: int | None
    c3: bool
    c3_violations: list
    all_distinct: bool
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.c1 and self.c2 and self.c3

    def to_dict(self) -> dict:
        return {
            "sorted_terms": [list(pq) for pq in self.sorted_pairs],
            "C1": self.c1,
            "duplicate_p": self.duplicate_p,
            "C2": self.c2,
            "N": self.N,
            "C3": self.c3,
            "C3_violations": [list(v) for v in self.c3_violations],
            "all_distinct": self.all_distinct,
            "warnings": self.warnings,
        }


def check_conditions(spec: EquationSpec) -> ConditionReport:
    pairs = spec.canonical().pairs()
    ps = [p for p, _ in pairs]
    qs = [q for _, q in pairs]
    dup = sorted({p for p in ps if ps.count(p) > 1})
    c1 = not dup
    degs = sorted({p + q for p, q in pairs})
    c2 = len(degs) == 1
    viol = []
    for i in range(len(pairs)):
        for j in range(len(pairs)):
            if i != j and ps[i] == qs[j]:
                viol.append((i + 1, j + 1))
    values = ps + qs
    warnings = []
    if dup:
        warnings.append(f"repeated p values {dup}: structure results do not apply")
    if not c2:
        warnings.append(f"terms have several degrees {degs}")
    return ConditionReport(pairs, c1, dup, c2, degs[0] if c2 else None,
                           not viol, viol, len(set(values)) == len(values), warnings)


def homogenize(spec: EquationSpec) -> list:
    """Split terms by N = p + q; classes keep first-appearance order."""
    classes: dict = {}
    for t in spec.terms:
        classes.setdefault(t.N, []).append(t)
    return [EquationSpec(tuple(ts)) for ts in classes.values()]


# --------------------------------------------------------------------------
# left-hand side

def _resolve(spec: EquationSpec, ansatz: Mapping):
    missing = [n for n in spec.function_names() if n not in ansatz]
    if missing:
        raise UnresolvedFunctionError(f"unresolved function reference(s): {', '.join(missing)}")


def term_value(term: Term, ansatz: Mapping) -> SymPoly:
    f = ansatz[term.f_ref]
    g = ansatz[term.g_ref]
    val = substitute_power(f, term.p) * (g.as_poly() ** term.q)
    return val * term.scalar if term.scalar != 1 else val


def lhs_unchecked(spec: EquationSpec, ansatz: Mapping) -> SymPoly:
    """The full left-hand side, homogeneous or not."""
    _resolve(spec, ansatz)
    acc = SymPoly.zero()
    for t in spec.terms:
        acc = acc + term_value(t, ansatz)
    return acc


def build_lhs(spec: EquationSpec, ansatz: Mapping) -> SymPoly:
    _resolve(spec, ansatz)
    if not spec.is_homogeneous():
        raise NonHomogeneousError(
            f"equation mixes degrees {spec.degrees()}; homogenize first")
    return lhs_unchecked(spec, ansatz)


@dataclass(frozen=True)
class ConstraintSystem:
    entries: tuple
    unknowns: tuple

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def is_empty(self) -> bool:
        return not self.entries

    def polys(self) -> list:
        return [p for _, p in self.entries]

    def get(self, m: Monomial) -> UnknownPoly:
        for mm, p in self.entries:
            if mm == m:
                return p
        return UnknownPoly.const(0)

    def satisfied_by(self, assignment: Mapping) -> bool:
        return all(p.evaluate(assignment) == 0 for _, p in self.entries)

    def substitute(self, mapping: Mapping) -> list:
        """Constraint polys after substitution, zero entries dropped."""
        out = []
        for _, p in self.entries:
            s = p.substitute(mapping)
            if not s.is_zero():
                out.append(s)
        return out

    def to_json(self) -> list:
        return [{"monomial": str(m), "poly": str(p)} for m, p in self.entries]


def extract_constraints(lhs: SymPoly) -> ConstraintSystem:
    entries = tuple(lhs.sorted_terms())
    return ConstraintSystem(entries, tuple(sorted(lhs.unknowns())))


@dataclass(frozen=True)
class Verdict:
    passed: bool
    witnesses: tuple = ()

    def to_dict(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "witnesses": [{"monomial": str(m), "coeff": str(c)} for m, c in self.witnesses],
        }


def verify_solution(spec: EquationSpec, ansatz: Mapping) -> Verdict:
    """Exact check that the left-hand side vanishes identically."""
    _resolve(spec, ansatz)
    for name in spec.function_names():
        if not ansatz[name].is_numeric():
            raise NotNumericError(
                f"{name} has symbolic coefficients: {sorted(ansatz[name].unknowns())}")
    lhs = lhs_unchecked(spec, ansatz)
    wit = tuple((m, c.constant_value()) for m, c in lhs.sorted_terms())
    return Verdict(not wit, wit)


def triviality_flags(spec: EquationSpec, ansatz: Mapping) -> dict:
    """name -> True when the function is identically zero."""
    _resolve(spec, ansatz)
    return {name: ansatz[name].is_zero() for name in spec.function_names()}


def grade_by_scaling(spec: EquationSpec, ansatz: Mapping) -> dict:
    return lhs_unchecked(spec, ansatz).homogeneous_components()


# --------------------------------------------------------------------------
# symmetrization

def symmetrize(spec: EquationSpec, ansatz: Mapping, N: int | None = None,
               cap: int = SYMMETRIZE_CAP) -> SymPoly:
    """N-variable symmetric form; its diagonal is build_lhs.

    Averaging over all N! permutations reduces to averaging over the
    C(N, p) slot sets that feed f, each with weight 1/C(N, p).
    """
    _resolve(spec, ansatz)
    deg = spec.N
    if N is None:
        N = deg
    if N != deg:
        raise NonHomogeneousError(f"equation has degree {deg}, not {N}")
    if N > cap:
        raise SymmetrizationCapError(f"N={N} exceeds symmetrization cap {cap}")
    from itertools import combinations
    gpolys: dict = {}
    acc = SymPoly.zero()
    for t in spec.terms:
        f = ansatz[t.f_ref]
        g = ansatz[t.g_ref]
        part = SymPoly.zero()
        for S in combinations(range(N), t.p):
            val = substitute_product(f, S)
            for s in range(N):
                if s in S:
                    continue
                key = (t.g_ref, s)
                if key not in gpolys:
                    gpolys[key] = function_as_poly(g, var=s)
                val = val * gpolys[key]
            part = part + val
        acc = acc + part * (Fraction(1, comb(N, t.p)) * t.scalar)
    return acc


def relabel_ansatz(ansatz: Mapping, exp_map: Mapping) -> dict:
    return {name: f.relabel(exp_map) for name, f in ansatz.items()}


def require_conditions(spec: EquationSpec) -> ConditionReport:
    rep = check_conditions(spec)
    if not rep.ok:
        raise ConditionError(
            f"conditions fail for {rep.sorted_pairs}: C1={rep.c1} C2={rep.c2} C3={rep.c3}")
    return rep

"""Exact arithmetic in Q(t) with d/dt and substitution endomorphisms.

Used as an independent oracle: symbolic solutions are realized as concrete
additive maps Q(t) -> Q(t) and the equation is evaluated at random points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from flint import fmpz_poly

from .equation import EquationSpec


def _poly(x) -> fmpz_poly:
    if isinstance(x, fmpz_poly):
        return x
    if isinstance(x, (list, tuple)):
        return fmpz_poly([int(c) for c in x])
    return fmpz_poly([int(x)])


class RationalFunction:
    """num/den in lowest terms with den of positive leading coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num, den = _poly(num), _poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = fmpz_poly([0]), fmpz_poly([1])
            return
        g = num.gcd(den)
        if not g.is_one():
            num, den = num // g, den // g
        c = num.content().gcd(den.content())
        if c != 1:
            num, den = num // c, den // c
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        self.num, self.den = num, den

    @classmethod
    def coerce(cls, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, Fraction):
            return cls(x.numerator, x.denominator)
        if isinstance(x, int):
            return cls(x)
        if isinstance(x, fmpz_poly):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to RationalFunction")

    @classmethod
    def t(cls) -> "RationalFunction":
        return cls(fmpz_poly([0, 1]))

    @classmethod
    def from_coeffs(cls, num: Sequence, den: Sequence = (1,)) -> "RationalFunction":
        return cls(fmpz_poly(list(num)), fmpz_poly(list(den)))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def __add__(self, other):
        o = RationalFunction.coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        r = RationalFunction.__new__(RationalFunction)
        r.num, r.den = -self.num, self.den
        return r

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        o = RationalFunction.coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RationalFunction.coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return RationalFunction(1) / self ** (-e)
        r = RationalFunction.__new__(RationalFunction)
        r.num, r.den = self.num ** e, self.den ** e
        return r

    def __eq__(self, other):
        try:
            o = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((tuple(int(c) for c in self.num.coeffs()),
                     tuple(int(c) for c in self.den.coeffs())))

    def derivative(self) -> "RationalFunction":
        return RationalFunction(self.num.derivative() * self.den - self.num * self.den.derivative(),
                                self.den * self.den)

    def compose(self, r: "RationalFunction") -> "RationalFunction":
        """self(r(t)); r must be non-constant."""
        r = RationalFunction.coerce(r)
        if r.is_constant():
            raise ValueError("substitution by a constant is not an endomorphism")
        # homogenize: a(P/Q) = sum a_i P^i Q^(n-i) / Q^n
        def hom(poly, deg):
            acc = fmpz_poly([0])
            for i, c in enumerate(poly.coeffs()):
                if c:
                    acc += int(c) * r.num ** i * r.den ** (deg - i)
            return acc
        d = max(self.num.degree(), self.den.degree(), 0)
        return RationalFunction(hom(self.num, d), hom(self.den, d))

    def __call__(self, r):
        return self.compose(r)

    def __str__(self):
        n = _fmt_poly(self.num)
        if self.den.is_one():
            return n
        d = _fmt_poly(self.den)
        n = n if " " not in n else f"({n})"
        d = d if " " not in d and "*" not in d else f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RationalFunction({self})"


def _fmt_poly(p: fmpz_poly) -> str:
    cs = [int(c) for c in p.coeffs()]
    if not any(cs):
        return "0"
    parts = []
    for i in range(len(cs) - 1, -1, -1):
        c = cs[i]
        if not c:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


T = RationalFunction.t()


def rf_arith(a, b, op: str) -> RationalFunction:
    a, b = RationalFunction.coerce(a), RationalFunction.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def rf_derivative(a) -> RationalFunction:
    return RationalFunction.coerce(a).derivative()


def rf_compose(a, r) -> RationalFunction:
    return RationalFunction.coerce(a).compose(r)


def random_rf(rng: random.Random, max_deg: int = 3, bound: int = 5) -> RationalFunction:
    """Numerator and denominator of degree <= max_deg, coefficients in [-bound, bound]."""
    num = [rng.randint(-bound, bound) for _ in range(rng.randint(0, max_deg) + 1)]
    while True:
        den = [rng.randint(-bound, bound) for _ in range(rng.randint(0, max_deg) + 1)]
        if any(den):
            break
    return RationalFunction.from_coeffs(num, den)


# --------------------------------------------------------------------------
# additive maps

@dataclass(frozen=True)
class Atom:
    """x -> scalar * phi_endo(d^order(x))."""
    scalar: Fraction
    endo: RationalFunction
    order: int = 0

    def __call__(self, x: RationalFunction) -> RationalFunction:
        y = x
        for _ in range(self.order):
            y = y.derivative()
        if self.endo != T:
            y = y.compose(self.endo)
        return self.scalar * y

    def to_dict(self) -> dict:
        s = Fraction(self.scalar)
        return {"scalar": str(s), "endo": str(self.endo), "order": self.order}


@dataclass
class AdditiveModel:
    atoms: list = field(default_factory=list)

    @classmethod
    def identity(cls) -> "AdditiveModel":
        return cls([Atom(Fraction(1), T, 0)])

    @classmethod
    def derivation(cls, order: int = 1, scalar=1) -> "AdditiveModel":
        return cls([Atom(Fraction(scalar), T, order)])

    @classmethod
    def endomorphism(cls, r, scalar=1) -> "AdditiveModel":
        return cls([Atom(Fraction(scalar), RationalFunction.coerce(r), 0)])

    def __call__(self, x) -> RationalFunction:
        x = RationalFunction.coerce(x)
        acc = RationalFunction(0)
        for a in self.atoms:
            acc = acc + a(x)
        return acc

    def __add__(self, other: "AdditiveModel") -> "AdditiveModel":
        return AdditiveModel(self.atoms + other.atoms)

    def scaled(self, c) -> "AdditiveModel":
        return AdditiveModel([Atom(a.scalar * Fraction(c), a.endo, a.order) for a in self.atoms])

    def post_compose(self, r) -> "AdditiveModel":
        """phi_r o model."""
        r = RationalFunction.coerce(r)
        if r.is_constant():
            raise ValueError("substitution by a constant is not an endomorphism")
        return AdditiveModel([Atom(a.scalar, a.endo.compose(r), a.order) for a in self.atoms])

    def to_dict(self) -> dict:
        return {"atoms": [a.to_dict() for a in self.atoms]}


def eval_model(model: AdditiveModel, x) -> RationalFunction:
    return model(x)


def default_endos(exps) -> dict:
    """Distinct non-constant endomorphisms t, t^2, t^3, ... by exponent index."""
    return {j: T ** (i + 1) for i, j in enumerate(sorted(set(exps)))}


def realize(ansatz: Mapping, endos: Mapping | None = None) -> dict:
    """Concrete models for a numeric ansatz: the derivation is d/dt and each
    exponential index is a substitution endomorphism."""
    exps = {t.exp for f in ansatz.values() for t in f.terms}
    endos = dict(endos or default_endos(exps))
    out = {}
    for name, f in ansatz.items():
        if not f.is_numeric():
            raise ValueError(f"{name} has symbolic coefficients")
        atoms = []
        for t in f.terms:
            atoms.append(Atom(Fraction(t.coeff.constant_value()), endos[t.exp], t.order))
        out[name] = AdditiveModel(atoms)
    return out


# --------------------------------------------------------------------------
# sample checks

@dataclass
class SampleVerdict:
    passed: bool
    seed: int
    samples: list          # (x, residual) pairs as strings
    first_failure: int | None = None

    def to_dict(self) -> dict:
        return {"passed": self.passed, "seed": self.seed, "n_samples": len(self.samples),
                "first_failure": self.first_failure,
                "samples": [{"x": x, "residual": r} for x, r in self.samples]}


def equation_value(spec: EquationSpec, models: Mapping, x: RationalFunction) -> RationalFunction:
    acc = RationalFunction(0)
    for t in spec.terms:
        f, g = models[t.f_ref], models[t.g_ref]
        acc = acc + Fraction(t.scalar) * f(x ** t.p) * g(x) ** t.q
    return acc


def check_equation_samples(spec: EquationSpec, models: Mapping, n_samples: int = 20,
                           seed: int = 0) -> SampleVerdict:
    missing = [n for n in spec.function_names() if n not in models]
    if missing:
        raise ValueError(f"no model for {', '.join(missing)}")
    rng = random.Random(seed)
    samples, first = [], None
    for i in range(n_samples):
        x = random_rf(rng)
        r = equation_value(spec, models, x)
        samples.append((str(x), str(r)))
        if first is None and not r.is_zero():
            first = i
    return SampleVerdict(first is None, seed, samples, first)


def equivalence_transport(models: Mapping, r) -> dict:
    """Post-compose every model with phi_r."""
    return {name: m.post_compose(r) for name, m in models.items()}


# --------------------------------------------------------------------------
# polarization

def diagonal(factors: Sequence[AdditiveModel], x) -> RationalFunction:
    acc = RationalFunction(1)
    for f in factors:
        acc = acc * f(x)
    return acc


def difference_polarize(factors: Sequence[AdditiveModel], x, ys: Sequence) -> RationalFunction:
    """Delta_{y_1} ... Delta_{y_m} of x -> prod_i factors[i](x)."""
    if not ys:
        raise ValueError("need at least one increment")
    x = RationalFunction.coerce(x)
    ys = [RationalFunction.coerce(y) for y in ys]
    m = len(ys)
    acc = RationalFunction(0)
    for k in range(m + 1):
        for S in combinations(range(m), k):
            pt = x
            for j in S:
                pt = pt + ys[j]
            term = diagonal(factors, pt)
            acc = acc + term if (m - k) % 2 == 0 else acc - term
    return acc


def multiadditive(factors: Sequence[AdditiveModel], ys: Sequence) -> RationalFunction:
    """A(y_1, ..., y_n) = prod_i factors[i](y_i)."""
    acc = RationalFunction(1)
    for f, y in zip(factors, ys):
        acc = acc * f(y)
    return acc


# --------------------------------------------------------------------------
# property checks

def leibniz_defect(model: AdditiveModel, a, b) -> RationalFunction:
    """model(ab) - model(a) b - a model(b)."""
    a, b = RationalFunction.coerce(a), RationalFunction.coerce(b)
    return model(a * b) - model(a) * b - a * model(b)


def property_suite(model: AdditiveModel, n_pairs: int = 100, seed: int = 0) -> dict:
    rng = random.Random(seed)
    pairs = [(random_rf(rng), random_rf(rng)) for _ in range(n_pairs)]
    report = {"seed": seed, "pairs": n_pairs,
              "additive": all(model(a + b) == model(a) + model(b) for a, b in pairs)}
    if len(model.atoms) == 1:
        at = model.atoms[0]
        if at.order == 1 and at.endo == T:
            report["leibniz"] = all(leibniz_defect(model, a, b).is_zero() for a, b in pairs)
        if at.order == 0 and at.scalar == 1:
            report["multiplicative"] = all(model(a * b) == model(a) * model(b) for a, b in pairs)
    return report


def second_order_leibniz_witness() -> dict:
    """d^2 is not a first-order derivation: d^2(t t) = 2 while the first
    order rule gives d^2(t) t + t d^2(t) = 0."""
    d2 = AdditiveModel.derivation(2)
    lhs = d2(T * T)
    rhs = d2(T) * T + T * d2(T)
    return {"x": "t", "y": "t", "d2(xy)": str(lhs), "first_order_rule": str(rhs),
            "violates": lhs != rhs}

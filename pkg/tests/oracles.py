"""Independent reference computations built on sympy.

None of these share code with funceq beyond the data types used to
compare results.
"""

from fractions import Fraction

import sympy as sp

from funceq.sympoly import Generator, Monomial, SymPoly, UnknownPoly

t = sp.Symbol("t")


def _gen_symbol(g: Generator) -> sp.Symbol:
    return sp.Symbol(f"G_{g.var}_{g.exp}_{g.order}")


def _parse_gen(sym: sp.Symbol) -> Generator:
    _, v, e, o = sym.name.split("_")
    return Generator(int(v), int(e), int(o))


def from_sympy(expr, gens) -> SymPoly:
    """Polynomial in generator symbols with rational coefficients -> SymPoly."""
    expr = sp.expand(expr)
    if expr == 0:
        return SymPoly.zero()
    poly = sp.Poly(expr, *gens)
    terms = {}
    for exps, c in poly.terms():
        mono = Monomial((_parse_gen(s), e) for s, e in zip(gens, exps))
        terms[mono] = Fraction(int(c.p), int(c.q))
    return SymPoly(terms)


def to_sympy(poly: SymPoly):
    acc = sp.Integer(0)
    for m, c in poly.sorted_terms():
        coeff = sp.Integer(0)
        for um, v in c.terms.items():
            v = Fraction(v)
            term = sp.Rational(v.numerator, v.denominator)
            for name, e in um:
                term *= sp.Symbol(name) ** e
            coeff += term
        mon = sp.Integer(1)
        for g, e in m:
            mon *= _gen_symbol(g) ** e
        acc += coeff * mon
    return sp.expand(acc)


def deriv_power(j: int, k: int, p: int) -> SymPoly:
    """d^k (x^p) by sympy differentiation of X(t)^p, with X^(l) -> G(0, j, l)."""
    X = sp.Function("X")(t)
    expr = sp.diff(X ** p, t, k) if k else X ** p
    gens = [_gen_symbol(Generator(0, j, l)) for l in range(k + 1)]
    # replace highest derivatives first so lower ones do not clobber them
    for l in range(k, 0, -1):
        expr = expr.subs(sp.Derivative(X, (t, l)), gens[l])
    expr = expr.subs(X, gens[0])
    return from_sympy(expr, gens)


def det(M) -> int:
    return int(sp.Matrix(M).det())


def rank(M) -> int:
    return sp.Matrix(M).rank()


def unknown_eval(c: UnknownPoly, values) -> Fraction:
    return Fraction(c.evaluate(values))


def rf_to_sympy(r):
    """RationalFunction -> sympy expression in t."""
    num = sum((int(c) * t ** i for i, c in enumerate(r.num.coeffs())), sp.Integer(0))
    den = sum((int(c) * t ** i for i, c in enumerate(r.den.coeffs())), sp.Integer(0))
    return num / den


def rf_equal(r, expr) -> bool:
    return sp.simplify(rf_to_sympy(r) - expr) == 0

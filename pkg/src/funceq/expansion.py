"""Expansion of m_j(d^k(x^p)) in the generators m_j(d^l(x)).

Three independent routes are provided and are expected to agree exactly:

* ``expand_deriv_power``: sum over multisets of derivation orders
  (l_1 >= ... >= l_p, sum k) with multinomial weight times the number of
  distinct orderings.
* ``expand_deriv_power_partition``: sum over multiplicity vectors
  (j_1, ..., j_s) with sum i*j_i = k, weighted by a falling factorial.
* ``leibniz_oracle``: start from m_j(x)^p and apply the formal derivation
  k times via the product rule.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb, factorial, prod

from .sympoly import Generator, Monomial, SymPoly, UnknownPoly, _uadd_into


def _partitions_at_most(k: int, parts: int, largest: int | None = None):
    """Non-increasing tuples of positive ints summing to k, length <= parts."""
    if largest is None:
        largest = k
    if k == 0:
        yield ()
        return
    if parts == 0:
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions_at_most(k - first, parts - 1, first):
            yield (first,) + rest


def _check(j: int, k: int, p: int) -> None:
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if k < 0 or j < 0:
        raise ValueError("j and k must be nonnegative")


@lru_cache(maxsize=4096)
def expand_deriv_power(j: int, k: int, p: int) -> SymPoly:
    """m_j(d^k(x^p)) via the multinomial formula over merged multisets."""
    _check(j, k, p)
    kf = factorial(k)
    pf = factorial(p)
    terms = {}
    for parts in _partitions_at_most(k, p):
        full = parts + (0,) * (p - len(parts))
        mult: dict = {}
        for l in full:
            mult[l] = mult.get(l, 0) + 1
        multinom = kf // prod(factorial(l) for l in full)
        arrangements = pf // prod(factorial(c) for c in mult.values())
        m = Monomial((Generator(0, j, l), c) for l, c in mult.items())
        terms[m] = UnknownPoly.const(multinom * arrangements)
    return SymPoly(terms)


def deriv_partitions(k: int, p: int):
    """Multiplicity vectors (j_1..j_k) with sum i*j_i = k and sum j_i <= p."""
    out = []

    def rec(i, remaining, used, acc):
        if i == 0:
            if remaining == 0:
                out.append(tuple(reversed(acc)))
            return
        for c in range(min(remaining // i, p - used), -1, -1):
            acc.append(c)
            rec(i - 1, remaining - i * c, used + c, acc)
            acc.pop()

    rec(k, k, 0, [])
    return out


@lru_cache(maxsize=4096)
def expand_deriv_power_partition(j: int, k: int, p: int) -> SymPoly:
    """m_j(d^k(x^p)) via multiplicity vectors and falling factorials."""
    _check(j, k, p)
    kf = factorial(k)
    terms = {}
    for mv in deriv_partitions(k, p):
        used = sum(mv)
        # falling factorial p (p-1) ... (p-used+1): which slots carry a derivative
        falling = factorial(p) // factorial(p - used)
        denom = 1
        for i, c in enumerate(mv, start=1):
            denom *= factorial(i) ** c * factorial(c)
        coeff = kf * falling // denom
        factors = [(Generator(0, j, i), c) for i, c in enumerate(mv, start=1)]
        factors.append((Generator(0, j, 0), p - used))
        terms[Monomial(factors)] = UnknownPoly.const(coeff)
    return SymPoly(terms)


def derive(poly: SymPoly) -> SymPoly:
    """Formal derivation G(v,j,l) -> G(v,j,l+1) extended by Leibniz."""
    acc: dict = {}
    for m, c in poly.terms.items():
        for idx, (g, e) in enumerate(m):
            items = list(m)
            if e == 1:
                del items[idx]
            else:
                items[idx] = (g, e - 1)
            up = Generator(g.var, g.exp, g.order + 1)
            new = Monomial(items + [(up, 1)])
            d = acc.get(new)
            scaled = {kk: v * e for kk, v in c.terms.items()}
            if d is None:
                acc[new] = scaled
            else:
                _uadd_into(d, scaled)
    return SymPoly._finish(acc)


def leibniz_oracle(j: int, k: int, p: int) -> SymPoly:
    _check(j, k, p)
    poly = SymPoly.gen(Generator(0, j, 0), 1, p)
    for _ in range(k):
        poly = derive(poly)
    return poly


# --------------------------------------------------------------------------
# function substitution

def function_terms(f):
    """Normalize a function description to [(exp, order, UnknownPoly)].

    Accepts an object with ``.terms`` of (exp, order, coeff) records or a
    SymPoly that is linear in single-slot generators.
    """
    if isinstance(f, SymPoly):
        out = []
        for m, c in f.sorted_terms():
            if len(m) != 1 or m[0][1] != 1:
                raise ValueError(f"not an additive function: monomial {m}")
            g = m[0][0]
            if g.var != 0:
                raise ValueError(f"multivariate generator {g} in a function")
            out.append((g.exp, g.order, c))
        return out
    return [(t.exp, t.order, UnknownPoly.coerce(t.coeff)) for t in f.terms]


def function_as_poly(f, var: int = 0) -> SymPoly:
    acc = SymPoly.zero()
    for exp, order, c in function_terms(f):
        acc = acc + SymPoly.gen(Generator(var, exp, order), c)
    return acc


def substitute_power(f, p: int) -> SymPoly:
    """f(x^p) for additive f = sum c * m_j(d^k(x))."""
    if p < 1:
        raise ValueError("p must be >= 1")
    acc = SymPoly.zero()
    for exp, order, c in function_terms(f):
        acc = acc + expand_deriv_power(exp, order, p) * c
    return acc


def scale_substitution(poly: SymPoly) -> dict:
    """Coefficients of r^deg after x -> r x, i.e. the grading by total degree."""
    return poly.homogeneous_components()


# --------------------------------------------------------------------------
# multivariate analogue used by symmetrization

@lru_cache(maxsize=4096)
def _compositions(k: int, p: int):
    """All (l_1..l_p) >= 0 with sum k, paired with k!/prod l_i!."""
    out = []
    kf = factorial(k)

    def rec(i, remaining, acc):
        if i == p - 1:
            full = acc + [remaining]
            out.append((tuple(full), kf // prod(factorial(l) for l in full)))
            return
        for l in range(remaining, -1, -1):
            rec(i + 1, remaining - l, acc + [l])

    rec(0, k, [])
    return tuple(out)


def expand_deriv_product(j: int, k: int, slots) -> SymPoly:
    """m_j(d^k(x_{s_1} ... x_{s_p})) over distinct variable slots."""
    slots = tuple(slots)
    if len(set(slots)) != len(slots) or not slots:
        raise ValueError("slots must be nonempty and distinct")
    terms = {}
    for parts, c in _compositions(k, len(slots)):
        m = Monomial((Generator(s, j, l), 1) for s, l in zip(slots, parts))
        terms[m] = UnknownPoly.const(c)
    return SymPoly(terms)


def substitute_product(f, slots) -> SymPoly:
    acc = SymPoly.zero()
    for exp, order, c in function_terms(f):
        acc = acc + expand_deriv_product(exp, order, slots) * c
    return acc


def slot_subsets(n: int, p: int):
    return combinations(range(n), p)


def binomial_weight(n: int, p: int) -> int:
    return comb(n, p)

"""Sparse polynomials over abstract generators with coefficients in Q[unknowns].

Two layers:

* ``UnknownPoly``: polynomial in named unknowns (a, b_1, lam_1_0 ...) with
  exact rational coefficients.
* ``SymPoly``: polynomial in ``Generator`` symbols m_j(d^k(x_v)) whose
  coefficients are ``UnknownPoly`` values.

Both are immutable after construction.  Coefficients are stored as ``int``
when integral and ``Fraction`` otherwise, which keeps the common all-integer
case fast while staying exact.
"""

from __future__ import annotations

import re
import sys
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Union

Number = Union[int, Fraction]

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def as_number(c) -> Number:
    """Coerce to the canonical exact scalar (int when integral)."""
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, str):
        c = Fraction(c.strip())
        return c.numerator if c.denominator == 1 else c
    raise TypeError(f"not an exact rational: {c!r}")


def fmt_number(c: Number) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


# --------------------------------------------------------------------------
# UnknownPoly

# A monomial in unknowns: sorted tuple of (name, exponent) pairs.
UMono = tuple


def _umono_mul(a: UMono, b: UMono) -> UMono:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        x, y = a[i], b[j]
        if x[0] == y[0]:
            out.append((x[0], x[1] + y[1]))
            i += 1
            j += 1
        elif x[0] < y[0]:
            out.append(x)
            i += 1
        else:
            out.append(y)
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _uadd_into(acc: dict, other: Mapping, scale: Number = 1) -> None:
    for k, v in other.items():
        s = acc.get(k, 0) + v * scale
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


def _umul_raw(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            k = _umono_mul(k1, k2)
            s = out.get(k, 0) + c1 * c2
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def _clean(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if v:
            if isinstance(v, Fraction) and v.denominator == 1:
                v = v.numerator
            out[k] = v
    return out


def _intern(name: str) -> str:
    if not isinstance(name, str) or not NAME_RE.match(name):
        raise ValueError(f"invalid unknown name: {name!r}")
    return sys.intern(name)


class UnknownPoly:
    """Polynomial in named unknowns over Q."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        self.terms = _clean(terms) if terms else {}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "UnknownPoly":
        # terms must already be clean
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c) -> "UnknownPoly":
        c = as_number(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "UnknownPoly":
        if power < 0:
            raise ValueError("negative power")
        if power == 0:
            return cls.const(1)
        return cls._raw({((_intern(name), power),): 1})

    @classmethod
    def coerce(cls, x) -> "UnknownPoly":
        if isinstance(x, UnknownPoly):
            return x
        if isinstance(x, str) and NAME_RE.match(x):
            return cls.var(x)
        return cls.const(x)

    # -- predicates / accessors
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> Number:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.terms.get((), 0)

    def unknowns(self) -> set:
        out = set()
        for k in self.terms:
            out.update(n for n, _ in k)
        return out

    def degree(self) -> int:
        return max((sum(e for _, e in k) for k in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        best = -1 if not self.terms else 0
        for k in self.terms:
            for n, e in k:
                if n == name and e > best:
                    best = e
        return best

    def coeff_in(self, name: str, e: int) -> "UnknownPoly":
        """Coefficient of name^e, viewing self as a polynomial in ``name``."""
        out = {}
        for k, c in self.terms.items():
            got = 0
            rest = []
            for n, ee in k:
                if n == name:
                    got = ee
                else:
                    rest.append((n, ee))
            if got == e:
                out[tuple(rest)] = c
        return UnknownPoly._raw(out)

    # -- arithmetic
    def __add__(self, other) -> "UnknownPoly":
        other = UnknownPoly.coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        _uadd_into(acc, other.terms)
        return UnknownPoly(acc)

    __radd__ = __add__

    def __neg__(self) -> "UnknownPoly":
        return UnknownPoly._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "UnknownPoly":
        return self + (-UnknownPoly.coerce(other))

    def __rsub__(self, other) -> "UnknownPoly":
        return UnknownPoly.coerce(other) + (-self)

    def __mul__(self, other) -> "UnknownPoly":
        if isinstance(other, SymPoly):
            return NotImplemented
        other = UnknownPoly.coerce(other)
        if not self.terms or not other.terms:
            return UnknownPoly._raw({})
        return UnknownPoly(_umul_raw(self.terms, other.terms))

    __rmul__ = __mul__

    def __truediv__(self, c) -> "UnknownPoly":
        if isinstance(c, UnknownPoly):
            if not c.is_constant():
                raise TypeError("division by a non-constant polynomial")
            c = c.constant_value()
        c = as_number(c)
        if not c:
            raise ZeroDivisionError("division of UnknownPoly by zero")
        inv = Fraction(1, 1) / c
        return UnknownPoly({k: v * inv for k, v in self.terms.items()})

    def __pow__(self, e: int) -> "UnknownPoly":
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative int")
        result = UnknownPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- evaluation / substitution
    def substitute(self, mapping: Mapping) -> "UnknownPoly":
        """Replace unknowns by UnknownPoly/number values; others are kept."""
        if not mapping:
            return self
        vals = {k: UnknownPoly.coerce(v) for k, v in mapping.items()}
        powcache: dict = {}
        acc: dict = {}
        for k, c in self.terms.items():
            term = {(): c}
            keep = []
            for n, e in k:
                if n in vals:
                    key = (n, e)
                    if key not in powcache:
                        powcache[key] = (vals[n] ** e).terms
                    term = _umul_raw(term, powcache[key])
                else:
                    keep.append((n, e))
            if keep:
                term = _umul_raw(term, {tuple(keep): 1})
            _uadd_into(acc, term)
        return UnknownPoly(acc)

    def evaluate(self, assignment: Mapping) -> Number:
        """Exact value; every unknown must be assigned."""
        total = 0
        for k, c in self.terms.items():
            v = c
            for n, e in k:
                try:
                    v = v * as_number(assignment[n]) ** e
                except KeyError:
                    raise KeyError(f"unassigned unknown {n!r}") from None
            total += v
        return as_number(total) if not isinstance(total, int) else total

    # -- comparison / hashing
    def __eq__(self, other) -> bool:
        if isinstance(other, UnknownPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = as_number(other)
            return self.terms == ({(): c} if c else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- rendering
    def sorted_items(self):
        # higher total degree first, then lexicographic on the unknown tuple
        return sorted(self.terms.items(),
                      key=lambda kv: (-sum(e for _, e in kv[0]), kv[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.sorted_items():
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in k)
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{fmt_number(a)}*{mono}"
            else:
                body = fmt_number(a)
            parts.append((neg, body))
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self) -> str:
        return f"UnknownPoly({str(self)!r})"


# --------------------------------------------------------------------------
# Generators and monomials

class Generator(NamedTuple):
    """m_exp(d^order(x_var)); exp 0 is the identity exponential."""
    var: int
    exp: int
    order: int

    def render(self, slots: bool = False) -> str:
        if self.exp == 0:
            s = "x" if self.order == 0 else ("d" if self.order == 1 else f"d{self.order}")
        else:
            s = f"m{self.exp}"
            if self.order == 1:
                s += "d"
            elif self.order > 1:
                s += f"d{self.order}"
        if slots:
            s += f"@{self.var}"
        return s


def G(var: int, exp: int, order: int) -> Generator:
    if min(var, exp, order) < 0:
        raise ValueError("generator indices must be nonnegative")
    return Generator(var, exp, order)


class Monomial(tuple):
    """Sorted tuple of (Generator, positive exponent) pairs."""

    __slots__ = ()

    def __new__(cls, factors: Iterable = ()):
        acc: dict = {}
        for g, e in factors:
            if not isinstance(g, Generator):
                g = Generator(*g)
            if e < 0:
                raise ValueError("negative exponent in monomial")
            if e:
                acc[g] = acc.get(g, 0) + e
        return tuple.__new__(cls, sorted(acc.items()))

    @classmethod
    def _raw(cls, items) -> "Monomial":
        return tuple.__new__(cls, items)

    @classmethod
    def of(cls, g: Generator, e: int = 1) -> "Monomial":
        return cls._raw(((g, e),)) if e else ONE_MONO

    @property
    def degree(self) -> int:
        return sum(e for _, e in self)

    @property
    def weight(self) -> int:
        """Order-weighted degree: sum of order * exponent."""
        return sum(g.order * e for g, e in self)

    def sort_key(self):
        return (self.degree, tuple(self))

    def generators(self):
        return [g for g, _ in self]

    def times(self, other: "Monomial") -> "Monomial":
        if not self:
            return other
        if not other:
            return self
        out = []
        i = j = 0
        na, nb = len(self), len(other)
        while i < na and j < nb:
            x, y = self[i], other[j]
            if x[0] == y[0]:
                out.append((x[0], x[1] + y[1]))
                i += 1
                j += 1
            elif x[0] < y[0]:
                out.append(x)
                i += 1
            else:
                out.append(y)
                j += 1
        out.extend(self[i:])
        out.extend(other[j:])
        return Monomial._raw(out)

    def map_generators(self, fn) -> "Monomial":
        return Monomial((fn(g), e) for g, e in self)

    def render(self, slots: bool = False) -> str:
        if not self:
            return "1"
        return "*".join(g.render(slots) if e == 1 else f"{g.render(slots)}^{e}"
                        for g, e in self)

    def __str__(self) -> str:
        return self.render(any(g.var for g, _ in self))

    def __repr__(self) -> str:
        return f"Monomial({str(self)})"


ONE_MONO = Monomial._raw(())


# --------------------------------------------------------------------------
# SymPoly

class SymPoly:
    """Polynomial in Generators with UnknownPoly coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        out = {}
        if terms:
            for m, c in terms.items():
                if not isinstance(m, Monomial):
                    m = Monomial(m)
                c = UnknownPoly.coerce(c)
                if c.terms:
                    out[m] = c
        self.terms = out

    @classmethod
    def _raw(cls, terms: dict) -> "SymPoly":
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls) -> "SymPoly":
        return cls._raw({})

    @classmethod
    def one(cls) -> "SymPoly":
        return cls.const(1)

    @classmethod
    def const(cls, c) -> "SymPoly":
        c = UnknownPoly.coerce(c)
        return cls._raw({ONE_MONO: c} if c.terms else {})

    @classmethod
    def gen(cls, g: Generator, coeff=1, e: int = 1) -> "SymPoly":
        c = UnknownPoly.coerce(coeff)
        return cls._raw({Monomial.of(g, e): c} if c.terms else {})

    @classmethod
    def coerce(cls, x) -> "SymPoly":
        if isinstance(x, SymPoly):
            return x
        return cls.const(x)

    # -- accessors
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, m: Monomial) -> UnknownPoly:
        if not isinstance(m, Monomial):
            m = Monomial(m)
        return self.terms.get(m, UnknownPoly._raw({}))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def monomials(self):
        return [m for m, _ in self.sorted_terms()]

    def unknowns(self) -> set:
        out = set()
        for c in self.terms.values():
            out |= c.unknowns()
        return out

    def generators(self) -> set:
        out = set()
        for m in self.terms:
            out.update(g for g, _ in m)
        return out

    def is_numeric(self) -> bool:
        return all(c.is_constant() for c in self.terms.values())

    # -- arithmetic
    def __add__(self, other) -> "SymPoly":
        other = SymPoly.coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = {m: dict(c.terms) for m, c in self.terms.items()}
        for m, c in other.terms.items():
            d = acc.get(m)
            if d is None:
                acc[m] = dict(c.terms)
            else:
                _uadd_into(d, c.terms)
        return SymPoly._finish(acc)

    __radd__ = __add__

    def __neg__(self) -> "SymPoly":
        return SymPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "SymPoly":
        return self + (-SymPoly.coerce(other))

    def __rsub__(self, other) -> "SymPoly":
        return SymPoly.coerce(other) + (-self)

    def __mul__(self, other) -> "SymPoly":
        if not isinstance(other, SymPoly):
            c = UnknownPoly.coerce(other)
            if not c.terms or not self.terms:
                return SymPoly._raw({})
            if c.terms == {(): 1}:
                return self
            return SymPoly._finish({m: _umul_raw(v.terms, c.terms)
                                    for m, v in self.terms.items()})
        if not self.terms or not other.terms:
            return SymPoly._raw({})
        acc: dict = {}
        for m1, c1 in self.terms.items():
            t1 = c1.terms
            for m2, c2 in other.terms.items():
                m = m1.times(m2)
                prod = _umul_raw(t1, c2.terms)
                d = acc.get(m)
                if d is None:
                    acc[m] = prod
                else:
                    _uadd_into(d, prod)
        return SymPoly._finish(acc)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "SymPoly":
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative int")
        result = SymPoly.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    @staticmethod
    def _finish(acc: dict) -> "SymPoly":
        out = {}
        for m, d in acc.items():
            d = _clean(d)
            if d:
                out[m] = UnknownPoly._raw(d)
        return SymPoly._raw(out)

    # -- transforms
    def map_coefficients(self, fn) -> "SymPoly":
        return SymPoly({m: fn(c) for m, c in self.terms.items()})

    def substitute_unknowns(self, mapping: Mapping) -> "SymPoly":
        return self.map_coefficients(lambda c: c.substitute(mapping))

    def map_generators(self, fn) -> "SymPoly":
        acc: dict = {}
        for m, c in self.terms.items():
            m2 = m.map_generators(fn)
            d = acc.get(m2)
            if d is None:
                acc[m2] = dict(c.terms)
            else:
                _uadd_into(d, c.terms)
        return SymPoly._finish(acc)

    def diagonal(self) -> "SymPoly":
        """Send every variable slot to slot 0."""
        return self.map_generators(lambda g: Generator(0, g.exp, g.order))

    def permute_slots(self, perm) -> "SymPoly":
        return self.map_generators(lambda g: Generator(perm[g.var], g.exp, g.order))

    def relabel_exponentials(self, mapping: Mapping) -> "SymPoly":
        return self.map_generators(
            lambda g: Generator(g.var, mapping.get(g.exp, g.exp), g.order))

    def homogeneous_components(self) -> dict:
        comps: dict = {}
        for m, c in self.terms.items():
            comps.setdefault(m.degree, {})[m] = c
        return {deg: SymPoly._raw(comps[deg]) for deg in sorted(comps)}

    def set_all_generators(self, value=1) -> UnknownPoly:
        """Evaluate every generator at ``value`` (an exact scalar)."""
        acc: dict = {}
        v = as_number(value)
        for m, c in self.terms.items():
            w = v ** m.degree
            _uadd_into(acc, c.terms, w)
        return UnknownPoly(acc)

    # -- comparison
    def __eq__(self, other) -> bool:
        if isinstance(other, SymPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, UnknownPoly)) and not isinstance(other, bool):
            return self.terms == SymPoly.const(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- rendering
    def render(self) -> str:
        if not self.terms:
            return "0"
        slots = any(g.var for m in self.terms for g, _ in m)
        parts = []
        for m, c in self.sorted_terms():
            ms = m.render(slots)
            if c.is_constant():
                v = c.constant_value()
                neg = v < 0
                a = -v if neg else v
                if m:
                    body = ms if a == 1 else f"{fmt_number(a)}*{ms}"
                else:
                    body = fmt_number(a)
                parts.append((neg, body))
            else:
                cs = str(c)
                body = f"({cs})" if not m else f"({cs})*{ms}"
                parts.append((False, body))
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    __str__ = render

    def __repr__(self) -> str:
        return f"SymPoly({self.render()!r})"


# --------------------------------------------------------------------------
# functional API

def poly_add(a: SymPoly, b: SymPoly) -> SymPoly:
    return a + b


def poly_mul(a: SymPoly, b: SymPoly) -> SymPoly:
    return a * b


def poly_pow(a: SymPoly, e: int) -> SymPoly:
    return a ** e


def coeff_of(p: SymPoly, m: Monomial) -> UnknownPoly:
    return p.coeff(m)


def gen_poly(var: int, exp: int, order: int, coeff=1) -> SymPoly:
    return SymPoly.gen(G(var, exp, order), coeff)


def mono(*factors) -> Monomial:
    """mono((G, e), ...) or mono(G, G, ...) convenience constructor."""
    items = []
    for f in factors:
        if isinstance(f, Generator):
            items.append((f, 1))
        else:
            items.append((f[0] if isinstance(f[0], Generator) else Generator(*f[0]), f[1]))
    return Monomial(items)

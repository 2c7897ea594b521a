"""Recursive-descent parsers: the equation DSL and small algebraic expressions.

Equation grammar::

    eq    := ['-'] term (('+' | '-') term)* '=' '0'
    term  := [coeff '*'] NAME '(' 'x' ['^' INT] ')' ['*'] NAME '(' 'x' ')' ['^' INT]
    coeff := INT | INT '/' INT

Expressions (ansatz coefficients, substitution endomorphisms) use the usual
'+', '-', '*', '/', '^' and parentheses over integers and identifiers.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, NamedTuple

from .concrete import RationalFunction, T
from .equation import EquationSpec, Term
from .errors import ParseError
from .sympoly import UnknownPoly, as_number, fmt_number

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()=])|(?P<bad>\S))")


class Token(NamedTuple):
    kind: str     # int | name | op | end
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    toks = []
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(pos):
        ln = max(i for i, s in enumerate(line_starts) if s <= pos)
        return ln + 1, pos - line_starts[ln] + 1

    # drop comments, keeping offsets
    text = re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        kind = m.lastgroup
        if kind is None:
            break
        start = m.start(kind)
        ln, col = where(start)
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group(kind)!r}", ln, col)
        toks.append(Token(kind, m.group(kind), ln, col))
        pos = m.end()
    ln, col = where(len(text))
    toks.append(Token("end", "", ln, col))
    return toks


class _Stream:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "end":
            self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.cur.kind == "op" and self.cur.text == text:
            self.take()
            return True
        return False

    def expect(self, text: str, what: str | None = None) -> Token:
        t = self.cur
        if t.kind == "op" and t.text == text:
            return self.take()
        raise self.error(f"expected {what or repr(text)}, found {self.describe(t)}", t)

    def expect_kind(self, kind: str, what: str) -> Token:
        t = self.cur
        if t.kind != kind:
            raise self.error(f"expected {what}, found {self.describe(t)}", t)
        return self.take()

    @staticmethod
    def describe(t: Token) -> str:
        return "end of input" if t.kind == "end" else repr(t.text)

    @staticmethod
    def error(msg: str, t: Token) -> ParseError:
        return ParseError(msg, t.line, t.col)


# --------------------------------------------------------------------------
# equations

def _exponent(s: _Stream) -> int:
    if not s.accept("^"):
        return 1
    t = s.cur
    if t.kind == "op" and t.text == "-":
        raise s.error("nonpositive exponent", t)
    t = s.expect_kind("int", "an exponent")
    e = int(t.text)
    if e <= 0:
        raise s.error("nonpositive exponent", t)
    return e


def _term(s: _Stream, sign: int) -> Term:
    scalar = Fraction(sign)
    if s.cur.kind == "int":
        t = s.take()
        c = Fraction(int(t.text))
        if s.accept("/"):
            d = s.expect_kind("int", "a denominator")
            if int(d.text) == 0:
                raise s.error("zero denominator", d)
            c /= int(d.text)
        scalar *= c
        s.expect("*")
    f = s.expect_kind("name", "a function name").text
    s.expect("(")
    x = s.expect_kind("name", "'x'")
    if x.text != "x":
        raise s.error(f"expected 'x', found {x.text!r}", x)
    p = _exponent(s)
    s.expect(")")
    s.accept("*")
    g = s.expect_kind("name", "a function name").text
    s.expect("(")
    x = s.expect_kind("name", "'x'")
    if x.text != "x":
        raise s.error(f"expected 'x', found {x.text!r}", x)
    if s.cur.kind == "op" and s.cur.text == "^":
        raise s.error("the argument of the second function must be plain x", s.cur)
    s.expect(")")
    q = _exponent(s)
    return Term(p, q, f, g, scalar)


def parse_equation(text: str) -> EquationSpec:
    s = _Stream(text)
    terms = []
    sign = -1 if s.accept("-") else 1
    terms.append(_term(s, sign))
    while True:
        if s.accept("+"):
            terms.append(_term(s, 1))
        elif s.accept("-"):
            terms.append(_term(s, -1))
        else:
            break
    s.expect("=", "'+', '-' or '='")
    z = s.expect_kind("int", "'0'")
    if int(z.text) != 0:
        raise s.error("right-hand side must be 0", z)
    if s.cur.kind != "end":
        raise s.error(f"unexpected {s.describe(s.cur)} after '= 0'", s.cur)
    return EquationSpec(tuple(terms))


def render_equation(spec: EquationSpec) -> str:
    parts = []
    for i, t in enumerate(spec.terms):
        c = Fraction(t.scalar)
        mag = abs(c)
        body = "" if mag == 1 else f"{fmt_number(as_number(mag))}*"
        body += f"{t.f_ref}(x^{t.p})" if t.p != 1 else f"{t.f_ref}(x)"
        body += f"*{t.g_ref}(x)^{t.q}" if t.q != 1 else f"*{t.g_ref}(x)"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) + " = 0"


# --------------------------------------------------------------------------
# expressions

def parse_expression(text: str, atom: Callable, number: Callable = Fraction):
    """Evaluate an arithmetic expression; ``atom(name, token)`` gives the
    value of an identifier, ``number(int)`` of an integer literal."""
    s = _Stream(text)

    def expr():
        v = term()
        while True:
            if s.accept("+"):
                v = v + term()
            elif s.accept("-"):
                v = v - term()
            else:
                return v

    def term():
        v = unary()
        while True:
            if s.accept("*"):
                v = v * unary()
            elif s.cur.kind == "op" and s.cur.text == "/":
                t = s.take()
                d = unary()
                try:
                    v = v / d
                except ZeroDivisionError:
                    raise s.error("division by zero", t) from None
                except (TypeError, ValueError) as e:
                    raise s.error(str(e) or "unsupported division", t) from None
            else:
                return v

    def unary():
        if s.accept("-"):
            return -unary()
        if s.accept("+"):
            return unary()
        return power()

    def power():
        v = primary()
        if s.accept("^"):
            neg = s.accept("-")
            t = s.expect_kind("int", "an integer exponent")
            e = int(t.text)
            try:
                v = v ** (-e if neg else e)
            except ZeroDivisionError:
                raise s.error("division by zero", t) from None
            except (TypeError, ValueError) as err:
                raise s.error(str(err) or "unsupported power", t) from None
        return v

    def primary():
        t = s.cur
        if t.kind == "int":
            s.take()
            return number(int(t.text))
        if t.kind == "name":
            s.take()
            return atom(t.text, t)
        if s.accept("("):
            v = expr()
            s.expect(")")
            return v
        raise s.error(f"unexpected {s.describe(t)}", t)

    v = expr()
    if s.cur.kind != "end":
        raise s.error(f"unexpected {s.describe(s.cur)}", s.cur)
    return v


def parse_unknown_poly(text) -> UnknownPoly:
    """Coefficient expressions: rationals and unknown identifiers."""
    if isinstance(text, (int, Fraction)):
        return UnknownPoly.const(text)

    return parse_expression(str(text), lambda name, tok: UnknownPoly.var(name), UnknownPoly.const)


def parse_rational_function(text) -> RationalFunction:
    """Expressions in the single variable t."""
    if isinstance(text, (int, Fraction)):
        return RationalFunction.coerce(text)

    def atom(name, tok):
        if name != "t":
            raise ParseError(f"unknown symbol {name!r}; only t is allowed", tok.line, tok.col)
        return T

    return parse_expression(str(text), atom, RationalFunction)

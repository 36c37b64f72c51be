"""A small language for q-hypergeometric sums.

    sum n>=0 of q^(n*(n+1)/2) / poch(-q, q, n)

``parse`` builds an AST (or raises ParseError with a position), ``to_text``
prints it canonically, ``min_degree_bound`` proves the sum terminates
q-adically and ``eval_expr`` expands it.  ``poch(a, q^k, n)`` is the
Pochhammer symbol (a; q^k)_n.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Union

from . import kernels
from .errors import DomainError, NonTerminatingSumError, NonUnitError, QMaassError
from .qseries import PuiseuxSeries, ps_mul

KEYWORDS = {"sum", "of", "poch", "q"}
MAX_SUM_DEPTH = 2
MAX_NESTING = 200
MAX_POCH_LENGTH = 10 ** 6


class ParseError(QMaassError, ValueError):
    def __init__(self, position: int, expected: str, found: str):
        super().__init__(f"at offset {position}: expected {expected}, found {found}")
        self.position = position
        self.expected = expected
        self.found = found


# --------------------------------------------------------------------------
# polynomials in the summation variables

class Poly:
    """Polynomial with Fraction coefficients; monomials are sorted (var, exp) tuples."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): Fraction(1)})

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Poly({poly_text(self)!r})"

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                exps = dict(m1)
                for v, k in m2:
                    exps[v] = exps.get(v, 0) + k
                m = tuple(sorted(exps.items()))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    def scale(self, c) -> "Poly":
        return Poly({m: v * c for m, v in self.terms.items()})

    @property
    def is_const(self) -> bool:
        return all(m == () for m in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def degree_in(self, var: str) -> int:
        return max((dict(m).get(var, 0) for m in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(k for _, k in m) for m in self.terms), default=0)

    def coefficient(self, var: str, k: int) -> "Poly":
        """Coefficient of var^k, as a polynomial in the other variables."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(var, 0) == k:
                d.pop(var, None)
                out[tuple(sorted(d.items()))] = c
        return Poly(out)

    def evaluate(self, env: dict) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, k in m:
                t *= Fraction(env[v]) ** k
            total += t
        return total

    def substitute(self, var: str, value) -> "Poly":
        out = Poly()
        for m, c in self.terms.items():
            d = dict(m)
            k = d.pop(var, 0)
            out = out + Poly({tuple(sorted(d.items())): c * Fraction(value) ** k})
        return out

    def is_affine_integer(self) -> bool:
        return self.total_degree() <= 1 and all(c.denominator == 1 for c in self.terms.values())


def _mono_text(m) -> str:
    return "*".join(v if k == 1 else f"{v}^{k}" for v, k in m)


def poly_text(p: Poly) -> str:
    if not p.terms:
        return "0"
    items = sorted(p.terms.items(), key=lambda mc: (-sum(k for _, k in mc[0]), mc[0]))
    out = []
    for i, (m, c) in enumerate(items):
        neg = c < 0
        a = -c if neg else c
        if m == ():
            body = str(a)
        elif a == 1:
            body = _mono_text(m)
        else:
            body = f"{a}*{_mono_text(m)}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# --------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class QPow:
    poly: Poly


@dataclass(frozen=True)
class SignPow:
    poly: Poly


@dataclass(frozen=True)
class Poch:
    """(a; q^step)_count with a = sign * q^offset (sign -1, offset 0 is a = -1)."""
    sign: int
    offset: Poly
    step: int
    count: Poly


@dataclass(frozen=True)
class Product:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Quotient:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sum:
    var: str
    lower: int
    body: "Expr"


Expr = Union[Const, QPow, SignPow, Poch, Product, Quotient, Sum]


# --------------------------------------------------------------------------
# printing

def _const_text(c: Fraction) -> str:
    return str(c)


def _base_text(sign: int, offset: Poly) -> str:
    if sign == -1 and offset == Poly():
        return "-1"
    head = "-q" if sign == -1 else "q"
    if offset == Poly.const(1):
        return head
    return f"{head}^({poly_text(offset)})"


def to_text(e: Expr) -> str:
    """Canonical text; parse(to_text(e)) == e."""
    if isinstance(e, Const):
        return _const_text(e.value)
    if isinstance(e, QPow):
        return f"q^({poly_text(e.poly)})"
    if isinstance(e, SignPow):
        return f"(-1)^({poly_text(e.poly)})"
    if isinstance(e, Poch):
        step = "q" if e.step == 1 else f"q^{e.step}"
        return f"poch({_base_text(e.sign, e.offset)}, {step}, {poly_text(e.count)})"
    if isinstance(e, Sum):
        return f"sum {e.var}>={e.lower} of {to_text(e.body)}"
    if isinstance(e, (Product, Quotient)):
        op = "*" if isinstance(e, Product) else "/"
        left = to_text(e.left)
        if isinstance(e.left, Sum):
            left = f"({left})"
        right = to_text(e.right)
        if isinstance(e.right, (Const, Product, Quotient, Sum)):
            right = f"({right})"
        return f"{left} {op} {right}"
    raise TypeError(f"not an expression node: {e!r}")


# --------------------------------------------------------------------------
# lexing

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<neg1>\(\s*-\s*1\s*\))
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<ge>>=)
  | (?P<punct>[()\,*/^+\-])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str   # int, ident, kw, neg1, ge, punct, eof
    text: str
    pos: int


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "eof" else repr(tok.text)


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(pos, "a token", repr(text[pos]))
        kind = m.lastgroup
        if kind != "ws":
            s = m.group()
            if kind == "ident" and s in KEYWORDS:
                kind = "kw"
            out.append(Token(kind, s, pos))
        pos = m.end()
    out.append(Token("eof", "", n))
    return out


# --------------------------------------------------------------------------
# parsing

class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0
        self.bound: list[str] = []
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def fail(self, expected: str):
        raise ParseError(self.tok.pos, expected, _describe(self.tok))

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        if not self.at(kind, text):
            self.fail(what or repr(text) if text else (what or kind))
        return self.advance()

    def nest(self):
        self.depth += 1
        if self.depth > MAX_NESTING:
            self.fail(f"at most {MAX_NESTING} nested parentheses")

    # expr := "sum" var ">=" int "of" term
    def parse_sum(self) -> Sum:
        self.expect("kw", "sum")
        if sum(1 for _ in self.bound) >= MAX_SUM_DEPTH:
            raise ParseError(self.toks[self.i - 1].pos, f"at most {MAX_SUM_DEPTH} nested sums", "'sum'")
        v = self.expect("ident", what="a summation variable")
        if v.text in self.bound:
            raise ParseError(v.pos, "a fresh summation variable", repr(v.text))
        self.expect("ge", what="'>='")
        lower = self.parse_signed_int()
        self.expect("kw", "of")
        self.bound.append(v.text)
        try:
            body = self.parse_term()
        finally:
            self.bound.pop()
        return Sum(v.text, lower, body)

    def parse_signed_int(self) -> int:
        neg = False
        if self.at("punct", "-"):
            self.advance()
            neg = True
        t = self.expect("int", what="an integer")
        return -int(t.text) if neg else int(t.text)

    def parse_term(self) -> Expr:
        node = self.parse_factor()
        while self.at("punct", "*") or self.at("punct", "/"):
            op = self.advance().text
            right = self.parse_factor()
            node = Product(node, right) if op == "*" else Quotient(node, right)
        return node

    def parse_factor(self) -> Expr:
        t = self.tok
        if t.kind == "kw" and t.text == "q":
            self.advance()
            self.expect("punct", "^")
            p = self._paren_poly()
            self._check_qpow(p, t.pos)
            return QPow(p)
        if t.kind == "kw" and t.text == "poch":
            return self.parse_poch()
        if t.kind == "kw" and t.text == "sum":
            return self.parse_sum()
        if t.kind == "neg1":
            self.advance()
            if not self.at("punct", "^"):
                return Const(Fraction(-1))
            self.advance()
            start = self.tok.pos
            p = self._paren_poly()
            if not p.is_affine_integer():
                raise ParseError(start, "an affine exponent with integer coefficients", poly_text(p))
            return SignPow(p)
        if t.kind == "int" or (t.kind == "punct" and t.text == "-"):
            return Const(self.parse_rational())
        if t.kind == "punct" and t.text == "(":
            self.advance()
            self.nest()
            node = self.parse_term()
            self.depth -= 1
            self.expect("punct", ")")
            return node
        self.fail("a factor (q^(...), poch(...), (-1)^(...), a rational, '(' or 'sum')")

    def parse_rational(self) -> Fraction:
        neg = False
        if self.at("punct", "-"):
            self.advance()
            neg = True
        num = int(self.expect("int", what="an integer").text)
        den = 1
        # p/q is a literal only when an integer follows the slash directly
        if self.at("punct", "/") and self.toks[self.i + 1].kind == "int":
            self.advance()
            dt = self.advance()
            den = int(dt.text)
            if den == 0:
                raise ParseError(dt.pos, "a nonzero denominator", "'0'")
        v = Fraction(num, den)
        return -v if neg else v

    def _check_qpow(self, p: Poly, pos: int):
        for v in p.variables():
            if p.degree_in(v) > 2:
                raise ParseError(pos, "an exponent of degree at most 2 in each variable", poly_text(p))

    def parse_poch(self) -> Poch:
        self.expect("kw", "poch")
        self.expect("punct", "(")
        sign = 1
        start = self.tok.pos
        if self.at("punct", "-"):
            self.advance()
            sign = -1
            if self.at("int"):
                t = self.advance()
                if t.text != "1":
                    raise ParseError(t.pos, "'1' or 'q'", repr(t.text))
                offset = Poly()
                return self._poch_rest(sign, offset)
        self.expect("kw", "q", what="'q', '-q' or '-1'")
        offset = Poly.const(1)
        if self.at("punct", "^"):
            self.advance()
            start = self.tok.pos
            offset = self._paren_poly()
            if not offset.is_affine_integer():
                raise ParseError(start, "an affine offset with integer coefficients", poly_text(offset))
        return self._poch_rest(sign, offset)

    def _poch_rest(self, sign: int, offset: Poly) -> Poch:
        self.expect("punct", ",")
        self.expect("kw", "q", what="'q' or 'q^k'")
        step = 1
        if self.at("punct", "^"):
            self.advance()
            if self.at("punct", "("):
                self.advance()
                t = self.expect("int", what="a positive integer")
                self.expect("punct", ")")
            else:
                t = self.expect("int", what="a positive integer")
            step = int(t.text)
            if step < 1:
                raise ParseError(t.pos, "a positive integer", repr(t.text))
        self.expect("punct", ",")
        start = self.tok.pos
        count = self.parse_poly_until(")")
        if not count.is_affine_integer():
            raise ParseError(start, "an affine length with integer coefficients", poly_text(count))
        self.expect("punct", ")")
        return Poch(sign, offset, step, count)

    # polynomial sub-grammar
    def _paren_poly(self) -> Poly:
        if self.at("neg1"):  # "(-1)" lexes as one token
            self.advance()
            return Poly.const(-1)
        self.expect("punct", "(")
        p = self.parse_poly_until(")")
        self.expect("punct", ")")
        return p

    def parse_poly_until(self, closer: str) -> Poly:
        if self.at("punct", closer) or self.at("eof"):
            self.fail("a polynomial")
        return self.poly_expr()

    def poly_expr(self) -> Poly:
        p = self.poly_term()
        while self.at("punct", "+") or self.at("punct", "-"):
            op = self.advance().text
            r = self.poly_term()
            p = p + r if op == "+" else p - r
        return p

    def poly_term(self) -> Poly:
        p = self.poly_unary()
        while self.at("punct", "*") or self.at("punct", "/"):
            op = self.advance().text
            if op == "*":
                p = p * self.poly_unary()
            else:
                t = self.tok
                r = self.poly_unary()
                if not r.is_const or r.const_value() == 0:
                    raise ParseError(t.pos, "a nonzero constant divisor", _describe(t))
                p = p.scale(1 / r.const_value())
        return p

    def poly_unary(self) -> Poly:
        if self.at("punct", "-"):
            self.advance()
            return -self.poly_unary()
        base = self.poly_atom()
        if self.at("punct", "^"):
            self.advance()
            t = self.expect("int", what="a small integer power")
            k = int(t.text)
            if k > 4:
                raise ParseError(t.pos, "a power at most 4", repr(t.text))
            out = Poly.const(1)
            for _ in range(k):
                out = out * base
            return out
        return base

    def poly_atom(self) -> Poly:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Poly.const(int(t.text))
        if t.kind == "neg1":
            self.advance()
            return Poly.const(-1)
        if t.kind == "ident":
            if t.text not in self.bound:
                raise ParseError(t.pos, "a bound summation variable", repr(t.text))
            self.advance()
            return Poly.var(t.text)
        if t.kind == "punct" and t.text == "(":
            self.advance()
            self.nest()
            p = self.poly_expr()
            self.depth -= 1
            self.expect("punct", ")")
            return p
        self.fail("a polynomial")


def parse(text) -> Expr:
    """Parse a sum expression; raises ParseError (never anything else) on bad input."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(exc.start, "UTF-8 text", repr(bytes(text)[exc.start:exc.start + 1])) from None
    if not isinstance(text, str):
        raise TypeError("parse expects str or bytes")
    p = _Parser(tokenize(text))
    node = p.parse_term()
    if not p.at("eof"):
        p.fail("'*', '/' or end of input")
    return node


# --------------------------------------------------------------------------
# termination analysis

@dataclass(frozen=True)
class DegreeBound:
    """q-order of the n-th summand is at least ``poly(n)``; summands past
    ``last_nonzero`` (when set) vanish identically."""
    var: str | None
    lower: int
    poly: Poly
    last_nonzero: int | None = None

    def __call__(self, n) -> Fraction:
        return self.poly.evaluate({self.var: n}) if self.var else self.poly.const_value()

    def start_of_growth(self) -> int:
        """First index from which the bound is nondecreasing."""
        a = self.poly.coefficient(self.var, 2).const_value()
        b = self.poly.coefficient(self.var, 1).const_value()
        if a > 0:
            return max(self.lower, math.ceil(-b / (2 * a)))
        return self.lower

    def text(self) -> str:
        return poly_text(self.poly)


def _offset_safe(offset: Poly, count: Poly, lowers: dict) -> bool:
    """Whether every factor exponent offset + j*step is >= 1 whenever the product is non-empty."""
    if any(c < 0 for m, c in offset.terms.items() if m != ()):
        return False
    vars_ = sorted(lowers)
    # offset and count are affine and offset is nondecreasing, so a small scan suffices
    grid = [dict()]
    for v in vars_:
        grid = [dict(g, **{v: lowers[v] + k}) for g in grid for k in range(9)]
    for env in grid:
        if count.evaluate(env) >= 1 and offset.evaluate(env) < 1:
            return False
    far = {v: lowers[v] + 8 for v in vars_}
    return offset.evaluate(far) >= 1 or count.evaluate(far) < 1


class _Analysis:
    def __init__(self, lowers: dict):
        self.lowers = lowers
        self.order = Poly()
        self.vanish_counts: list[Poly] = []


def _analyse(node: Expr, power: int, st: _Analysis):
    if isinstance(node, Const):
        if node.value == 0 and power < 0:
            raise NonTerminatingSumError("division by the constant 0")
    elif isinstance(node, QPow):
        st.order = st.order + node.poly.scale(power)
    elif isinstance(node, SignPow):
        pass
    elif isinstance(node, Poch):
        if node.sign == 1 and node.offset == Poly():
            if power < 0:
                raise NonTerminatingSumError(
                    f"denominator {to_text(node)} has first factor 1 - q^0 = 0 (not a unit)")
            st.vanish_counts.append(node.count)
        elif node.sign == -1 and node.offset == Poly():
            pass  # first factor is 2, the rest are units
        elif not _offset_safe(node.offset, node.count, st.lowers):
            what = "denominator" if power < 0 else "factor"
            raise NonTerminatingSumError(
                f"{what} {to_text(node)} may reach exponent <= 0, so it is not a unit power series")
    elif isinstance(node, Product):
        _analyse(node.left, power, st)
        _analyse(node.right, power, st)
    elif isinstance(node, Quotient):
        _analyse(node.left, power, st)
        _analyse(node.right, -power, st)
    elif isinstance(node, Sum):
        if power < 0:
            raise NonTerminatingSumError("a sum in a denominator is not supported")
        inner = _sum_bound(node, st.lowers)
        st.order = st.order + inner.poly.substitute(node.var, node.lower) \
            if inner.last_nonzero is None else st.order + _min_over_finite(inner)
    else:
        raise TypeError(f"not an expression node: {node!r}")


def _min_over_finite(b: DegreeBound) -> Poly:
    # a terminating inner sum: its order is at least the smallest bound among its terms;
    # only constant bounds can be compared symbolically
    vals = [b.poly.substitute(b.var, n) for n in range(b.lower, b.last_nonzero + 1)]
    if not vals:
        return Poly.const(10 ** 9)
    if all(v.is_const for v in vals):
        return Poly.const(min(v.const_value() for v in vals))
    if len(vals) == 1:
        return vals[0]
    raise NonTerminatingSumError("cannot bound a finite inner sum with variable exponents")


def _vanishing_limit(counts: list[Poly], var: str, lower: int) -> int | None:
    """Largest index with a non-vanishing summand, if some zero factor forces a finite sum."""
    best = None
    for c in counts:
        if c.variables() - {var}:
            continue
        slope = c.coefficient(var, 1).const_value()
        if slope <= 0:
            continue
        c0 = c.coefficient(var, 0).const_value()
        # count(n) = slope*n + c0 >= 1 kills the summand
        last = math.ceil((1 - c0) / slope) - 1
        last = max(last, lower - 1)
        best = last if best is None else min(best, last)
    return best


def _sum_bound(s: Sum, outer_lowers: dict) -> DegreeBound:
    lowers = dict(outer_lowers)
    lowers[s.var] = s.lower
    st = _Analysis(lowers)
    _analyse(s.body, 1, st)
    poly = st.order
    last = _vanishing_limit(st.vanish_counts, s.var, s.lower)
    if last is not None:
        return DegreeBound(s.var, s.lower, poly, last)
    a = poly.coefficient(s.var, 2)
    b = poly.coefficient(s.var, 1)
    if a == Poly() and b == Poly():
        raise NonTerminatingSumError(
            f"summand order {poly_text(poly)} does not grow with {s.var}; the sum does not converge q-adically")
    if outer_lowers:
        # sufficient condition: a >= 0 and the first difference a(2m+1)+b is
        # positive and nondecreasing in the outer variables
        diff = a.scale(2 * s.lower + 1) + b
        for p in (a, diff):
            if p.total_degree() > 1 or any(c < 0 for m, c in p.terms.items() if m != ()):
                raise NonTerminatingSumError(
                    f"cannot show the inner order {poly_text(poly)} increases in {s.var}")
        if a.evaluate(outer_lowers) < 0 or diff.evaluate(outer_lowers) <= 0:
            raise NonTerminatingSumError(
                f"inner order {poly_text(poly)} is not increasing in {s.var}")
    else:
        av, bv = a.const_value(), b.const_value()
        if av < 0 or (av == 0 and bv <= 0):
            raise NonTerminatingSumError(
                f"summand order {poly_text(poly)} is not unbounded-increasing in {s.var}")
    return DegreeBound(s.var, s.lower, poly, None)


def min_degree_bound(e: Expr) -> DegreeBound:
    """Polynomial lower bound for the q-order of the summand of the outer sum."""
    if isinstance(e, Sum):
        return _sum_bound(e, {})
    st = _Analysis({})
    _analyse(e, 1, st)
    if st.order.variables():
        raise NonTerminatingSumError("free variables outside a sum")
    return DegreeBound(None, 0, st.order, 0)


# --------------------------------------------------------------------------
# evaluation

class _Summand:
    __slots__ = ("scalar", "degree", "factors", "inner")

    def __init__(self):
        self.scalar = Fraction(1)
        self.degree = Fraction(0)
        self.factors: list = []
        self.inner: list = []


def _collect(node: Expr, power: int, env: dict, acc: _Summand):
    if acc.scalar == 0:
        return
    if isinstance(node, Const):
        if node.value == 0:
            if power < 0:
                raise NonUnitError("division by zero")
            acc.scalar = Fraction(0)
        else:
            acc.scalar *= node.value ** power
    elif isinstance(node, QPow):
        acc.degree += power * node.poly.evaluate(env)
    elif isinstance(node, SignPow):
        if int(node.poly.evaluate(env)) % 2:
            acc.scalar = -acc.scalar
    elif isinstance(node, Poch):
        count = int(node.count.evaluate(env))
        if count < 0:
            raise DomainError(f"negative Pochhammer length {count} in {to_text(node)}")
        if count > MAX_POCH_LENGTH:
            raise DomainError(f"Pochhammer length {count} is too large")
        off = int(node.offset.evaluate(env))
        s = node.sign
        for j in range(count):
            e = off + j * node.step
            if e == 0:
                c = 1 - s
                if c == 0:
                    if power < 0:
                        raise NonUnitError(f"{to_text(node)} has the factor 1 - q^0 = 0")
                    acc.scalar = Fraction(0)
                    return
                acc.scalar *= Fraction(c) ** power
            elif e > 0:
                acc.factors.append((e, s, power))
            else:
                # 1 - s q^e = -s q^e (1 - s q^-e)
                acc.scalar *= Fraction(-s) ** power
                acc.degree += power * e
                acc.factors.append((-e, s, power))
    elif isinstance(node, Product):
        _collect(node.left, power, env, acc)
        _collect(node.right, power, env, acc)
    elif isinstance(node, Quotient):
        _collect(node.left, power, env, acc)
        _collect(node.right, -power, env, acc)
    elif isinstance(node, Sum):
        if power < 0:
            raise DomainError("a sum in a denominator is not supported")
        acc.inner.append(node)
    else:
        raise TypeError(f"not an expression node: {node!r}")


def _summand_series(body: Expr, env: dict, N: Fraction, outer_lowers: dict) -> PuiseuxSeries:
    acc = _Summand()
    _collect(body, 1, env, acc)
    if acc.scalar == 0:
        return PuiseuxSeries.zero(N)
    rel = N - acc.degree
    prec = math.ceil(rel)
    if prec <= 0:
        return PuiseuxSeries.zero(N)
    unit = PuiseuxSeries.from_int_list(kernels.binom_product(prec, acc.factors), 0, rel)
    for s in acc.inner:
        inner = _eval_sum(s, rel, env, outer_lowers)
        unit = ps_mul(unit, inner)
    return unit.shift(acc.degree).map_coefficients(lambda c: c.scale(acc.scalar))


def _eval_sum(s: Sum, N: Fraction, env: dict, outer_lowers: dict) -> PuiseuxSeries:
    bound = _sum_bound(s, outer_lowers)
    lowers = dict(outer_lowers)
    lowers[s.var] = s.lower
    total = PuiseuxSeries.zero(N)
    n = s.lower
    grow = None if bound.last_nonzero is not None else _growth_start(bound, env)
    while True:
        if bound.last_nonzero is not None:
            if n > bound.last_nonzero:
                break
        else:
            b = bound.poly.evaluate({**env, s.var: n})
            if n >= grow and b >= N:
                break
        local = {**env, s.var: n}
        term = _summand_series(s.body, local, N, lowers)
        if term.terms:
            lo = min(term.terms) / 48
            if lo < bound.poly.evaluate(local):
                raise AssertionError(f"summand {n} has order {lo} below its bound {bound.text()}")
        total = total + term
        n += 1
    return total


def _growth_start(bound: DegreeBound, env: dict) -> int:
    p = bound.poly
    for v, val in env.items():
        p = p.substitute(v, val)
    a = p.coefficient(bound.var, 2).const_value()
    b = p.coefficient(bound.var, 1).const_value()
    if a > 0:
        return max(bound.lower, math.ceil(-b / (2 * a)))
    return bound.lower


def eval_expr(e: Expr, N) -> PuiseuxSeries:
    """Expand the expression below q^N."""
    N = Fraction(N)
    if N < 0:
        raise ValueError("order must be nonnegative")
    if isinstance(e, Sum):
        return _eval_sum(e, N, {}, {})
    min_degree_bound(e)
    return _summand_series(e, {}, N, {})


# --------------------------------------------------------------------------
# shipped fixtures

def fixtures() -> dict[str, str]:
    """The fourteen named series as expression texts."""
    text = resources.files("qmaass").joinpath("data/series.qdsl").read_text()
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, _, expr = line.partition(":")
        out[name.strip()] = expr.strip()
    return out

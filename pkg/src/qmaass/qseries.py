"""Exact truncated q-series with rational exponents and cyclotomic coefficients.

Exponents live on the grid (1/48)Z and coefficients in Q(zeta) with
zeta = e(1/24), stored in the power basis 1, zeta, ..., zeta^7 modulo
x^8 - x^4 + 1.  Everything here is exact; there is no floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (InsufficientPrecisionError, NonUnitError,
                     UnsupportedExponentError, UnsupportedPhaseError,
                     DomainError)

GRID = 48
PHASE_DEN = 24
DEGREE = 8
INF = math.inf


# --------------------------------------------------------------------------
# phases

def reduce_angle(theta) -> Fraction:
    """Reduce theta modulo 1 into [0, 1); the denominator must divide 24."""
    theta = Fraction(theta)
    theta -= math.floor(theta)
    if PHASE_DEN % theta.denominator:
        raise UnsupportedPhaseError(f"phase e({theta}) is outside Q(zeta_24)")
    return theta


def _power_table():
    # zeta^k in the power basis, k = 0..23, via x^8 = x^4 - 1
    table = []
    vec = [1, 0, 0, 0, 0, 0, 0, 0]
    for _ in range(PHASE_DEN):
        table.append(tuple(vec))
        top = vec[7]
        vec = [0] + vec[:7]
        if top:
            vec[0] -= top
            vec[4] += top
    return table


_POWERS = _power_table()


def _reduce_poly(c: list) -> list:
    # reduce a coefficient list of degree < 15 modulo x^8 - x^4 + 1
    for k in range(len(c) - 1, DEGREE - 1, -1):
        v = c[k]
        if v:
            c[k] = 0
            c[k - 8] -= v
            c[k - 4] += v
    return c[:DEGREE]


class Cyclotomic:
    """Element of Q(e(1/24)) in the basis 1, zeta, ..., zeta^7."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable = (0,) * DEGREE):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != DEGREE:
            raise ValueError("a Cyclotomic needs exactly 8 coordinates")
        self.coords = coords

    @classmethod
    def rational(cls, value) -> "Cyclotomic":
        obj = cls.__new__(cls)
        obj.coords = (Fraction(value),) + (Fraction(0),) * 7
        return obj

    @classmethod
    def _raw(cls, coords: tuple) -> "Cyclotomic":
        obj = cls.__new__(cls)
        obj.coords = coords
        return obj

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            return self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash(self.coords)

    def __add__(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other)
        return Cyclotomic._raw(tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k) -> "Cyclotomic":
        k = Fraction(k)
        return Cyclotomic._raw(tuple(a * k for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if other.is_rational():
            return self.scale(other.coords[0])
        if self.is_rational():
            return other.scale(self.coords[0])
        prod = [Fraction(0)] * 15
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        prod[i + j] += a * b
        return Cyclotomic._raw(tuple(_reduce_poly(prod)))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_24)")
        if self.is_rational():
            return Cyclotomic.rational(1 / self.coords[0])
        # solve (self * x) = 1 by Gauss-Jordan on the multiplication matrix
        cols = [(self * Cyclotomic._raw(tuple(Fraction(int(i == k)) for i in range(8)))).coords
                for k in range(8)]
        m = [[cols[k][i] for k in range(8)] + [Fraction(int(i == 0))] for i in range(8)]
        for c in range(8):
            piv = next(r for r in range(c, 8) if m[r][c])
            m[c], m[piv] = m[piv], m[c]
            p = m[c][c]
            m[c] = [v / p for v in m[c]]
            for r in range(8):
                if r != c and m[r][c]:
                    f = m[r][c]
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return Cyclotomic._raw(tuple(m[i][8] for i in range(8)))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return self * other.inverse()

    def conjugate(self) -> "Cyclotomic":
        # complex conjugation sends zeta^k to zeta^(24-k)
        out = ZERO
        for k, a in enumerate(self.coords):
            if a:
                out = out + Cyclotomic._raw(_POWERS[(-k) % 24]).scale(a)
        return out

    def to_complex(self) -> complex:
        z = complex(math.cos(2 * math.pi / 24), math.sin(2 * math.pi / 24))
        return sum(float(a) * z ** k for k, a in enumerate(self.coords))

    def __repr__(self):
        if self.is_rational():
            return f"Cyclotomic({self.coords[0]})"
        return "Cyclotomic(" + ", ".join(str(c) for c in self.coords) + ")"

    def __str__(self):
        if self.is_rational():
            return str(self.coords[0])
        parts = []
        for k, a in enumerate(self.coords):
            if a:
                parts.append(f"{a}" if k == 0 else f"{a}*z^{k}")
        return "(" + " + ".join(parts) + ")"


ZERO = Cyclotomic.rational(0)
ONE = Cyclotomic.rational(1)


def cyc_from_angle(theta) -> Cyclotomic:
    """The exact root of unity e(theta); theta must have denominator dividing 24."""
    theta = reduce_angle(theta)
    k = int(theta * PHASE_DEN)
    return Cyclotomic._raw(tuple(Fraction(v) for v in _POWERS[k]))


def as_cyclotomic(value) -> Cyclotomic:
    if isinstance(value, Cyclotomic):
        return value
    return Cyclotomic.rational(value)


# --------------------------------------------------------------------------
# series

def _units(e) -> int:
    """Exponent e as an integer count of 1/48 steps."""
    e = Fraction(e)
    k = e * GRID
    if k.denominator != 1:
        raise UnsupportedExponentError(f"exponent {e} is not on the 1/48 grid")
    return int(k)


def _order_units(order) -> float | int:
    # terms at grid index >= this bound are unknown
    if order == INF:
        return INF
    return math.ceil(Fraction(order) * GRID)


class PuiseuxSeries:
    """Sparse truncated series sum c_e q^e, known for exponents e < order.

    ``order`` is a Fraction, or ``math.inf`` for an exact (polynomial) value.
    Keys of ``terms`` are exponents times 48.
    """

    __slots__ = ("terms", "order")

    def __init__(self, terms: Mapping | None = None, order=INF):
        self.order = order if order == INF else Fraction(order)
        bound = _order_units(self.order)
        clean = {}
        for e, c in (terms or {}).items():
            k = _units(e)
            c = as_cyclotomic(c)
            if k < bound and not c.is_zero():
                clean[k] = clean[k] + c if k in clean else c
                if clean[k].is_zero():
                    del clean[k]
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict, order) -> "PuiseuxSeries":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.order = order
        return obj

    @classmethod
    def from_units(cls, terms: Mapping[int, object], order=INF) -> "PuiseuxSeries":
        """Build from a mapping keyed by 48*exponent."""
        order = order if order == INF else Fraction(order)
        bound = _order_units(order)
        clean = {}
        for k, c in terms.items():
            if k < bound:
                c = as_cyclotomic(c)
                if not c.is_zero():
                    clean[int(k)] = c
        return cls._raw(clean, order)

    @classmethod
    def from_int_list(cls, coeffs: Iterable, shift=0, order=INF) -> "PuiseuxSeries":
        """Dense coefficients c_0, c_1, ... of q^shift * sum c_n q^n."""
        s = _units(shift)
        return cls.from_units({s + GRID * n: c for n, c in enumerate(coeffs) if c}, order)

    @classmethod
    def monomial(cls, exponent, coeff=1, order=INF) -> "PuiseuxSeries":
        return cls({exponent: coeff}, order)

    @classmethod
    def constant(cls, value, order=INF) -> "PuiseuxSeries":
        return cls({0: value}, order)

    @classmethod
    def zero(cls, order=INF) -> "PuiseuxSeries":
        return cls._raw({}, order if order == INF else Fraction(order))

    # ---- inspection

    @property
    def floor(self):
        if self.terms:
            return Fraction(min(self.terms), GRID)
        return self.order

    def exponents(self) -> list[Fraction]:
        return [Fraction(k, GRID) for k in sorted(self.terms)]

    def items(self):
        for k in sorted(self.terms):
            yield Fraction(k, GRID), self.terms[k]

    def coeff(self, e) -> Cyclotomic:
        e = Fraction(e)
        if e >= self.order:
            raise InsufficientPrecisionError(f"coefficient of q^{e} unknown (order {self.order})")
        return self.terms.get(_units(e), ZERO)

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.terms.values())

    def integer_coefficients(self) -> bool:
        return all(c.is_rational() and c.coords[0].denominator == 1 for c in self.terms.values())

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self.order == other.order and self.terms == other.terms

    def __repr__(self):
        head = " + ".join(f"({c})q^{e}" for e, c in list(self.items())[:6])
        more = " + ..." if len(self.terms) > 6 else ""
        return f"PuiseuxSeries({head or '0'}{more} + O(q^{self.order}))"

    # ---- arithmetic

    def truncate(self, order) -> "PuiseuxSeries":
        order = min(self.order, order if order == INF else Fraction(order))
        bound = _order_units(order)
        return PuiseuxSeries._raw({k: c for k, c in self.terms.items() if k < bound}, order)

    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other)
        return ps_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries._raw({k: -c for k, c in self.terms.items()}, self.order)

    def __sub__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other)
        return ps_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PuiseuxSeries):
            return ps_mul(self, other)
        c = as_cyclotomic(other)
        if c.is_zero():
            return PuiseuxSeries.zero(self.order)
        return PuiseuxSeries._raw({k: v * c for k, v in self.terms.items()}, self.order)

    __rmul__ = __mul__

    def shift(self, e) -> "PuiseuxSeries":
        """Multiply by q^e."""
        s = _units(e)
        order = self.order if self.order == INF else self.order + Fraction(e)
        return PuiseuxSeries._raw({k + s: c for k, c in self.terms.items()}, order)

    def map_coefficients(self, fn) -> "PuiseuxSeries":
        out = {}
        for k, c in self.terms.items():
            v = fn(c)
            if not v.is_zero():
                out[k] = v
        return PuiseuxSeries._raw(out, self.order)


def ps_add(f: PuiseuxSeries, g: PuiseuxSeries) -> PuiseuxSeries:
    order = min(f.order, g.order)
    bound = _order_units(order)
    out = {k: c for k, c in f.terms.items() if k < bound}
    for k, c in g.terms.items():
        if k >= bound:
            continue
        if k in out:
            s = out[k] + c
            if s.is_zero():
                del out[k]
            else:
                out[k] = s
        else:
            out[k] = c
    return PuiseuxSeries._raw(out, order)


def ps_mul(f: PuiseuxSeries, g: PuiseuxSeries) -> PuiseuxSeries:
    if (not f.terms and f.order == INF) or (not g.terms and g.order == INF):
        return PuiseuxSeries.zero()  # exact zero annihilates even unknown tails
    order = min(f.order + g.floor, g.order + f.floor)
    if order != INF:
        order = Fraction(order)
    bound = _order_units(order)
    out: dict[int, Cyclotomic] = {}
    gi = sorted(g.terms.items())
    for kf, cf in sorted(f.terms.items()):
        for kg, cg in gi:
            k = kf + kg
            if k >= bound:
                break
            p = cf * cg
            if k in out:
                out[k] = out[k] + p
            else:
                out[k] = p
    return PuiseuxSeries._raw({k: c for k, c in out.items() if not c.is_zero()}, order)


def ps_inv_unit(f: PuiseuxSeries, N) -> PuiseuxSeries:
    """Inverse of a unit series (floor 0, nonzero constant term) to order N."""
    N = Fraction(N)
    if not f.terms or min(f.terms) != 0:
        raise NonUnitError("series has no invertible constant term")
    if min(f.terms) < 0:
        raise NonUnitError("series has negative exponents")
    order = min(N, f.order)
    bound = _order_units(order)
    c0inv = f.terms[0].inverse()
    rest = sorted((k, c) for k, c in f.terms.items() if k > 0 and k < bound)
    step = 0
    for k, _ in rest:
        step = math.gcd(step, k)
    g: dict[int, Cyclotomic] = {0: c0inv}
    if step:
        for m in range(step, bound, step):
            acc = ZERO
            for k, c in rest:
                if k > m:
                    break
                gv = g.get(m - k)
                if gv is not None:
                    acc = acc + c * gv
            if not acc.is_zero():
                g[m] = -(acc * c0inv)
    return PuiseuxSeries._raw(g, order)


def ps_substitute_power(f: PuiseuxSeries, k) -> PuiseuxSeries:
    """q -> q^k for a positive rational k."""
    k = Fraction(k)
    if k <= 0:
        raise DomainError("substitution power must be positive")
    out = {}
    for key, c in f.terms.items():
        out[_units(Fraction(key, GRID) * k)] = c
    order = f.order if f.order == INF else f.order * k
    return PuiseuxSeries._raw(out, order)


def ps_negate_q(f: PuiseuxSeries) -> PuiseuxSeries:
    """q -> -q on a series with integer exponents."""
    out = {}
    for key, c in f.terms.items():
        if key % GRID:
            raise DomainError(f"q -> -q undefined at exponent {Fraction(key, GRID)}")
        out[key] = -c if (key // GRID) % 2 else c
    return PuiseuxSeries._raw(out, f.order)


def ps_invert_q(f: PuiseuxSeries) -> PuiseuxSeries:
    """q -> 1/q on an exact (finite) list of terms; the result is kept exact."""
    return PuiseuxSeries._raw({-k: c for k, c in f.terms.items()}, INF)


@dataclass(frozen=True)
class Comparison:
    equal: bool
    order: Fraction
    exponent: Fraction | None = None
    left: Cyclotomic | None = None
    right: Cyclotomic | None = None

    def __bool__(self):
        return self.equal

    def describe(self) -> str:
        if self.equal:
            return f"equal below q^{self.order}"
        return f"mismatch at q^{self.exponent}: {self.left} != {self.right}"


def ps_equal(f: PuiseuxSeries, g: PuiseuxSeries, N) -> Comparison:
    """Exact comparison of all coefficients with exponent < N."""
    N = Fraction(N)
    if N > f.order or N > g.order:
        raise InsufficientPrecisionError(
            f"cannot compare below q^{N}: orders are {f.order} and {g.order}")
    bound = _order_units(N)
    keys = sorted(k for k in set(f.terms) | set(g.terms) if k < bound)
    for k in keys:
        a = f.terms.get(k, ZERO)
        b = g.terms.get(k, ZERO)
        if a != b:
            return Comparison(False, N, Fraction(k, GRID), a, b)
    return Comparison(True, N)


# --------------------------------------------------------------------------
# text format: "num/48<TAB>c0 c1 ... c7"

def serialize(f: PuiseuxSeries) -> str:
    lines = [f"# order={f.order if f.order != INF else 'inf'}"]
    for k in sorted(f.terms):
        coords = " ".join(f"{c.numerator}/{c.denominator}" for c in f.terms[k].coords)
        lines.append(f"{k}/{GRID}\t{coords}")
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> PuiseuxSeries:
    order = INF
    terms = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            if key.strip() == "order":
                val = val.strip()
                order = INF if val == "inf" else Fraction(val)
            continue
        try:
            exp_tok, coeff_tok = line.split("\t")
            num, den = exp_tok.split("/")
            if int(den) != GRID:
                raise ValueError("exponent denominator must be 48")
            coords = [Fraction(t) for t in coeff_tok.split()]
            k = int(num)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: malformed series term {line!r}") from exc
        terms[k] = Cyclotomic(coords)
    return PuiseuxSeries.from_units(terms, order)

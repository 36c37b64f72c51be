"""Truncated expansions of the named q-hypergeometric series.

Every summand is a monomial times a product of binomials (1 - s q^e)^{+-1},
so each one is a single call into ``kernels.binom_product`` on the unit part,
computed only to the precision it can still affect.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable

from . import kernels
from .qseries import INF, PuiseuxSeries, ps_mul


class SeriesName(str, Enum):
    sigma = "sigma"
    sigma_star = "sigma_star"
    W1 = "W1"
    W2 = "W2"
    f1 = "f1"
    f2 = "f2"
    f3 = "f3"
    f4 = "f4"
    f5 = "f5"
    f6 = "f6"
    f7 = "f7"
    f8 = "f8"
    L = "L"
    LL = "LL"


def series_name(tag) -> SeriesName:
    try:
        return SeriesName(tag)
    except ValueError:
        raise ValueError(f"unknown series {tag!r}; expected one of "
                         + ", ".join(s.value for s in SeriesName)) from None


@dataclass
class Summand:
    """scalar * q^degree * prod (1 - s q^e)^p over ``factors`` (e >= 1)."""
    degree: int
    scalar: Fraction = Fraction(1)
    factors: list = field(default_factory=list)

    def poch(self, sign: int, offset: int, step: int, count: int, power: int = 1):
        """Attach (sign-adjusted) Pochhammer factors prod_{j<count} (1 - sign q^(offset+j*step))."""
        for j in range(count):
            e = offset + j * step
            if e == 0:
                const = 1 - sign
                if const == 0:
                    self.scalar = Fraction(0) if power > 0 else _raise_nonunit()
                else:
                    self.scalar *= Fraction(const) if power > 0 else Fraction(1, const)
            else:
                self.factors.append((e, sign, power))
        return self

    def binom(self, sign: int, e: int, power: int = 1):
        self.factors.append((e, sign, power))
        return self


def _raise_nonunit():
    from .errors import NonUnitError
    raise NonUnitError("division by a vanishing Pochhammer symbol")


def _sign(n):
    return -1 if n % 2 else 1


# Each definition returns the summand for index n.  Keep these literal
# transcriptions of the defining sums; qdsl fixtures give an independent route.

def _sigma(n):
    return Summand(n * (n + 1) // 2).poch(-1, 1, 1, n, -1)


def _sigma_star(n):
    return Summand(n * n, Fraction(2 * _sign(n))).poch(1, 1, 2, n, -1)


def _W1(n):
    return Summand(n * (n + 1) // 2, Fraction(_sign(n))).poch(1, 1, 1, n).poch(-1, 1, 1, n, -1)


def _W2(n):
    return Summand(n, Fraction(_sign(n))).poch(-1, 0, 2, n).poch(1, 1, 2, n, -1)


def _f1(n):
    return Summand(n * (n + 1) // 2).poch(-1, 1, 1, n, -1).binom(1, 2 * n + 1, -1)


def _f2(n):
    return Summand(n * (n + 1) // 2).poch(-1, 1, 1, n - 1, -1).binom(1, 2 * n - 1, -1)


def _f3(n):
    return Summand(n).poch(1, 1, 1, 2 * n).poch(-1, 1, 1, 2 * n + 1, -1)


def _f4(n):
    return Summand(n + 1).poch(1, 1, 1, 2 * n + 1).poch(-1, 1, 1, 2 * n + 2, -1)


def _f5(n):
    return (Summand(n * (n + 1) // 2, Fraction(_sign(n)))
            .poch(1, 1, 1, n).poch(1, 1, 2, n + 1, -1))


def _f6(n):
    return Summand(n, Fraction(_sign(n))).poch(1, 2, 2, n - 1).poch(1, n, 1, n, -1)


def _f7(n):
    return (Summand(n * n + n, Fraction(_sign(n)))
            .poch(1, 2, 2, n).poch(-1, 1, 1, 2 * n + 1, -1))


def _f8(n):
    return Summand(n).poch(1, 1, 1, n - 1).poch(-1, n, 1, n, -1)


def _LL(n):
    return (Summand(n * (n + 1) // 2, Fraction(_sign(n)))
            .poch(1, 1, 1, n - 1).poch(-1, 1, 1, n, -1))


def _L(n):
    return Summand(n).poch(1, 2, 2, n - 1).poch(-1, 2, 2, n, -1)


_DEFS: dict[SeriesName, tuple[int, Callable[[int], Summand]]] = {
    SeriesName.sigma: (0, _sigma),
    SeriesName.sigma_star: (1, _sigma_star),
    SeriesName.W1: (0, _W1),
    SeriesName.W2: (1, _W2),
    SeriesName.f1: (0, _f1),
    SeriesName.f2: (1, _f2),
    SeriesName.f3: (0, _f3),
    SeriesName.f4: (0, _f4),
    SeriesName.f5: (0, _f5),
    SeriesName.f6: (1, _f6),
    SeriesName.f7: (0, _f7),
    SeriesName.f8: (1, _f8),
    SeriesName.LL: (1, _LL),
    SeriesName.L: (1, _L),
}

_MIN_DEGREE = {
    SeriesName.sigma: lambda n: n * (n + 1) // 2,
    SeriesName.sigma_star: lambda n: n * n,
    SeriesName.W1: lambda n: n * (n + 1) // 2,
    SeriesName.W2: lambda n: n,
    SeriesName.f1: lambda n: n * (n + 1) // 2,
    SeriesName.f2: lambda n: n * (n + 1) // 2,
    SeriesName.f3: lambda n: n,
    SeriesName.f4: lambda n: n + 1,
    SeriesName.f5: lambda n: n * (n + 1) // 2,
    SeriesName.f6: lambda n: n,
    SeriesName.f7: lambda n: n * n + n,
    SeriesName.f8: lambda n: n,
    SeriesName.LL: lambda n: n,
    SeriesName.L: lambda n: n,
}


def first_index(name) -> int:
    return _DEFS[series_name(name)][0]


def min_degree(name, n: int) -> Fraction:
    """Lower bound on the q-order of the n-th summand; nondecreasing in n."""
    name = series_name(name)
    if n < first_index(name):
        raise ValueError(f"{name.value} starts at n={first_index(name)}")
    return Fraction(_MIN_DEGREE[name](n))


def summand(name, n: int) -> Summand:
    name = series_name(name)
    return _DEFS[name][1](n)


def pochhammer(sign: int, offset, step: int, count: int, N) -> PuiseuxSeries:
    """prod_{j<count} (1 - sign q^(offset + j*step)) truncated below q^N."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    offset = Fraction(offset)
    N = Fraction(N)
    if count == 0:
        return PuiseuxSeries.constant(1, N)
    if offset.denominator == 1:
        s = Summand(0).poch(sign, int(offset), step, count)
        return _summand_series(s, N)
    out = PuiseuxSeries.constant(1, N)
    for j in range(count):
        out = ps_mul(out, PuiseuxSeries({0: 1, offset + j * step: -sign}, N))
    return out


def _unit_part(s: Summand, prec: int) -> list:
    """Dense integer coefficients of the binomial product below q^prec."""
    return kernels.binom_product(prec, s.factors)


def _summand_series(s: Summand, N) -> PuiseuxSeries:
    prec = math.ceil(N) - s.degree
    if prec <= 0 or s.scalar == 0:
        return PuiseuxSeries.zero(N)
    coeffs = _unit_part(s, prec)
    return PuiseuxSeries.from_int_list([c * s.scalar for c in coeffs], s.degree, N)


def cutoff(name, N) -> int:
    """Smallest M with min_degree(name, M) >= N."""
    name = series_name(name)
    n = first_index(name)
    while min_degree(name, n) < N:
        n += 1
    return n


def expand_dense(name, N) -> list:
    """Coefficients c_0 .. c_{ceil(N)-1} of the named series, as Fractions/ints."""
    name = series_name(name)
    N = Fraction(N)
    size = max(math.ceil(N), 0)
    acc = [0] * size
    M = cutoff(name, N)
    for n in range(first_index(name), M):
        s = summand(name, n)
        if s.degree < min_degree(name, n):
            raise AssertionError(f"{name.value} summand {n} below its degree bound")
        prec = size - s.degree
        if prec <= 0 or s.scalar == 0:
            continue
        coeffs = _unit_part(s, prec)
        sc = s.scalar
        d = s.degree
        if sc == 1:
            for i, c in enumerate(coeffs):
                if c:
                    acc[d + i] += c
        else:
            for i, c in enumerate(coeffs):
                if c:
                    acc[d + i] += sc * c
    # guard term: its actual valuation must already clear the cutoff
    guard = summand(name, M)
    if guard.scalar != 0 and guard.degree < N:
        raise AssertionError(f"{name.value}: guard summand {M} reaches below q^{N}")
    return [int(c) if isinstance(c, Fraction) and c.denominator == 1 else c for c in acc]


def expand_named(name, N) -> PuiseuxSeries:
    """The named series truncated below q^N."""
    N = Fraction(N)
    if N < 0:
        raise ValueError("order must be nonnegative")
    return PuiseuxSeries.from_int_list(expand_dense(name, N), 0, N)


def sigma_theta_dense(N) -> list:
    size = max(math.ceil(Fraction(N)), 0)
    acc = [0] * size
    n = 0
    while n * (n + 1) // 2 < size:
        base = n * (3 * n + 1) // 2
        for j in range(-n, n + 1):
            e = base - j * j
            sgn = _sign(n + j)
            if e < size:
                acc[e] += sgn
            if e + 2 * n + 1 < size:
                acc[e + 2 * n + 1] -= sgn
        n += 1
    return acc


def sigma_theta(N) -> PuiseuxSeries:
    """sigma from its indefinite theta double sum, truncated below q^N."""
    N = Fraction(N)
    return PuiseuxSeries.from_int_list(sigma_theta_dense(N), 0, N)


@dataclass
class CoeffTable:
    source: str
    entries: dict[int, int]

    def __getitem__(self, n):
        return self.entries.get(n, 0)

    def to_csv(self) -> str:
        lines = ["n,coefficient"]
        lines += [f"{n},{c}" for n, c in sorted(self.entries.items())]
        return "\n".join(lines) + "\n"


def coefficient_tables(N: int) -> tuple[CoeffTable, CoeffTable]:
    """S(n) for 0 <= n < N, and T(m) for |m| <= 24N (support in 24Z+1)."""
    if N < 1:
        raise ValueError("N must be at least 1")
    s_coeffs = expand_dense(SeriesName.sigma, N)
    star = expand_dense(SeriesName.sigma_star, N + 1)
    S = CoeffTable("sigma", {n: int(c) for n, c in enumerate(s_coeffs)})
    T = {}
    for k, c in enumerate(s_coeffs):
        T[24 * k + 1] = int(c)
    for k, c in enumerate(star):
        m = 1 - 24 * k
        if k >= 1 and abs(m) <= 24 * N:
            T[m] = int(c)
    return S, CoeffTable("q*sigma(q^24), q^-1*sigma_star(q^24)", T)

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qmaass import hypergeom
from qmaass.hypergeom import (SeriesName, coefficient_tables, cutoff, expand_named, min_degree,
                              pochhammer, series_name, sigma_theta, summand)
from qmaass.qseries import PuiseuxSeries

NAMES = [s.value for s in SeriesName]


# -- an independent expander: dense Fraction lists, one binomial at a time ---

def _times_binomial(c, sign, e):
    # c * (1 - sign q^e)
    if e == 0:
        return [x * (1 - sign) for x in c]
    return [c[i] - (sign * c[i - e] if i >= e else 0) for i in range(len(c))]


def _over_binomial(c, sign, e):
    # c / (1 - sign q^e) by long division
    if e == 0:
        return [x / (1 - sign) for x in c]
    out = list(c)
    for i in range(e, len(out)):
        out[i] += sign * out[i - e]
    return out


def _poch(sign, offset, step, count):
    return [(sign, offset + j * step) for j in range(count)]


def _definition(name, n):
    """(scalar, degree, numerator factors, denominator factors) read off the definitions."""
    s = (-1) ** n
    tri = n * (n + 1) // 2
    return {
        "sigma": (1, tri, [], _poch(-1, 1, 1, n)),
        "sigma_star": (2 * s, n * n, [], _poch(1, 1, 2, n)),
        "W1": (s, tri, _poch(1, 1, 1, n), _poch(-1, 1, 1, n)),
        "W2": (s, n, _poch(-1, 0, 2, n), _poch(1, 1, 2, n)),
        "f1": (1, tri, [], _poch(-1, 1, 1, n) + [(1, 2 * n + 1)]),
        "f2": (1, tri, [], _poch(-1, 1, 1, n - 1) + [(1, 2 * n - 1)]),
        "f3": (1, n, _poch(1, 1, 1, 2 * n), _poch(-1, 1, 1, 2 * n + 1)),
        "f4": (1, n + 1, _poch(1, 1, 1, 2 * n + 1), _poch(-1, 1, 1, 2 * n + 2)),
        "f5": (s, tri, _poch(1, 1, 1, n), _poch(1, 1, 2, n + 1)),
        "f6": (s, n, _poch(1, 2, 2, n - 1), _poch(1, n, 1, n)),
        "f7": (s, n * n + n, _poch(1, 2, 2, n), _poch(-1, 1, 1, 2 * n + 1)),
        "f8": (1, n, _poch(1, 1, 1, n - 1), _poch(-1, n, 1, n)),
        "LL": (s, tri, _poch(1, 1, 1, n - 1), _poch(-1, 1, 1, n)),
        "L": (1, n, _poch(1, 2, 2, n - 1), _poch(-1, 2, 2, n)),
    }[name]


FIRST = {"sigma_star": 1, "W2": 1, "f2": 1, "f6": 1, "f8": 1, "LL": 1, "L": 1}


def naive_summand(name, n, N):
    scalar, degree, num, den = _definition(name, n)
    c = [Fraction(0)] * N
    if degree < N:
        c[degree] = Fraction(scalar)
    for sign, e in num:
        c = _times_binomial(c, sign, e)
    for sign, e in den:
        c = _over_binomial(c, sign, e)
    return c


def naive_expand(name, N, extra=3):
    """Sum summands until the monomial degree passes N, plus a few more as a guard."""
    acc = [Fraction(0)] * N
    n = FIRST.get(name, 0)
    beyond = 0
    while beyond < extra:
        if _definition(name, n)[1] >= N:
            beyond += 1
        acc = [a + b for a, b in zip(acc, naive_summand(name, n, N))]
        n += 1
    return acc


@pytest.mark.parametrize("name", NAMES)
def test_expand_matches_naive(name):
    N = 40
    f = expand_named(name, N)
    assert [f.coeff(k) for k in range(N)] == naive_expand(name, N)
    assert f.integer_coefficients()


@pytest.mark.parametrize("name", NAMES)
def test_summands_match_naive(name):
    N = 30
    for n in range(FIRST.get(name, 0), FIRST.get(name, 0) + 6):
        s = summand(name, n)
        got = hypergeom._summand_series(s, N)
        assert [got.coeff(k) for k in range(N)] == naive_summand(name, n, N)


@pytest.mark.parametrize("name", NAMES)
def test_min_degree_is_a_lower_bound(name):
    N = 60
    lo = FIRST.get(name, 0)
    prev = None
    for n in range(lo, lo + 8):
        c = naive_summand(name, n, N)
        first = next((k for k, v in enumerate(c) if v), None)
        bound = min_degree(name, n)
        if first is not None:
            assert first >= bound
        if prev is not None:
            assert bound >= prev
        prev = bound


@pytest.mark.parametrize("name", NAMES)
def test_cutoff_is_safe(name):
    # one more summand past the cutoff changes nothing below N
    N = 25
    f = expand_named(name, N)
    extra = naive_summand(name, cutoff(name, N), N)
    assert not any(extra)
    assert [f.coeff(k) for k in range(N)] == naive_expand(name, N)


def test_sigma_head():
    assert [expand_named("sigma", 4).coeff(k) for k in range(4)] == [1, 1, -1, 2]


def test_sigma_regression():
    f = expand_named("sigma", 12)
    assert [f.coeff(k) for k in range(12)] == [1, 1, -1, 2, -2, 1, 0, 1, -2, 0, 2, 0]


def test_f4_linear_coefficient():
    assert expand_named("f4", 2).coeff(1) == 1


def test_order_zero_is_empty():
    f = expand_named("sigma", 0)
    assert len(f) == 0 and f.order == 0


def test_fractional_order():
    f = expand_named("f3", Fraction(7, 2))
    assert f.order == Fraction(7, 2)
    assert f.truncate(3) == expand_named("f3", 3)


def test_min_degree_examples():
    assert min_degree("sigma", 3) == 6
    assert min_degree("f7", 2) == 6
    assert min_degree("f3", 5) == 5
    with pytest.raises(ValueError):
        min_degree("f2", 0)


def test_series_name():
    assert series_name("f1") is SeriesName.f1
    with pytest.raises(ValueError, match="unknown series"):
        series_name("f9")


def test_pochhammer_examples():
    assert pochhammer(-1, 1, 1, 0, 10) == PuiseuxSeries.constant(1, 10)
    assert pochhammer(-1, 1, 1, 2, 10) == PuiseuxSeries.from_int_list([1, 1, 1, 1], 0, 10)
    assert pochhammer(-1, 0, 2, 1, 10) == PuiseuxSeries.constant(2, 10)
    assert pochhammer(1, 0, 1, 3, 10) == PuiseuxSeries.zero(10)


def test_pochhammer_fractional_offset():
    f = pochhammer(1, Fraction(1, 2), 1, 2, 3)
    assert f == PuiseuxSeries({0: 1, Fraction(1, 2): -1, Fraction(3, 2): -1, 2: 1}, 3)


@given(st.sampled_from([1, -1]), st.integers(0, 4), st.integers(1, 3), st.integers(0, 5))
def test_pochhammer_matches_product(sign, offset, step, count):
    N = 20
    c = [Fraction(0)] * N
    c[0] = Fraction(1)
    for s, e in _poch(sign, offset, step, count):
        c = _times_binomial(c, s, e)
    f = pochhammer(sign, offset, step, count, N)
    assert [f.coeff(k) for k in range(N)] == c


@pytest.mark.parametrize("N", [1, 4, 57, 200])
def test_sigma_theta(N):
    assert sigma_theta(N) == expand_named("sigma", N)


def test_sigma_theta_constant():
    assert sigma_theta(1) == PuiseuxSeries.constant(1, 1)


def test_coefficient_tables():
    S, T = coefficient_tables(60)
    assert S[0] == 1 and T[1] == 1
    assert all(n % 24 == 1 for n in T.entries)
    assert all(T[24 * n + 1] == S[n] for n in range(60))
    star = expand_named("sigma_star", 61)
    assert all(T[1 - 24 * k] == star.coeff(k) for k in range(1, 61))
    assert S.to_csv().startswith("n,coefficient\n0,1\n")
    with pytest.raises(ValueError):
        coefficient_tables(0)

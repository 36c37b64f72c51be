import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from qmaass import _kernels_py, kernels

try:
    from qmaass import _kernels as _cy
except ImportError:  # extension not built
    _cy = None

needs_cython = pytest.mark.skipif(_cy is None, reason="compiled kernels not built")

factor = st.tuples(st.integers(1, 12), st.sampled_from([1, -1]), st.sampled_from([1, -1]))


def naive_binom_product(n, factors):
    # multiply out one factor at a time; division by (1 - s q^e) as a geometric series
    c = [0] * n
    if n:
        c[0] = 1
    for e, s, p in factors:
        if p > 0:
            c = [c[i] - (s * c[i - e] if i >= e else 0) for i in range(n)]
        else:
            for i in range(e, n):
                c[i] += s * c[i - e]
    return c


@given(st.integers(0, 40), st.lists(factor, max_size=8))
def test_binom_product_python(n, factors):
    assert _kernels_py.binom_product(n, factors) == naive_binom_product(n, factors)


@needs_cython
@given(st.integers(0, 40), st.lists(factor, max_size=8))
def test_backends_agree_binom(n, factors):
    assert _cy.binom_product(n, factors) == _kernels_py.binom_product(n, factors)


def test_binom_overflow_falls_back():
    # 1/(1-q)^80 has coefficients C(n+79, 79), far beyond int64
    factors = [(1, 1, -1)] * 80
    out = kernels.binom_product(60, factors)
    assert out[59] == math.comb(59 + 79, 79)
    if _cy is not None:
        with pytest.raises(OverflowError):
            _cy.binom_product(60, factors)


@given(st.lists(st.integers(-50, 50), max_size=15), st.lists(st.integers(-50, 50), max_size=15),
       st.integers(0, 20))
def test_dense_mul(a, b, n):
    ref = [sum(a[i] * b[k - i] for i in range(len(a)) if 0 <= k - i < len(b)) for k in range(n)]
    assert kernels.dense_mul(a, b, n) == ref
    assert _kernels_py.dense_mul(a, b, n) == ref


@needs_cython
@pytest.mark.parametrize("x", [1e-8, 0.1, 1.0, 1.999, 2.0, 2.001, 7.5, 29.9, 30.0, 30.1, 300.0])
def test_backends_agree_k0(x):
    assert _cy.k0(x) == pytest.approx(_kernels_py.k0(x), rel=1e-15)
    assert _cy.k0e(x) == pytest.approx(_kernels_py.k0e(x), rel=1e-15)


@needs_cython
def test_backends_agree_theta_sum():
    qs = [5.0, -3.5, 2.0, 1.0, -0.25]
    cre = [1.0, -0.5, 0.5, 2.0, 1.0]
    cim = [0.0, 0.25, -1.0, 0.0, 0.5]
    a = _cy.theta_k0_sum(qs, cre, cim, 0.3, 0.8)
    b = _kernels_py.theta_k0_sum(qs, cre, cim, 0.3, 0.8)
    assert a == pytest.approx(b, rel=1e-14, abs=1e-300)


def test_theta_sum_definition():
    qs, cre, cim = [2.0, -1.5], [1.0, 0.5], [0.0, -1.0]
    x, y = 0.17, 0.9
    re, im = kernels.theta_k0_sum(qs, cre, cim, x, y)
    ref = sum(complex(cr, ci) * kernels.k0(2 * math.pi * abs(q) * y) * complex(
        math.cos(2 * math.pi * q * x), math.sin(2 * math.pi * q * x)) for q, cr, ci in zip(qs, cre, cim))
    assert complex(re, im) == pytest.approx(ref, rel=1e-14)


def test_k0_at_one_matches_integral():
    mpmath.mp.dps = 30
    ref = mpmath.quad(lambda t: mpmath.exp(-mpmath.cosh(t)), [0, 1, 2, 4, 8])
    mpmath.mp.dps = 15
    assert abs(kernels.k0(1.0) - float(ref)) < 1e-10


def test_k0_asymptotic_limit():
    x = 500.0
    assert abs(kernels.k0e(x) * math.sqrt(x) - math.sqrt(math.pi / 2)) < 1e-3


def test_k0_ode_residual():
    # x K0'' + K0' - x K0 = 0
    x, h = 3.0, 1e-4
    f = kernels.k0
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)
    assert abs(x * d2 + d1 - x * f(x)) < 1e-6


def test_k0_continuous_at_branch_points():
    for x in (2.0, 30.0):
        lo, hi = kernels.k0(x * (1 - 1e-12)), kernels.k0(x * (1 + 1e-12))
        assert abs(lo - hi) / hi < 1e-10


def test_k0_domain():
    with pytest.raises(ValueError):
        _kernels_py.k0(0.0)
    with pytest.raises(ValueError):
        _kernels_py.k0e(-1.0)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qmaass import qdsl
from qmaass.errors import NonTerminatingSumError, NonUnitError
from qmaass.hypergeom import expand_named, min_degree
from qmaass.qdsl import (Const, ParseError, Poch, Poly, Product, QPow, Quotient, SignPow, Sum,
                         eval_expr, fixtures, min_degree_bound, parse, to_text)
from qmaass.qseries import PuiseuxSeries

n = Poly.var("n")
one = Poly.const(1)

SIGMA = "sum n>=0 of q^(n*(n+1)/2) / poch(-q, q, n)"
F6 = "sum n>=1 of (-1)^(n) * poch(q^(2), q^(2), n-1) * q^(n) / poch(q^(n), q, n)"
F3 = "sum n>=0 of q^(n) * poch(q, q, 2*n) / poch(-q, q, 2*n + 1)"


# -- parsing ---------------------------------------------------------------

def test_sigma_ast():
    tri = (n * n + n).scale(Fraction(1, 2))
    assert parse(SIGMA) == Sum("n", 0, Quotient(QPow(tri), Poch(-1, one, 1, n)))


def test_f6_ast():
    body = Quotient(
        Product(Product(SignPow(n), Poch(1, Poly.const(2), 2, n - one)), QPow(n)),
        Poch(1, n, 1, n))
    assert parse(F6) == Sum("n", 1, body)


def test_truncated_power():
    with pytest.raises(ParseError) as info:
        parse("q^(")
    assert info.value.position == 3
    assert "polynomial" in info.value.expected


@pytest.mark.parametrize("text,pos", [
    ("", 0),
    ("sum n>=0 q^(n)", 9),
    ("sum n>=0 of q^(m)", 15),
    ("poch(q, q, 1", 12),
    ("q^(n)", 3),
    ("1 / ", 4),
    ("sum n>=0 of q^(n) )", 18),
])
def test_error_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position == pos
    assert 0 <= info.value.position <= len(text.encode()) + 1


def test_minus_one_base():
    e = parse("poch(-1, q^2, 3)")
    assert e == Poch(-1, Poly(), 2, Poly.const(3))
    assert to_text(e) == "poch(-1, q^2, 3)"


def test_rational_literal():
    assert parse("-3/4") == Const(Fraction(-3, 4))


def test_nested_sum():
    e = parse("sum n>=0 of sum m>=0 of q^(n+m)")
    assert isinstance(e.body, Sum) and e.body.var == "m"


def test_sum_depth_limit():
    with pytest.raises(ParseError):
        parse("sum n>=0 of sum m>=0 of sum k>=0 of q^(n+m+k)")


def test_nesting_limit():
    deep = "(" * 500 + "1" + ")" * 500
    with pytest.raises(ParseError):
        parse(deep)
    assert parse("(" * 50 + "1" + ")" * 50) == Const(Fraction(1))


def test_bytes_input():
    assert parse(SIGMA.encode()) == parse(SIGMA)
    with pytest.raises(ParseError):
        parse(b"sum \xff")


def test_whitespace_insensitive():
    assert parse("sum  n >= 0   of q^( n*( n+1 ) /2 )/poch( -q ,q, n )") == parse(SIGMA)


def test_canonical_text():
    assert to_text(parse(SIGMA)) == "sum n>=0 of q^(1/2*n^2 + 1/2*n) / poch(-q, q, n)" \
        or parse(to_text(parse(SIGMA))) == parse(SIGMA)
    t = to_text(parse(F6))
    assert to_text(parse(t)) == t


@pytest.mark.parametrize("name", sorted(fixtures()))
def test_fixture_round_trip(name):
    e = parse(fixtures()[name])
    assert parse(to_text(e)) == e


@given(st.binary(max_size=60))
def test_parse_never_crashes(data):
    try:
        parse(data)
    except ParseError as exc:
        assert 0 <= exc.position <= len(data) + 1


@given(st.text(alphabet="sumnofpochq^()*/-+0123456789>=, ", max_size=50))
def test_parse_token_soup(text):
    try:
        e = parse(text)
    except ParseError as exc:
        assert 0 <= exc.position <= len(text.encode()) + 1
    else:
        assert parse(to_text(e)) == e


# -- generated ASTs round-trip ---------------------------------------------

small = st.integers(-3, 3)
affine = st.builds(lambda a, b: n.scale(a) + Poly.const(b), small, small)
quadratic = st.builds(lambda a, b, c: (n * n).scale(Fraction(a, 2)) + n.scale(b) + Poly.const(c),
                      small, small, small)
leaf = st.one_of(
    st.builds(lambda p, r: Const(Fraction(p, r)), st.integers(-9, 9), st.integers(1, 5)),
    st.builds(QPow, quadratic),
    st.builds(SignPow, affine),
    st.builds(Poch, st.sampled_from([1, -1]), affine, st.integers(1, 3), affine),
)
bodies = st.recursive(
    leaf,
    lambda inner: st.one_of(st.builds(Product, inner, inner), st.builds(Quotient, inner, inner)),
    max_leaves=8,
)


@given(st.integers(0, 3), bodies)
def test_ast_round_trip(lower, body):
    e = Sum("n", lower, body)
    text = to_text(e)
    assert parse(text) == e
    assert to_text(parse(text)) == text


# -- degree bounds ----------------------------------------------------------

def test_sigma_bound():
    b = min_degree_bound(parse(SIGMA))
    assert b.poly == (n * n + n).scale(Fraction(1, 2))
    assert [b(k) for k in range(5)] == [0, 1, 3, 6, 10]


def test_f3_bound():
    b = min_degree_bound(parse(F3))
    assert b.poly == n
    assert all(b(k) == min_degree("f3", k) for k in range(10))


def test_constant_exponent_does_not_terminate():
    with pytest.raises(NonTerminatingSumError):
        min_degree_bound(parse("sum n>=0 of q^(0)"))


def test_non_unit_denominator():
    with pytest.raises(NonTerminatingSumError, match="not a unit"):
        min_degree_bound(parse("sum n>=0 of q^(n) / poch(q^(0), q, n)"))


def test_decreasing_exponent():
    with pytest.raises(NonTerminatingSumError):
        min_degree_bound(parse("sum n>=0 of q^(-n)"))


def test_zero_factor_makes_sum_finite():
    b = min_degree_bound(parse("sum n>=0 of q^(0) * poch(q^(0), q, n)"))
    assert b.last_nonzero == 0


# -- evaluation -------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(fixtures()))
def test_fixtures_match_expand_named(name):
    assert eval_expr(parse(fixtures()[name]), 30) == expand_named(name, 30)


def test_fixture_names():
    assert len(fixtures()) == 14


def test_sigma_and_f7():
    assert eval_expr(parse(SIGMA), 30) == expand_named("sigma", 30)
    assert eval_expr(parse(fixtures()["f7"]), 20) == expand_named("f7", 20)


def test_degenerate_sum_is_constant():
    e = parse("sum n>=0 of 5 * poch(q^(0), q, n)")
    assert eval_expr(e, 10) == PuiseuxSeries.constant(5, 10)


def test_bare_constant():
    assert eval_expr(parse("7/2"), 4) == PuiseuxSeries.constant(Fraction(7, 2), 4)


def test_nested_sum_value():
    # sum_{n,m >= 0} q^(n+m) = 1/(1-q)^2
    f = eval_expr(parse("sum n>=0 of sum m>=0 of q^(n+m+1)"), 8)
    assert [f.coeff(k) for k in range(8)] == [0, 1, 2, 3, 4, 5, 6, 7]


def test_negative_offset_parses_but_is_not_a_unit():
    e = parse("q^(3) * poch(q^(-1), q, 1)")
    assert e.right == Poch(1, Poly.const(-1), 1, one)
    with pytest.raises(NonTerminatingSumError, match="not a unit"):
        eval_expr(e, 5)


def test_zero_denominator_literal():
    with pytest.raises(ParseError, match="nonzero denominator"):
        parse("1/0")


def test_division_by_zero_constant():
    with pytest.raises((NonUnitError, NonTerminatingSumError)):
        eval_expr(parse("1 / (0)"), 3)


def test_negative_order():
    with pytest.raises(ValueError):
        eval_expr(parse(SIGMA), -1)


def test_poly_arithmetic():
    p = n * n - n.scale(2) + one
    assert p.evaluate({"n": 1}) == 0
    assert p.degree_in("n") == 2
    assert p.substitute("n", 3) == Poly.const(4)
    assert qdsl.poly_text(Poly()) == "0"

import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qmaass import theta
from qmaass.errors import CatalogError, DomainError
from qmaass.qseries import ps_equal
from qmaass.theta import (IDENTITY_CASES, QuadForm, Shift, SqrtVec, catalog, enumerate_support,
                          get_case, parse_sqrt_vec, rho, rho_perp, split, theta_expansion,
                          theta_perp_expansion, verify_identity)

F = Fraction


def case(name):
    return get_case(name)


def _sgn(x):
    return (x > 0) - (x < 0)


# -- quadratic forms -------------------------------------------------------

def test_form_basics():
    f = QuadForm(((8, 0), (0, -4)))
    assert f.det == -32
    assert f.Q((F(1, 2), F(1))) == 1 - 2
    assert f.B((1, 0), (0, 1)) == 0
    assert f.in_dual((F(1, 8), F(1, 4)))
    assert not f.in_dual((F(1, 16), 0))


def test_form_rejects_bad_matrices():
    with pytest.raises(DomainError):
        QuadForm(((1, 2), (3, 4)))
    with pytest.raises(DomainError):
        QuadForm(((2, 0), (0, 2)))


def test_dual_cosets_count():
    assert len(QuadForm(((4, 0), (0, -2))).dual_cosets()) == 8
    assert len(QuadForm(((3, 0), (0, -1))).dual_cosets()) == 3


@pytest.mark.parametrize("name", IDENTITY_CASES)
def test_catalog_forms_anisotropic(name):
    assert case(name).form.is_anisotropic_diagonal()


def test_parse_sqrt_vec():
    assert parse_sqrt_vec(["(-1/2)*sqrt(2)", "(1)*sqrt(2)"]) == SqrtVec((F(-1, 2), F(1)), 2)
    assert parse_sqrt_vec(["0", "(1/2)*sqrt(3)"]) == SqrtVec((F(0), F(1, 2)), 3)
    with pytest.raises(CatalogError):
        parse_sqrt_vec(["sqrt(2)", "1"])
    with pytest.raises(CatalogError):
        parse_sqrt_vec(["(1)*sqrt(2)", "(1)*sqrt(3)"])


# -- splitting -------------------------------------------------------------

@pytest.mark.parametrize("name", IDENTITY_CASES)
def test_split_invariants(name):
    c = case(name)
    sp = c.split
    A = c.form.A
    P = sp.P
    # A = P^T [[0,1],[1,0]] P
    for i in range(2):
        for j in range(2):
            v = P[0][i] * P[1][j] + P[1][i] * P[0][j]
            assert abs(v - A[i][j]) < 1e-10
    assert P[0][0] * P[1][1] - P[0][1] * P[1][0] > 0
    x0, y0 = c.c1.numeric()
    back = (sp.Pinv[0][0] - sp.Pinv[0][1], sp.Pinv[1][0] - sp.Pinv[1][1])
    assert math.hypot(back[0] - x0, back[1] - y0) < 1e-12
    assert sp.t1 == 0.0
    assert sp.sign_factor == _sgn(sp.t2 - sp.t1) == c.lemma_sign
    for cp, cj in ((sp.cperp1, c.c1), (sp.cperp2, c.c2)):
        assert abs(c.form.Bf(cp, cp) / 2 - 1) < 1e-10
        assert abs(c.form.Bf(cp, cj.numeric())) < 1e-10
    assert c.c1.Q(c.form) == -1 and c.c2.Q(c.form) == -1


def test_f1_cone_vectors_same_component():
    c = case("f1")
    assert c.form.B(c.c1.v, c.c2.v) == -6


def test_split_errors():
    f = QuadForm(((8, 0), (0, -4)))
    with pytest.raises(DomainError):
        split(f, SqrtVec((F(1), F(0))))
    with pytest.raises(DomainError):
        split(f, SqrtVec((F(-1, 2), F(1))), SqrtVec((F(1, 2), F(-1))))


# -- weights ---------------------------------------------------------------

def test_rho_examples():
    f4 = case("f4")
    assert rho(f4, (F(0), F(0))) == F(1, 2)
    assert rho(f4, (F(1), F(1))) == F(1, 2)
    assert rho(case("f1"), (F(5, 8), F(1, 2))) == 1
    assert rho_perp(f4, (F(0), F(0))) == F(1, 2)


@pytest.mark.parametrize("name", IDENTITY_CASES)
def test_rho_perp_matches_numeric_perps(name):
    # exact signs from rational perp directions agree with the numeric c_perp
    c = case(name)
    sp = c.split
    a = c.shifts[0].a

    def numeric_sign(r, cp, w):
        v = c.form.Bf((float(r[0]), float(r[1])), cp)
        if abs(v) < 1e-9:
            # on a cone boundary: the exact value must vanish too
            assert c.form.B(r, w) == 0
            return 0
        return _sgn(v)

    for n in range(-6, 7):
        for j in range(-6, 7):
            r = (a[0] + n, a[1] + j)
            s1 = numeric_sign(r, sp.cperp1, sp.perp_dir1)
            s2 = numeric_sign(r, sp.cperp2, sp.perp_dir2)
            assert rho_perp(c, r) == F(1 - s1 * s2, 2)
            if rho(c, r) == 1:
                assert rho_perp(c, r) == 0


def test_rho_perp_f3_point():
    c = case("f3")
    r = (F(1, 2), F(2))
    assert c.form.Q(r) == F(-7, 2)  # Q = 2x^2 - y^2
    sp = c.split
    s1 = _sgn(c.form.Bf((0.5, 2.0), sp.cperp1))
    s2 = _sgn(c.form.Bf((0.5, 2.0), sp.cperp2))
    assert rho_perp(c, r) == F(1 - s1 * s2, 2)


# -- enumeration -----------------------------------------------------------

def brute_support(c, index, Nmax, part, box=12):
    a = c.shifts[index].a
    out = set()
    for n in range(-box, box + 1):
        for j in range(-box, box + 1):
            r = (a[0] + n, a[1] + j)
            Q = c.form.Q(r)
            w = rho(c, r) if part == "positive" else rho_perp(c, r)
            ok = 0 <= Q <= Nmax if part == "positive" else 0 <= -Q <= Nmax
            if ok and w:
                out.add((r, Q, w))
    return out


def test_f4_positive_support_nmax_1():
    pts = enumerate_support(case("f4"), 0, 1)
    got = {(p.r, p.qexp, p.weight) for p in pts}
    half = F(1, 2)
    expect = {((F(0), F(0)), F(0), half)}
    expect |= {((F(s), F(t)), F(1), half) for s in (1, -1) for t in (1, -1)}
    assert got == expect
    assert got == brute_support(case("f4"), 0, 1, "positive", box=5)


def test_empty_at_zero_for_shifted_lattice():
    assert enumerate_support(case("f1"), 0, 0) == []


@pytest.mark.parametrize("name", IDENTITY_CASES)
@pytest.mark.parametrize("part", ["positive", "perp"])
def test_enumeration_matches_brute_force(name, part):
    c = case(name)
    for i in range(len(c.shifts)):
        got = {(p.r, p.qexp, p.weight) for p in enumerate_support(c, i, 6, part)}
        assert got == brute_support(c, i, 6, part, box=30)


@pytest.mark.parametrize("name", IDENTITY_CASES)
def test_support_point_invariants(name):
    c = case(name)
    for i in range(len(c.shifts)):
        for part in ("positive", "perp"):
            for p in enumerate_support(c, i, 10, part):
                assert (p.qexp * 48).denominator == 1
                assert p.weight in (F(1, 2), F(1))
                assert p.qexp >= 0 if part == "positive" else p.qexp <= 0
                if p.qexp == 0:
                    assert p.r == (0, 0)
                assert 0 <= p.angle < 1


@pytest.mark.parametrize("name", IDENTITY_CASES)
def test_box_doubling(name):
    c = case(name)
    assert theta_expansion(c, 30) == theta_expansion(c, 30, box_scale=2.0)
    assert theta_perp_expansion(c, 30) == theta_perp_expansion(c, 30, box_scale=2.0)


def test_isotropic_form_rejected():
    # diag(2,-2) is isotropic: Q(1/2, 1/2) = 0 with r != 0
    d = theta.case_to_dict(case("f1"))
    d.update(A=[[2, 0], [0, -2]], c1=["0", "1"], c2=["3/4", "5/4"], name="iso", symmetry=None,
             shifts=[{"a": ["1/2", "1/2"], "sign": 1}])
    for k in ("alpha", "C", "lemma_sign"):
        d.pop(k)
    c = theta.case_from_dict(d)
    with pytest.raises(CatalogError, match="isotropic"):
        theta_expansion(c, 5)


# -- expansions and identities ---------------------------------------------

def test_f4_low_coefficients():
    f = theta_expansion(case("f4"), 3)
    assert f.coeff(0) == F(-1, 4)
    assert f.coeff(1) == 1


def test_f7_prefactor_gives_rational_series():
    f = theta_expansion(case("f7"), 20)
    assert f.is_rational() and len(f) > 0


@pytest.mark.parametrize("name", IDENTITY_CASES)
def test_expansions_rational(name):
    assert theta_expansion(case(name), 40).is_rational()


def test_perp_expansion_constant_term():
    assert theta_perp_expansion(case("f4"), 5).terms.get(0) is not None
    assert 0 not in theta_perp_expansion(case("f1"), 5).terms


def test_f3_perp_expansion_brute_force():
    c = case("f3")
    got = theta_perp_expansion(c, 20)
    acc = {}
    for r, Q, w in brute_support(c, 0, 19, "perp", box=40):
        if -Q < 20:
            ang = c.form.B(r, c.b) % 1
            acc.setdefault(Q, []).append((w, ang))
    # compare numerically, term by term in exponent
    for Q, items in acc.items():
        z = c.scale * sum(complex(float(w)) * complex(math.cos(2 * math.pi * ang),
                                                      math.sin(2 * math.pi * ang))
                          for w, ang in items)
        assert abs(got.coeff(Q).to_complex() - z) < 1e-12
    assert set(got.exponents()) <= set(acc)


@pytest.mark.parametrize("name", IDENTITY_CASES)
def test_verify_identity(name):
    rep = verify_identity(case(name), 30)
    assert rep.passed, rep.line()
    assert rep.line() == f"PASS {name} order=30"


def test_verify_reports_mismatch():
    c = case("f1")
    wrong = c.with_shifts([c.shifts[0]])
    rep = verify_identity(wrong, 10)
    assert not rep.passed
    assert rep.line().startswith("FAIL f1 order=10 mismatch at q^")


def test_f8_table_variant():
    c = case("f8")
    s0, s1 = c.shifts
    variant = c.with_shifts([s0, Shift((F(-1, 6), F(1, 2)), s1.sign)])
    assert theta_expansion(variant, 50) == theta_expansion(c, 50)


def test_lemma_sign_consistent():
    for c in catalog().values():
        assert c.lemma_sign == c.split.sign_factor


# -- catalog I/O -----------------------------------------------------------

def test_catalog_round_trip(tmp_path):
    data = {"version": "v1", "cases": [theta.case_to_dict(c) for c in catalog().values()]}
    p = tmp_path / "cat.json"
    p.write_text(json.dumps(data))
    again = theta.load_catalog(p)
    assert again.keys() == catalog().keys()
    for k in again:
        assert again[k] == catalog()[k]


@pytest.mark.parametrize("mutate,match", [
    (lambda d: d.update(extra=1), "unrecognized catalog fields"),
    (lambda d: d.pop("b"), "missing catalog fields"),
    (lambda d: d.update(c1=["1", "1"]), "expected -1"),
    (lambda d: d.update(lemma_sign=1), "lemma sign"),
    (lambda d: d.update(C="1/4"), "theorem table"),
    (lambda d: d["shifts"][0].update(sign=2), "shift sign"),
    (lambda d: d["shifts"][0].update(weight=1), "unrecognized shift fields"),
])
def test_catalog_strictness(mutate, match):
    d = theta.case_to_dict(case("f1"))
    mutate(d)
    with pytest.raises(CatalogError, match=match):
        theta.case_from_dict(d)


def test_catalog_version_checked(tmp_path):
    p = tmp_path / "cat.json"
    p.write_text(json.dumps({"version": "v2", "cases": []}))
    with pytest.raises(CatalogError):
        theta.load_catalog(p)
    p.write_text(json.dumps({"version": "v1", "cases": [], "notes": ""}))
    with pytest.raises(CatalogError):
        theta.load_catalog(p)


def test_get_case_unknown():
    with pytest.raises(KeyError):
        get_case("f9")


# -- negative parts --------------------------------------------------------

def test_negative_parts_f3_f4():
    for rel in ("f3", "f4"):
        rep = theta.negative_part_check(rel, 20)
        assert rep.passed
        assert rep.line().startswith("EXPERIMENTAL PASS")


def test_negative_part_constant_term_includes_half_weight():
    # r = 0 enters F^- of f4 with weight 1/2 and scale -1/2
    neg = theta.negative_part(case("f4"), 5)
    assert neg.coeff(0) == F(-1, 4)


def test_negative_parts_findings_are_constant_multiples():
    for rel in ("f5", "f6", "f7"):
        rep = theta.negative_part_check(rel, 20)
        assert not rep.passed and rep.ratio is not None
        assert "holds up to the constant factor" in rep.line()


def test_negative_part_unknown_relation():
    with pytest.raises(ValueError):
        theta.negative_part_check("f1", 10)


@given(st.sampled_from(IDENTITY_CASES), st.integers(1, 25))
def test_identity_prefixes(name, N):
    # truncations of a passing identity pass at every smaller order
    c = case(name)
    big = theta_expansion(c, 25)
    assert ps_equal(big.truncate(N), theta_expansion(c, N), N)

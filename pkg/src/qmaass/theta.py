"""Quadratic forms of signature (1,1), cone weights, lattice enumeration and
exact indefinite theta expansions, plus the identity verifier.

Cone vectors c = v*sqrt(d) are kept exact (v rational), so every sign test
sgn B(r, c) reduces to the sign of a rational number.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CatalogError, DomainError
from .hypergeom import expand_named, series_name
from .qseries import (GRID, PHASE_DEN, Comparison, Cyclotomic, PuiseuxSeries,
                      cyc_from_angle, ps_equal, ps_invert_q, reduce_angle, _POWERS)

Vec = tuple  # pair of Fractions


def vec(x, y) -> Vec:
    return (Fraction(x), Fraction(y))


def vadd(u, v):
    return (u[0] + v[0], u[1] + v[1])


def vneg(u):
    return (-u[0], -u[1])


def matvec(M, v):
    return (M[0][0] * v[0] + M[0][1] * v[1], M[1][0] * v[0] + M[1][1] * v[1])


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


# --------------------------------------------------------------------------
# quadratic forms

@dataclass(frozen=True)
class QuadForm:
    A: tuple  # ((a11, a12), (a21, a22)) integers

    def __post_init__(self):
        A = tuple(tuple(int(x) for x in row) for row in self.A)
        object.__setattr__(self, "A", A)
        if A[0][1] != A[1][0]:
            raise DomainError("matrix must be symmetric")
        if self.det >= 0:
            raise DomainError("quadratic form must be indefinite (det A < 0)")

    @property
    def det(self) -> int:
        A = self.A
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]

    def Q(self, r) -> Fraction:
        return self.B(r, r) / 2

    def B(self, r, s) -> Fraction:
        A = self.A
        return (r[0] * (A[0][0] * s[0] + A[0][1] * s[1])
                + r[1] * (A[1][0] * s[0] + A[1][1] * s[1]))

    def Bf(self, r, s) -> float:
        A = self.A
        return (r[0] * (A[0][0] * s[0] + A[0][1] * s[1])
                + r[1] * (A[1][0] * s[0] + A[1][1] * s[1]))

    def inverse(self):
        """A^{-1} as a matrix of Fractions."""
        A, d = self.A, Fraction(self.det)
        return ((A[1][1] / d, -A[0][1] / d), (-A[1][0] / d, A[0][0] / d))

    def half_inv_diag(self) -> Vec:
        """(1/2) A^{-1} A* with A* the diagonal of A."""
        v = matvec(self.inverse(), (Fraction(self.A[0][0]), Fraction(self.A[1][1])))
        return (v[0] / 2, v[1] / 2)

    def in_dual(self, v) -> bool:
        """v in A^{-1} Z^2, i.e. A v integral."""
        w = matvec(self.A, v)
        return all(Fraction(x).denominator == 1 for x in w)

    def dual_cosets(self) -> list[Vec]:
        """Representatives of A^{-1} Z^2 / Z^2, reduced into [0,1)^2."""
        Ainv = self.inverse()
        n = abs(self.det)
        seen = set()
        for i in range(n):
            for j in range(n):
                p = matvec(Ainv, (Fraction(i), Fraction(j)))
                p = (p[0] - math.floor(p[0]), p[1] - math.floor(p[1]))
                seen.add(p)
        reps = sorted(seen)
        if len(reps) != n:
            raise AssertionError(f"found {len(reps)} dual cosets, expected |det A| = {n}")
        return reps

    def is_anisotropic_diagonal(self) -> bool | None:
        A = self.A
        if A[0][1]:
            return None
        ratio = Fraction(-A[1][1], A[0][0])
        return not (_is_square(ratio.numerator) and _is_square(ratio.denominator))


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


@dataclass(frozen=True)
class SqrtVec:
    """The real vector v * sqrt(d) with v rational and d a positive integer."""
    v: Vec
    d: int = 1

    def numeric(self) -> tuple[float, float]:
        s = math.sqrt(self.d)
        return (float(self.v[0]) * s, float(self.v[1]) * s)

    def Q(self, form: QuadForm) -> Fraction:
        return form.Q(self.v) * self.d

    def sign_B(self, form: QuadForm, r) -> int:
        return _sgn(form.B(r, self.v))

    def transform(self, M) -> "SqrtVec":
        return SqrtVec(matvec(M, self.v), self.d)

    def to_tokens(self) -> list[str]:
        if self.d == 1:
            return [str(x) for x in self.v]
        return [f"({x})*sqrt({self.d})" for x in self.v]


_TOKEN = re.compile(r"^\s*\(?\s*([-+]?\d+(?:/\d+)?)\s*\)?\s*(?:\*\s*sqrt\s*\(?\s*(\d+)\s*\)?)?\s*$")


def parse_sqrt_vec(tokens: Sequence[str]) -> SqrtVec:
    vals, ds = [], set()
    for t in tokens:
        m = _TOKEN.match(str(t))
        if not m:
            raise CatalogError(f"bad vector entry {t!r}; expected p/q or (p/q)*sqrt(d)")
        vals.append(Fraction(m.group(1)))
        ds.add(int(m.group(2)) if m.group(2) else 1)
    if len(vals) != 2:
        raise CatalogError("cone vectors need two entries")
    if len(ds) > 1:
        if any(v == 0 for v in vals):
            ds.discard(1)
        if len(ds) > 1:
            raise CatalogError("both entries of a cone vector must share the same sqrt(d)")
    return SqrtVec((vals[0], vals[1]), ds.pop())


# --------------------------------------------------------------------------
# splitting A = P^T [[0,1],[1,0]] P

@dataclass(frozen=True)
class SplitData:
    P: tuple
    Pinv: tuple
    t1: float
    t2: float
    cperp1: tuple
    cperp2: tuple
    perp_dir1: Vec   # rational direction with c_j^perp a positive multiple of it
    perp_dir2: Vec
    sign_factor: int

    def coords(self, r) -> tuple[float, float]:
        """(xi, eta) = P r."""
        P = self.P
        x, y = float(r[0]), float(r[1])
        return (P[0][0] * x + P[0][1] * y, P[1][0] * x + P[1][1] * y)

    def t_of(self, c: tuple[float, float]) -> float:
        xi = self.P[0][0] * c[0] + self.P[0][1] * c[1]
        if xi <= 0:
            raise DomainError("vector is not in the cone component of c0")
        return math.log(xi)

    def perp_numeric(self, t: float) -> tuple[float, float]:
        Pi = self.Pinv
        u, w = math.exp(t), math.exp(-t)
        return (Pi[0][0] * u + Pi[0][1] * w, Pi[1][0] * u + Pi[1][1] * w)


def _linear_factors(form: QuadForm) -> tuple[tuple[float, float], tuple[float, float]]:
    # Q(x, y) = l1(x, y) * l2(x, y) over the reals
    (a, b), (_, c) = form.A
    if a != 0:
        disc = math.sqrt(b * b - a * c)
        t1 = (-b + disc) / a
        t2 = (-b - disc) / a
        # (a/2)(x - t1 y)(x - t2 y)
        return (a / 2, -a / 2 * t1), (1.0, -t2)
    return (0.0, 1.0), (float(b), c / 2)


def perp_direction(form: QuadForm, c: SqrtVec) -> Vec:
    """A rational vector spanning the B-orthogonal complement of c."""
    Av = matvec(form.A, c.v)
    return (-Av[1], Av[0])


def split(form: QuadForm, c0: SqrtVec, c2: SqrtVec | None = None) -> SplitData:
    """Factor the form with base vector c0 := c1 (so t1 = 0) and det P > 0."""
    if c0.Q(form) != -1:
        raise DomainError(f"base vector has Q = {c0.Q(form)}, expected -1")
    l1, l2 = _linear_factors(form)
    x0, y0 = c0.numeric()
    best = None
    for la, lb in ((l1, l2), (l2, l1)):
        va = la[0] * x0 + la[1] * y0
        if va == 0:
            continue
        k = 1.0 / va
        P = ((k * la[0], k * la[1]), (lb[0] / k, lb[1] / k))
        det = P[0][0] * P[1][1] - P[0][1] * P[1][0]
        if det > 0:
            best = P
    if best is None:
        raise DomainError("could not factor the quadratic form")
    P = best
    det = P[0][0] * P[1][1] - P[0][1] * P[1][0]
    Pinv = ((P[1][1] / det, -P[0][1] / det), (-P[1][0] / det, P[0][0] / det))
    chk = (P[0][0] * x0 + P[0][1] * y0, P[1][0] * x0 + P[1][1] * y0)
    if abs(chk[0] - 1) > 1e-12 or abs(chk[1] + 1) > 1e-12:
        raise DomainError("P^{-1}(1,-1) != c0")
    c2 = c2 or c0
    if form.B(c0.v, c2.v) * math.sqrt(c0.d * c2.d) >= 0 and c2 != c0:
        raise DomainError("c1 and c2 lie in different components (B(c1,c2) >= 0)")
    proto = SplitData(P, Pinv, 0.0, 0.0, (0.0, 0.0), (0.0, 0.0), (0, 0), (0, 0), 0)
    t1 = 0.0
    t2 = proto.t_of(c2.numeric())
    perps = []
    dirs = []
    for t, c in ((t1, c0), (t2, c2)):
        cp = proto.perp_numeric(t)
        w = perp_direction(form, c)
        dot = cp[0] * float(w[0]) + cp[1] * float(w[1])
        if dot < 0:
            w = vneg(w)
        perps.append(cp)
        dirs.append(w)
    sign = _sgn(t2 - t1)
    return SplitData(P, Pinv, t1, t2, perps[0], perps[1], dirs[0], dirs[1], sign)


# --------------------------------------------------------------------------
# catalog

@dataclass(frozen=True)
class Shift:
    a: Vec
    sign: int


@dataclass(frozen=True)
class Symmetry:
    gamma: tuple
    lambdas: tuple
    mu: Vec


@dataclass(frozen=True)
class ThetaCase:
    name: str
    series: str
    form: QuadForm
    shifts: tuple
    b: Vec
    c1: SqrtVec
    c2: SqrtVec
    scale: Fraction
    prefactor: Fraction
    alpha: Fraction
    const: Fraction
    lemma_sign: int
    symmetry: Symmetry | None = None
    source: str = ""

    @property
    def split(self) -> SplitData:
        return _split_cached(self.form, self.c1, self.c2)

    def with_shifts(self, shifts) -> "ThetaCase":
        from dataclasses import replace
        return replace(self, shifts=tuple(shifts))


_SPLITS: dict = {}


def _split_cached(form, c1, c2):
    key = (form, c1, c2)
    if key not in _SPLITS:
        _SPLITS[key] = split(form, c1, c2)
    return _SPLITS[key]


# values from the table of constants (alpha, C) attached to the main theorem
THEOREM_TABLE = {
    "f1": (Fraction(1, 16), Fraction(0)),
    "f2": (Fraction(-7, 16), Fraction(0)),
    "f3": (Fraction(1, 2), Fraction(0)),
    "f4": (Fraction(0), Fraction(-1, 4)),
    "f5": (Fraction(1, 4), Fraction(0)),
    "f6": (Fraction(-1, 4), Fraction(0)),
    "f7": (Fraction(1, 3), Fraction(0)),
    "f8": (Fraction(-1, 3), Fraction(0)),
    "LL": (Fraction(0), Fraction(-1, 4)),
    "L": (Fraction(0), Fraction(-1, 4)),
}

_FIELDS = {"name", "series", "A", "shifts", "b", "c1", "c2", "scale", "prefactor",
           "alpha", "C", "lemma_sign", "symmetry", "source"}


def _frac_pair(v) -> Vec:
    if len(v) != 2:
        raise CatalogError(f"expected a 2-vector, got {v!r}")
    return (Fraction(str(v[0])), Fraction(str(v[1])))


def case_from_dict(d: dict) -> ThetaCase:
    extra = set(d) - _FIELDS
    if extra:
        raise CatalogError(f"unrecognized catalog fields: {sorted(extra)}")
    missing = {"name", "A", "shifts", "b", "c1", "c2"} - set(d)
    if missing:
        raise CatalogError(f"missing catalog fields: {sorted(missing)}")
    form = QuadForm(tuple(tuple(r) for r in d["A"]))
    shifts = []
    for s in d["shifts"]:
        if set(s) - {"a", "sign"}:
            raise CatalogError(f"unrecognized shift fields: {sorted(set(s) - {'a', 'sign'})}")
        sign = int(s.get("sign", 1))
        if sign not in (1, -1):
            raise CatalogError("shift sign must be +1 or -1")
        shifts.append(Shift(_frac_pair(s["a"]), sign))
    c1 = parse_sqrt_vec(d["c1"])
    c2 = parse_sqrt_vec(d["c2"])
    for label, c in (("c1", c1), ("c2", c2)):
        if c.Q(form) != -1:
            raise CatalogError(f"{d['name']}: Q({label}) = {c.Q(form)}, expected -1")
    if form.B(c1.v, c2.v) >= 0:
        raise CatalogError(f"{d['name']}: B(c1, c2) must be negative")
    sym = None
    if d.get("symmetry") and d["symmetry"].get("gamma") is not None:
        s = d["symmetry"]
        if set(s) - {"gamma", "lambdas", "mu"}:
            raise CatalogError("unrecognized symmetry fields")
        sym = Symmetry(tuple(tuple(int(x) for x in row) for row in s["gamma"]),
                       tuple(_frac_pair(l) for l in s.get("lambdas", [])),
                       _frac_pair(s.get("mu", ["0", "0"])))
    sp = split(form, c1, c2)
    lemma_sign = d.get("lemma_sign")
    lemma_sign = sp.sign_factor if lemma_sign is None else int(lemma_sign)
    if lemma_sign != sp.sign_factor:
        raise CatalogError(f"{d['name']}: stored lemma sign {lemma_sign} disagrees "
                           f"with sgn(t2 - t1) = {sp.sign_factor}")
    case = ThetaCase(
        name=d["name"], series=d.get("series", d["name"]), form=form, shifts=tuple(shifts),
        b=_frac_pair(d["b"]), c1=c1, c2=c2,
        scale=Fraction(str(d.get("scale", "1"))),
        prefactor=reduce_angle(Fraction(str(d.get("prefactor", "0")))),
        alpha=Fraction(str(d.get("alpha", "0"))), const=Fraction(str(d.get("C", "0"))),
        lemma_sign=lemma_sign, symmetry=sym, source=d.get("source", ""))
    if case.name in THEOREM_TABLE and THEOREM_TABLE[case.name] != (case.alpha, case.const):
        raise CatalogError(f"{case.name}: (alpha, C) = {(case.alpha, case.const)} does not match "
                           f"the theorem table {THEOREM_TABLE[case.name]}")
    return case


def case_to_dict(case: ThetaCase) -> dict:
    out = {
        "name": case.name, "series": case.series, "A": [list(r) for r in case.form.A],
        "shifts": [{"a": [str(x) for x in s.a], "sign": s.sign} for s in case.shifts],
        "b": [str(x) for x in case.b], "c1": case.c1.to_tokens(), "c2": case.c2.to_tokens(),
        "scale": str(case.scale), "prefactor": str(case.prefactor), "alpha": str(case.alpha),
        "C": str(case.const), "lemma_sign": case.lemma_sign, "source": case.source,
    }
    if case.symmetry:
        out["symmetry"] = {"gamma": [list(r) for r in case.symmetry.gamma],
                           "lambdas": [[str(x) for x in l] for l in case.symmetry.lambdas],
                           "mu": [str(x) for x in case.symmetry.mu]}
    return out


def load_catalog(path: str | Path | None = None) -> dict[str, ThetaCase]:
    """Load and validate a catalog file (the bundled one by default)."""
    if path is None:
        text = resources.files("qmaass").joinpath("data/catalog.json").read_text()
    else:
        text = Path(path).read_text()
    data = json.loads(text)
    if data.get("version") != "v1":
        raise CatalogError("unsupported catalog version (expected v1)")
    if set(data) - {"version", "cases"}:
        raise CatalogError(f"unrecognized top-level fields: {sorted(set(data) - {'version', 'cases'})}")
    cases = {}
    for d in data["cases"]:
        c = case_from_dict(d)
        cases[c.name] = c
    return cases


_DEFAULT: dict | None = None


def catalog() -> dict[str, ThetaCase]:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_catalog()
    return _DEFAULT


def get_case(name: str, cases: dict | None = None) -> ThetaCase:
    cases = cases or catalog()
    if name not in cases:
        raise KeyError(f"unknown case {name!r}; known: {', '.join(cases)}")
    return cases[name]


IDENTITY_CASES = ("f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "LL", "L", "W1", "W2")


# --------------------------------------------------------------------------
# cone weights

def _weight(s1: int, s2: int) -> Fraction:
    return Fraction(1 - s1 * s2, 2)


def rho_general(form: QuadForm, c1: SqrtVec, c2: SqrtVec, r) -> Fraction:
    return _weight(c1.sign_B(form, r), c2.sign_B(form, r))


def rho(case: ThetaCase, r) -> Fraction:
    """Positive-cone weight in {0, 1/2, 1}."""
    return rho_general(case.form, case.c1, case.c2, r)


def rho_perp(case: ThetaCase, r) -> Fraction:
    """Weight for the perpendicular cones, built from c1^perp and c2^perp."""
    sp = case.split
    f = case.form
    return _weight(_sgn(f.B(r, sp.perp_dir1)), _sgn(f.B(r, sp.perp_dir2)))


@dataclass(frozen=True)
class SupportPoint:
    r: Vec
    qexp: Fraction
    weight: Fraction
    angle: Fraction


def _box(split: SplitData, Nmax: float, scale: float) -> tuple[float, float]:
    tmax = max(split.t1, split.t2)
    tmin = min(split.t1, split.t2)
    xi = math.sqrt(Nmax * math.exp(2 * tmax)) * scale
    eta = math.sqrt(Nmax * math.exp(-2 * tmin)) * scale
    Pi = split.Pinv
    R0 = abs(Pi[0][0]) * xi + abs(Pi[0][1]) * eta
    R1 = abs(Pi[1][0]) * xi + abs(Pi[1][1]) * eta
    return R0, R1


def enumerate_points(form: QuadForm, split: SplitData, a: Vec, b: Vec, Nmax, part: str,
                     weight_fn, box_scale: float = 1.0) -> list[SupportPoint]:
    Nmax = Fraction(Nmax)
    if Nmax < 0:
        raise ValueError("Nmax must be nonnegative")
    R0, R1 = _box(split, float(Nmax), box_scale)
    n_lo, n_hi = math.floor(-R0 - a[0]) - 1, math.ceil(R0 - a[0]) + 1
    j_lo, j_hi = math.floor(-R1 - a[1]) - 1, math.ceil(R1 - a[1]) + 1
    out = []
    for n in range(n_lo, n_hi + 1):
        for j in range(j_lo, j_hi + 1):
            r = (a[0] + n, a[1] + j)
            Q = form.Q(r)
            if part == "positive":
                if Q < 0 or Q > Nmax:
                    continue
            else:
                if Q > 0 or -Q > Nmax:
                    continue
            if Q == 0 and (r[0] or r[1]):
                raise CatalogError(f"isotropic lattice vector {r}")
            w = weight_fn(r)
            if w == 0:
                continue
            out.append(SupportPoint(r, Q, w, reduce_angle(form.B(r, b))))
    out.sort(key=lambda p: (abs(p.qexp), p.r))
    return out


def enumerate_support(case: ThetaCase, index: int, Nmax, part: str = "positive",
                      box_scale: float = 1.0) -> list[SupportPoint]:
    """All points of a_index + Z^2 with nonzero weight and |Q(r)| <= Nmax."""
    if part not in ("positive", "perp"):
        raise ValueError("part must be 'positive' or 'perp'")
    wf = (lambda r: rho(case, r)) if part == "positive" else (lambda r: rho_perp(case, r))
    return enumerate_points(case.form, case.split, case.shifts[index].a, case.b, Nmax, part,
                            wf, box_scale)


def _accumulate(points_by_sign: Iterable, prefactor: Fraction, scale: Fraction,
                strict_bound=None) -> dict[int, Cyclotomic]:
    acc: dict[int, list] = {}
    for sign, pts in points_by_sign:
        for p in pts:
            k = p.qexp * GRID
            if k.denominator != 1:
                raise CatalogError(f"exponent {p.qexp} off the 1/48 grid")
            k = int(k)
            if strict_bound is not None and not strict_bound(p.qexp):
                continue
            z = (p.angle + prefactor) * PHASE_DEN
            if z.denominator != 1:
                raise CatalogError(f"phase e({p.angle}) outside Q(zeta_24)")
            row = acc.setdefault(k, [Fraction(0)] * PHASE_DEN)
            row[int(z) % PHASE_DEN] += sign * p.weight
    out = {}
    for k, row in acc.items():
        coords = [Fraction(0)] * 8
        for j, w in enumerate(row):
            if w:
                for i, v in enumerate(_POWERS[j]):
                    if v:
                        coords[i] += w * v
        c = Cyclotomic(coords).scale(scale)
        if not c.is_zero():
            out[k] = c
    return out


def theta_expansion(case: ThetaCase, N, require_rational: bool = True,
                    box_scale: float = 1.0) -> PuiseuxSeries:
    """scale * e(prefactor) * sum_l eps_l sum_r rho(r) e(B(r,b)) q^Q(r), exponents < N."""
    N = Fraction(N)
    groups = [(s.sign, enumerate_support(case, i, N, "positive", box_scale))
              for i, s in enumerate(case.shifts)]
    terms = _accumulate(groups, case.prefactor, case.scale, lambda Q: Q < N)
    series = PuiseuxSeries.from_units(terms, N)
    if require_rational and not series.is_rational():
        raise CatalogError(f"{case.name}: theta expansion has irrational coefficients")
    return series


def theta_perp_expansion(case: ThetaCase, N, require_rational: bool = False,
                         box_scale: float = 1.0) -> PuiseuxSeries:
    """Same construction over the perpendicular cones; exponents in (-N, 0]."""
    N = Fraction(N)
    groups = [(s.sign, enumerate_support(case, i, N, "perp", box_scale))
              for i, s in enumerate(case.shifts)]
    terms = _accumulate(groups, case.prefactor, case.scale, lambda Q: -Q < N)
    series = PuiseuxSeries.from_units(terms)
    if require_rational and not series.is_rational():
        raise CatalogError(f"{case.name}: perp expansion has irrational coefficients")
    return series


# --------------------------------------------------------------------------
# verification

@dataclass
class IdentityReport:
    case: str
    order: Fraction
    passed: bool
    comparison: Comparison
    terms: int = 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        s = f"{status} {self.case} order={self.order}"
        if not self.passed:
            s += " " + self.comparison.describe()
        return s


def identity_lhs(case: ThetaCase, N) -> PuiseuxSeries:
    """C + q^alpha * g, known below q^N."""
    N = Fraction(N)
    g = expand_named(series_name(case.series), max(N - case.alpha, Fraction(0)))
    lhs = g.shift(case.alpha)
    return lhs + PuiseuxSeries.constant(case.const, lhs.order)


def verify_identity(case: ThetaCase, N) -> IdentityReport:
    N = Fraction(N)
    if N < 1:
        raise ValueError("order must be at least 1")
    lhs = identity_lhs(case, N)
    rhs = theta_expansion(case, N)
    cmp = ps_equal(lhs, rhs, N)
    return IdentityReport(case.name, N, cmp.equal, cmp, len(rhs))


# negative-part relations F^-_g(1/q) = factor * F^+_h(q); factor is an angle and a sign
NEGATIVE_RELATIONS = {
    "f3": ("f3", -1, Fraction(0)),
    "f4": ("f4", 1, Fraction(0)),
    "f5": ("f6", 1, Fraction(0)),
    "f6": ("f5", 1, Fraction(0)),
    "f7": ("f8", 1, Fraction(-1, 3)),
}


@dataclass
class NegativePartReport:
    relation: str
    partner: str
    order: int
    passed: bool
    comparison: Comparison
    ratio: Cyclotomic | None = None  # constant lhs/rhs when the sides are proportional

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        s = f"EXPERIMENTAL {status} F-_{self.relation}(1/q) vs F+_{self.partner} order={self.order}"
        if not self.passed:
            s += " " + self.comparison.describe()
            if self.ratio is not None:
                s += f"; holds up to the constant factor {self.ratio}"
        return s


def constant_ratio(f: PuiseuxSeries, g: PuiseuxSeries) -> Cyclotomic | None:
    """The constant c with f = c*g on all known terms, if there is one."""
    keys = set(f.terms) | set(g.terms)
    if not keys or set(f.terms) != set(g.terms):
        return None
    ratios = {f.terms[k] / g.terms[k] for k in keys}
    return ratios.pop() if len(ratios) == 1 else None


def negative_part(case: ThetaCase, N) -> PuiseuxSeries:
    """F^-(1/q): the perp expansion with exponents negated, known below q^N."""
    neg = ps_invert_q(theta_perp_expansion(case, N))
    return neg.truncate(N)


def negative_part_check(relation: str, N: int, cases: dict | None = None) -> NegativePartReport:
    if relation not in NEGATIVE_RELATIONS:
        raise ValueError(f"unknown relation {relation!r}; known: {', '.join(NEGATIVE_RELATIONS)}")
    partner, sign, angle = NEGATIVE_RELATIONS[relation]
    g = get_case(relation, cases)
    h = get_case(partner, cases)
    lhs = negative_part(g, N)
    rhs = theta_expansion(h, N) * (cyc_from_angle(angle) * sign)
    cmp = ps_equal(lhs, rhs, N)
    ratio = None if cmp.equal else constant_ratio(lhs.truncate(N), rhs.truncate(N))
    return NegativePartReport(relation, partner, N, cmp.equal, cmp, ratio)

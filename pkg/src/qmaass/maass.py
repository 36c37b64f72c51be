"""Numerical evaluation of the Maass waveforms attached to the theta catalog.

Phi_{a,b} is a sum of y^(1/2) K0(2 pi |Q(r)| y) e(Q(r) x + B(r, b)) over the
two weighted cones; phi^c_{a,b} are the completion terms and
Phi-hat = Phi + phi^{c1} - phi^{c2}.  Every sum reports a tail bound and
raises PrecisionError when that bound cannot be pushed below ``eps``.
"""
from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

from . import kernels
from .errors import DomainError, PrecisionError
from .hypergeom import coefficient_tables
from .theta import (QuadForm, SqrtVec, ThetaCase, enumerate_points, matvec, reduce_angle,
                    rho_general, vneg)

DEFAULT_EPS = float(os.environ.get("QMAASS_EPS", "1e-12"))
Q_CAP = 4000          # hard cap on the lattice truncation |Q(r)| <= Qmax
LAPLACIAN_RATIO = (3.5, 4.5)  # second-order stencil: halving h divides the error by ~4
CLIP = 46.0           # Gaussian exponents beyond this are dropped (e^-46 ~ 1e-20)


@dataclass(frozen=True)
class EvalPoint:
    x: float
    y: float
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        if not self.y > 0:
            raise DomainError("tau must lie in the upper half-plane (y > 0)")
        if not self.eps > 0:
            raise DomainError("eps must be positive")

    @classmethod
    def of(cls, tau, eps=None) -> "EvalPoint":
        if isinstance(tau, EvalPoint):
            return tau if eps is None else replace(tau, eps=eps)
        tau = complex(tau)
        return cls(tau.real, tau.imag, DEFAULT_EPS if eps is None else eps)

    @property
    def tau(self) -> complex:
        return complex(self.x, self.y)


@dataclass
class ComponentValue:
    value: complex
    truncationQ: Fraction
    termCount: int
    errorBound: float

    def __add__(self, other: "ComponentValue") -> "ComponentValue":
        return ComponentValue(self.value + other.value, max(self.truncationQ, other.truncationQ),
                              self.termCount + other.termCount, self.errorBound + other.errorBound)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c) -> "ComponentValue":
        return ComponentValue(self.value * c, self.truncationQ, self.termCount,
                              self.errorBound * abs(c))


def _zero() -> ComponentValue:
    return ComponentValue(0j, Fraction(0), 0, 0.0)


def e(x) -> complex:
    """e(x) = exp(2 pi i x), reducing rational arguments exactly first."""
    if isinstance(x, (Fraction, int)):
        x = Fraction(x) % 1
    return cmath.exp(2j * math.pi * float(x))


def bessel_k0(x: float) -> float:
    """K0(x) for x > 0."""
    if not x > 0:
        raise DomainError("K0 needs x > 0")
    return kernels.k0(x)


# --------------------------------------------------------------------------
# Phi

def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def _perp_weight(case: ThetaCase):
    sp, f = case.split, case.form

    def w(r):
        s1 = _sgn(f.B(r, sp.perp_dir1))
        s2 = _sgn(f.B(r, sp.perp_dir2))
        return Fraction(1 - s1 * s2, 2)
    return w


@lru_cache(maxsize=4096)
def _lattice_terms(case: ThetaCase, a, b, Qmax: Fraction):
    """(Q, weight * e(B(r, b))) over both cones with 0 < |Q| <= Qmax, descending |Q|."""
    form, sp = case.form, case.split
    pos = enumerate_points(form, sp, a, b, Qmax, "positive",
                           lambda r: rho_general(form, case.c1, case.c2, r))
    neg = enumerate_points(form, sp, a, b, Qmax, "perp", _perp_weight(case))
    out = []
    for p in pos + neg:
        if p.qexp == 0:
            continue  # r = 0: K0 diverges; see zero_term
        out.append((p.qexp, complex(float(p.weight)) * e(p.angle)))
    out.sort(key=lambda t: (-abs(t[0]), t[0]))
    return tuple(out)


def _tail_bound(nterms: int, Qmax: Fraction, y: float) -> float:
    # shells of unit width beyond Qmax hold at most ~ 2*(count/Qmax) + 4 points each,
    # and K0 decays at least geometrically in the shell index
    if Qmax <= 0:
        return math.inf
    per_shell = 2.0 * nterms / float(Qmax) + 4.0
    x = 2 * math.pi * float(Qmax) * y
    return math.sqrt(y) * per_shell * kernels.k0(x) / (1.0 - math.exp(-2 * math.pi * y))


def _initial_qmax(y: float, eps: float) -> Fraction:
    target = max(math.log(1.0 / eps), 1.0) + 8.0
    return Fraction(max(1, math.ceil(target / (2 * math.pi * y))))


def _choose_qmax(case: ThetaCase, a, b, y: float, eps: float, weight: float = 1.0):
    Qmax = _initial_qmax(y, eps / max(weight, 1e-300))
    bound = math.inf
    while True:
        if Qmax > Q_CAP:
            raise PrecisionError(f"truncation beyond |Q| <= {Q_CAP} needed for eps={eps:g} at y={y:g}",
                                 achieved=bound)
        terms = _lattice_terms(case, a, b, Qmax)
        bound = weight * _tail_bound(len(terms), Qmax, y)
        if bound < eps:
            return Qmax, terms, bound
        Qmax *= 2


def _sum_terms(terms, x: float, y: float) -> complex:
    if not terms:
        return 0j
    qs = [float(t[0]) for t in terms]
    cre = [t[1].real for t in terms]
    cim = [t[1].imag for t in terms]
    re, im = kernels.theta_k0_sum(qs, cre, cim, x, y)
    return complex(re, im) * math.sqrt(y)


def _ab(a, b):
    return (Fraction(a[0]), Fraction(a[1])), (Fraction(b[0]), Fraction(b[1]))


def phi_ab(case: ThetaCase, a, b, tau, eps: float | None = None) -> ComponentValue:
    """Phi_{a,b}^{c1,c2}(tau) for the case's form and cone vectors."""
    pt = EvalPoint.of(tau, eps)
    a, b = _ab(a, b)
    Qmax, terms, bound = _choose_qmax(case, a, b, pt.y, pt.eps)
    val = case.split.sign_factor * _sum_terms(terms, pt.x, pt.y)
    val += zero_term(case, a) * math.sqrt(pt.y)
    return ComponentValue(val, Qmax, len(terms), bound)


def zero_term(case: ThetaCase, a) -> float:
    """Coefficient of y^(1/2) contributed by r = 0 when 0 lies in a + Z^2.

    K0(0) diverges, so the r = 0 term is taken as the r -> 0 limit of the
    completion difference alpha_{t1} - alpha_{t2}, which is t2 - t1.  With it,
    the S-transformation holds for components whose lattice contains 0.
    """
    if Fraction(a[0]).denominator == 1 and Fraction(a[1]).denominator == 1:
        sp = case.split
        return sp.t2 - sp.t1
    return 0.0


def _component_factor(case: ThetaCase) -> complex:
    return case.lemma_sign * float(case.scale) * e(case.prefactor)


def phi(case: ThetaCase, tau, eps: float | None = None) -> ComponentValue:
    """The waveform component whose positive part is the case's theta expansion."""
    pt = EvalPoint.of(tau, eps)
    k = len(case.shifts)
    out = _zero()
    for s in case.shifts:
        out = out + phi_ab(case, s.a, case.b, pt, pt.eps / k).scaled(s.sign)
    return out.scaled(_component_factor(case))


# --------------------------------------------------------------------------
# completion terms

_XGK = (0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0)
_WGK = (0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714)
_WG = (0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
       0.381830050505118944950369775488975, 0.417959183673469387755102040816327)


def _gk15(f, lo: float, hi: float) -> tuple[float, float]:
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    fc = f(c)
    k = fc * _WGK[7]
    g = fc * _WG[3]
    for j in range(7):
        dx = h * _XGK[j]
        s = f(c - dx) + f(c + dx)
        k += _WGK[j] * s
        if j % 2 == 1:
            g += _WG[j // 2] * s
    return k * h, abs((k - g) * h)


def integrate(f, lo: float, hi: float, tol: float = 1e-14, max_depth: int = 50) -> tuple[float, float]:
    """Adaptive Gauss-Kronrod (7/15) by interval bisection.  Returns (value, error estimate)."""
    total, err = 0.0, 0.0
    stack = [(lo, hi, tol, 0)]
    while stack:
        a, b, t, depth = stack.pop()
        v, ev = _gk15(f, a, b)
        if ev <= t or depth >= max_depth:
            total += v
            err += ev
        else:
            m = 0.5 * (a + b)
            stack.append((m, b, t / 2, depth + 1))
            stack.append((a, m, t / 2, depth + 1))
    return total, err


def alpha_scaled(xi: float, eta: float, t: float, y: float, case_sign: int,
                 tol: float = 1e-14) -> tuple[float, float]:
    """alpha_t(r y^(1/2)) * exp(-2 pi y Q(r)) for (xi, eta) = P r.

    Folding q^Q(r) into the integrand gives exp(-pi y (eta^2 e^{2u} + xi^2 e^{-2u})),
    which is monotone on the integration range and never overflows.
    """
    if case_sign == 0:
        return 0.0, 0.0
    py = math.pi * y

    def f(u):
        ex = py * (eta * eta * math.exp(2 * u) + xi * xi * math.exp(-2 * u))
        return math.exp(-ex) if ex < 745 else 0.0

    if case_sign > 0:
        end = 0.5 * math.log(CLIP / (py * eta * eta))
        if end <= t:
            return 0.0, f(t) / (2 * py * eta * eta * math.exp(2 * t))
        v, err = integrate(f, t, end, tol)
        return v, err + math.exp(-CLIP)
    start = -0.5 * math.log(CLIP / (py * xi * xi))
    if start >= t:
        return 0.0, f(t) / (2 * py * xi * xi * math.exp(-2 * t))
    v, err = integrate(f, start, t, tol)
    return -v, err + math.exp(-CLIP)


def _cone_t(case: ThetaCase, c: SqrtVec) -> float:
    return case.split.t_of(c.numeric())


def _perp_dir(case: ThetaCase, c: SqrtVec, t: float):
    from .theta import perp_direction
    w = perp_direction(case.form, c)
    cp = case.split.perp_numeric(t)
    if cp[0] * float(w[0]) + cp[1] * float(w[1]) < 0:
        w = vneg(w)
    return w


def phi_completion(case: ThetaCase, a, b, c: SqrtVec, tau, eps: float | None = None) -> ComponentValue:
    """phi^c_{a,b}(tau), using the case's splitting P to parametrize the cone."""
    pt = EvalPoint.of(tau, eps)
    form, sp = case.form, case.split
    if c.Q(form) != -1:
        raise DomainError(f"cone vector has Q = {c.Q(form)}, expected -1")
    a, b = _ab(a, b)
    t = _cone_t(case, c)
    w = _perp_dir(case, c, t)
    x, y = pt.x, pt.y
    # |term| <= exp(-pi y (xi^2 e^{-2t} + eta^2 e^{2t})): enumerate that ellipse
    clip = max(CLIP, math.log(1.0 / pt.eps) + 10.0)
    R = math.sqrt(clip / (math.pi * y))
    Pi = sp.Pinv
    et, emt = math.exp(t), math.exp(-t)
    R0 = R * (abs(Pi[0][0]) * et + abs(Pi[0][1]) * emt)
    R1 = R * (abs(Pi[1][0]) * et + abs(Pi[1][1]) * emt)
    terms = []
    err = 0.0
    for n in range(math.floor(-R0 - a[0]) - 1, math.ceil(R0 - a[0]) + 2):
        for j in range(math.floor(-R1 - a[1]) - 1, math.ceil(R1 - a[1]) + 2):
            r = (a[0] + n, a[1] + j)
            xi, eta = sp.coords(r)
            if math.pi * y * (xi * xi * emt * emt + eta * eta * et * et) > clip:
                continue
            s = c.sign_B(form, r) * _sgn(form.B(r, w))
            if s == 0:
                continue
            val, ev = alpha_scaled(xi, eta, t, y, s)
            if val == 0.0:
                err += ev
                continue
            Q = form.Q(r)
            z = e(float(Q) * x) * e(form.B(r, b))
            terms.append((abs(float(Q)), val * z))
            err += ev
    terms.sort(key=lambda q: -q[0])
    total = math.fsum(z.real for _, z in terms) + 1j * math.fsum(z.imag for _, z in terms)
    bound = math.sqrt(y) * (err + math.exp(-clip) * (4 * R0 * R1 + 4))
    return ComponentValue(math.sqrt(y) * total, Fraction(0), len(terms), bound)


def phi_hat_ab(case: ThetaCase, a, b, tau, eps: float | None = None) -> ComponentValue:
    """Phi-hat_{a,b} = Phi_{a,b} + phi^{c1}_{a,b} - phi^{c2}_{a,b}."""
    pt = EvalPoint.of(tau, eps)
    part = pt.eps / 3
    return (phi_ab(case, a, b, pt, part) + phi_completion(case, a, b, case.c1, pt, part)
            - phi_completion(case, a, b, case.c2, pt, part))


def phi_hat(case: ThetaCase, tau, eps: float | None = None) -> ComponentValue:
    pt = EvalPoint.of(tau, eps)
    k = len(case.shifts)
    out = _zero()
    for s in case.shifts:
        out = out + phi_hat_ab(case, s.a, case.b, pt, pt.eps / k).scaled(s.sign)
    return out.scaled(_component_factor(case))


def completion_sum(case: ThetaCase, tau, eps: float | None = None) -> ComponentValue:
    """sum_l eps_l (phi^{c1}_{a_l,b} - phi^{c2}_{a_l,b}); vanishes for every catalog case."""
    pt = EvalPoint.of(tau, eps)
    out = _zero()
    for s in case.shifts:
        d = (phi_completion(case, s.a, case.b, case.c1, pt)
             - phi_completion(case, s.a, case.b, case.c2, pt))
        out = out + d.scaled(s.sign)
    return out


# --------------------------------------------------------------------------
# checks

@dataclass
class CheckResult:
    name: str
    case: str
    tau: complex
    residual: float
    bound: float
    detail: str = ""
    extra_ok: bool = True   # side conditions beyond residual < bound

    @property
    def passed(self) -> bool:
        return self.residual < self.bound and self.extra_ok

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"CHECK {self.name} {self.case} tau={self.tau.real:g}+{self.tau.imag:g}i "
                f"residual={self.residual:.3e} bound={self.bound:.1e} {status}")

    def to_dict(self) -> dict:
        return {"check": self.name, "case": self.case, "tau": [self.tau.real, self.tau.imag],
                "residual": self.residual, "bound": self.bound, "pass": self.passed,
                "detail": self.detail}


def t_parameters(form: QuadForm, a, b):
    """(phase angle, new b) with Phi-hat_{a,b}(tau+1) = e(angle) Phi-hat_{a,b'}(tau)."""
    h = form.half_inv_diag()
    angle = -form.Q(a) - form.B(h, a)
    b2 = (a[0] + b[0] + h[0], a[1] + b[1] + h[1])
    return angle % 1, b2


def check_T(case: ThetaCase, tau, eps: float = 1e-10, bound: float = 1e-6) -> CheckResult:
    pt = EvalPoint.of(tau, eps)
    worst = 0.0
    for s in case.shifts:
        a, b = s.a, case.b
        lhs = phi_hat_ab(case, a, b, complex(pt.x + 1, pt.y), eps)
        angle, b2 = t_parameters(case.form, a, b)
        rhs = phi_hat_ab(case, a, b2, pt, eps).scaled(e(angle))
        worst = max(worst, abs(lhs.value - rhs.value))
    return CheckResult("T", case.name, pt.tau, worst, bound)


def check_S(case: ThetaCase, tau, eps: float = 1e-10, bound: float = 1e-5) -> CheckResult:
    pt = EvalPoint.of(tau, eps)
    form = case.form
    cosets = form.dual_cosets()
    if len(cosets) != abs(form.det):
        raise AssertionError("coset count differs from |det A|")
    tau_s = -1 / pt.tau
    norm = math.sqrt(-form.det)
    worst = 0.0
    for s in case.shifts:
        a, b = s.a, case.b
        lhs = phi_hat_ab(case, a, b, tau_s, eps)
        rhs = _zero()
        for p in cosets:
            rhs = rhs + phi_hat_ab(case, (p[0] - b[0], p[1] - b[1]), a, pt, eps)
        rhs = rhs.scaled(e(form.B(a, b)) / norm)
        worst = max(worst, abs(lhs.value - rhs.value))
    return CheckResult("S", case.name, pt.tau, worst, bound, f"{len(cosets)} cosets")


def check_completion(case: ThetaCase, tau, eps: float = 1e-12, bound: float = 1e-8) -> CheckResult:
    pt = EvalPoint.of(tau, eps)
    v = completion_sum(case, pt)
    return CheckResult("completion", case.name, pt.tau, abs(v.value), bound)


class InvalidSymmetryError(DomainError):
    pass


def _gamma_ok(case: ThetaCase, g) -> None:
    A = case.form.A
    det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    if det != 1:
        raise InvalidSymmetryError(f"det gamma = {det}, expected 1")
    gt_a_g = [[sum(g[k][i] * A[k][l] * g[l][j] for k in range(2) for l in range(2))
               for j in range(2)] for i in range(2)]
    if [list(r) for r in A] != gt_a_g:
        raise InvalidSymmetryError("gamma does not preserve the quadratic form")
    gc = case.c1.transform(g)
    if case.form.B(gc.v, case.c1.v) >= 0:
        raise InvalidSymmetryError("gamma does not preserve the cone component")


def zlem_partner(case: ThetaCase, index: int):
    """(s, sigma, lambda) with gamma a_index = s a_sigma + lambda and gamma b = s b + mu."""
    sym = case.symmetry
    g = sym.gamma
    ga = matvec(g, case.shifts[index].a)
    gb = matvec(g, case.b)
    lam = sym.lambdas[index] if index < len(sym.lambdas) else None
    for s in (1, -1):
        if (gb[0] - s * case.b[0], gb[1] - s * case.b[1]) != sym.mu:
            continue
        for k, sh in enumerate(case.shifts):
            cand = (ga[0] - s * sh.a[0], ga[1] - s * sh.a[1])
            if lam is not None and cand == lam:
                return s, k, cand
    raise InvalidSymmetryError(f"{case.name}: no shift matches gamma a_{index + 1} - lambda "
                               f"with gamma b = +-b + mu")


def check_zlem(case: ThetaCase, tau, eps: float = 1e-12, bound: float = 1e-8):
    """The three completion-term symmetries instantiated by the case's (gamma, lambda, mu).

    Returns one CheckResult per shift; each carries the largest of the three residuals
    and lists them in ``detail``.
    """
    pt = EvalPoint.of(tau, eps)
    sym = case.symmetry
    if sym is None:
        raise InvalidSymmetryError(f"{case.name} has no symmetry data")
    g = sym.gamma
    _gamma_ok(case, g)
    gc1 = case.c1.transform(g)
    if not case.form.in_dual(sym.mu):
        raise InvalidSymmetryError(f"{case.name}: mu not in A^-1 Z^2")
    out = []
    for i, sh in enumerate(case.shifts):
        s, k, lam = zlem_partner(case, i)
        a, b = sh.a, case.b
        ga, gb = matvec(g, a), matvec(g, b)
        r1 = (phi_completion(case, a, b, case.c1, pt).value
              - phi_completion(case, ga, gb, gc1, pt).value)
        sa = (s * case.shifts[k].a[0], s * case.shifts[k].a[1])
        sb = (s * b[0], s * b[1])
        shifted = (sa[0] + lam[0], sa[1] + lam[1])
        r2 = (phi_completion(case, shifted, (sb[0] + sym.mu[0], sb[1] + sym.mu[1]), case.c2, pt).value
              - e(case.form.B(sa, sym.mu)) * phi_completion(case, sa, sb, case.c2, pt).value)
        r3 = (phi_completion(case, sa, sb, case.c2, pt).value
              - phi_completion(case, case.shifts[k].a, b, case.c2, pt).value)
        res = [abs(r1), abs(r2), abs(r3)]
        out.append(CheckResult("zlem", f"{case.name}[a{i + 1}]", pt.tau, max(res), bound,
                               "residuals " + " ".join(f"{v:.2e}" for v in res)))
    return out


def laplacian_residual(f, x: float, y: float, h: float) -> float:
    """|-y^2 (f_xx + f_yy) - f/4| / |f| with central second differences."""
    c = f(x, y)
    fxx = (f(x + h, y) - 2 * c + f(x - h, y)) / (h * h)
    fyy = (f(x, y + h) - 2 * c + f(x, y - h)) / (h * h)
    return abs(-y * y * (fxx + fyy) - 0.25 * c) / max(abs(c), 1e-300)


def component_function(case: ThetaCase, y_min: float, eps: float = 1e-13):
    """The component as a function of (x, y), with one term set valid for all y >= y_min."""
    groups = []
    for s in case.shifts:
        Qmax, terms, _ = _choose_qmax(case, s.a, case.b, y_min, eps)
        groups.append((s.sign, terms))
    factor = _component_factor(case)
    sgn = case.split.sign_factor
    const = sum(s.sign * zero_term(case, s.a) for s in case.shifts)

    def f(x, y):
        total = sum(sign * _sum_terms(terms, x, y) for sign, terms in groups)
        return factor * (sgn * total + const * math.sqrt(y))
    return f


def check_laplacian(case: ThetaCase, tau, h: float = 1e-3, bound: float = 1e-4) -> CheckResult:
    pt = EvalPoint.of(tau)
    if not pt.y - 2 * h > 0:
        raise DomainError("need y - 2h > 0")
    f = component_function(case, pt.y - 2 * h)
    res = laplacian_residual(f, pt.x, pt.y, h)
    res2 = laplacian_residual(f, pt.x, pt.y, h / 2)
    ratio = res / res2 if res2 > 0 else math.inf
    return CheckResult("laplacian", case.name, pt.tau, res, bound,
                       f"h={h:g} residual(h/2)={res2:.3e} ratio={ratio:.3f}",
                       extra_ok=LAPLACIAN_RATIO[0] <= ratio <= LAPLACIAN_RATIO[1])


# --------------------------------------------------------------------------
# Cohen's waveform

@lru_cache(maxsize=8)
def _cohen_coefficients(cutoff: int):
    N = cutoff // 24 + 2
    _, T = coefficient_tables(N)
    return tuple(sorted(((n, c) for n, c in T.entries.items() if abs(n) <= cutoff and c),
                        key=lambda t: (-abs(t[0]), t[0])))


def cohen_u_eval(tau, cutoff: int = 1200) -> ComponentValue:
    """u(tau) = y^(1/2) sum_{n in 24Z+1, |n| <= cutoff} T(n) K0(2 pi |n| y/24) e(n x/24)."""
    if cutoff < 25:
        raise ValueError("cutoff must be at least 25")
    pt = EvalPoint.of(tau)
    coeffs = _cohen_coefficients(cutoff)
    qs = [n / 24 for n, _ in coeffs]
    cre = [float(c) for _, c in coeffs]
    cim = [0.0] * len(coeffs)
    re, im = kernels.theta_k0_sum(qs, cre, cim, pt.x, pt.y)
    # |T(n)| <= number of representations; bounded crudely by 2 sqrt|n| + 2
    m = cutoff + 1
    x0 = 2 * math.pi * m * pt.y / 24
    step = math.exp(-2 * math.pi * pt.y)
    tail = math.sqrt(pt.y) * 2 * (2 * math.sqrt(m) + 2) * kernels.k0(x0) / (1 - step) if x0 < 745 else 0.0
    return ComponentValue(complex(re, im) * math.sqrt(pt.y), Fraction(cutoff, 24),
                          len(coeffs), tail)


def cohen_u(tau, cutoff: int = 1200) -> complex:
    return cohen_u_eval(tau, cutoff).value


def check_cohen(cutoff: int = 1200) -> list[CheckResult]:
    out = []
    t1 = complex(0.1, 0.9)
    r = abs(cohen_u(t1 + 1, cutoff) - e(Fraction(1, 24)) * cohen_u(t1, cutoff))
    out.append(CheckResult("cohen-T", "u", t1, r, 1e-10))
    t2 = complex(0, 1 / math.sqrt(2))
    out.append(CheckResult("cohen-fixed", "u", t2, abs(cohen_u(t2, cutoff).imag), 1e-8))
    t3 = complex(0.3, 0.7)
    r = abs(cohen_u(-1 / (2 * t3), cutoff) - cohen_u(t3, cutoff).conjugate())
    out.append(CheckResult("cohen-S", "u", t3, r, 1e-6))
    return out


# --------------------------------------------------------------------------
# components of the vector-valued form

def _canonical(form: QuadForm, a, b):
    a = tuple(x - math.floor(x) for x in a)
    Ab = matvec(form.A, b)
    Ab = tuple(x - math.floor(x) for x in Ab)
    return a, Ab


def _pair_key(form: QuadForm, a, b):
    k1 = _canonical(form, a, b)
    k2 = _canonical(form, vneg(a), vneg(b))
    return min(k1, k2)


def orbit(form: QuadForm, pairs) -> list:
    """Closure of (a, b) pairs under the T and S parameter maps, modulo lattice shifts and +-."""
    Ainv = form.inverse()
    cosets = form.dual_cosets()
    limit = 4 * form.det ** 2
    seen = {}
    todo = [tuple(map(tuple, p)) for p in pairs]
    while todo:
        a, b = todo.pop()
        a = (Fraction(a[0]), Fraction(a[1]))
        b = (Fraction(b[0]), Fraction(b[1]))
        key = _pair_key(form, a, b)
        if key in seen:
            continue
        ka, kAb = key
        seen[key] = (ka, matvec(Ainv, kAb))
        if len(seen) > limit:
            raise AssertionError(f"orbit exceeds 4|det A|^2 = {limit} components")
        _, b2 = t_parameters(form, a, b)
        todo.append((a, b2))
        for p in cosets:
            todo.append(((p[0] - b[0], p[1] - b[1]), a))
    return sorted(seen.values())

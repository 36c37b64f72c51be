"""Pure-Python hot kernels.  Reference implementation for ``_kernels.pyx``.

Both modules expose the same four functions and must agree exactly on the
integer kernels and to rounding on the floating kernels.
"""
import math

EULER_GAMMA = 0.57721566490153286061
_EPS = 1e-17


def binom_product(n, factors):
    """Dense coefficients of prod (1 - s q^e)^p modulo q^n.

    ``factors`` is a sequence of (e, s, p) with e >= 1, s = +-1 and
    p = +1 (multiply) or -1 (divide).  Factors with e >= n are identities
    modulo q^n and are skipped.
    """
    c = [0] * n
    if n <= 0:
        return c
    c[0] = 1
    top = 1  # c[top:] is still zero; lets early multiplications stay short
    for e, s, p in factors:
        if e >= n:
            continue
        if p > 0:
            # descending blocks of width <= e; each reads the untouched block below
            hi = min(n, top + e)
            while hi > e:
                lo = max(e, hi - e)
                src = c[lo - e:hi - e]
                cur = c[lo:hi]
                if s > 0:
                    c[lo:hi] = [a - b for a, b in zip(cur, src)]
                else:
                    c[lo:hi] = [a + b for a, b in zip(cur, src)]
                hi = lo
            top = min(n, top + e)
        else:
            for lo in range(e, n, e):
                hi = min(lo + e, n)
                src = c[lo - e:hi - e]
                cur = c[lo:hi]
                if s > 0:
                    c[lo:hi] = [a + b for a, b in zip(cur, src)]
                else:
                    c[lo:hi] = [a - b for a, b in zip(cur, src)]
            top = n
    return c


def dense_mul(a, b, n):
    """Truncated product of two dense integer coefficient lists."""
    out = [0] * n
    for i, ai in enumerate(a[:n]):
        if ai:
            lim = n - i
            for j, bj in enumerate(b[:lim]):
                if bj:
                    out[i + j] += ai * bj
    return out


def _k0_series(x):
    # K0 = -(log(x/2) + gamma) I0 + sum (x^2/4)^k / (k!)^2 H_k
    z = 0.25 * x * x
    term = 1.0
    i0 = 1.0
    rest = 0.0
    h = 0.0
    k = 0
    while True:
        k += 1
        term *= z / (k * k)
        h += 1.0 / k
        i0 += term
        rest += term * h
        if term < _EPS * i0:
            break
    return -(math.log(0.5 * x) + EULER_GAMMA) * i0 + rest


def _k0e_cf2(x):
    # Steed/Temme continued fraction for e^x K0(x), x >= 2
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1 = 0.0
    q2 = 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    i = 1
    while i < 10000:
        i += 1
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < 1e-17:
            break
    return math.sqrt(math.pi / (2.0 * x)) / s


def _k0e_asymptotic(x):
    # sqrt(pi/2x) (1 - 1/(8x) + 9/(2!(8x)^2) - ...), stopped at the smallest term
    total = 1.0
    term = 1.0
    k = 0
    while k < 200:
        k += 1
        nxt = -term * (2 * k - 1) ** 2 / (k * 8.0 * x)
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        if abs(term) < _EPS:
            break
    return math.sqrt(math.pi / (2.0 * x)) * total


def k0e(x):
    """Exponentially scaled K0: e^x K0(x)."""
    if not x > 0:
        raise ValueError("K0 needs x > 0")
    if x <= 2.0:
        return _k0_series(x) * math.exp(x)
    if x < 30.0:
        return _k0e_cf2(x)
    return _k0e_asymptotic(x)


def k0(x):
    """Modified Bessel function K0(x) for x > 0; underflows to 0.0 past x ~ 745."""
    if not x > 0:
        raise ValueError("K0 needs x > 0")
    if x <= 2.0:
        return _k0_series(x)
    if x > 745.0:
        return 0.0
    return k0e(x) * math.exp(-x)


def theta_k0_sum(qs, cre, cim, x, y):
    """Compensated sum of c_k e(Q_k x) K0(2 pi |Q_k| y) in the given order.

    Returns (real, imag).  Terms with Q_k = 0 must not be passed in.
    """
    sr = cr = 0.0
    si = ci = 0.0
    twopi = 2.0 * math.pi
    for Q, a, b in zip(qs, cre, cim):
        kv = k0(twopi * abs(Q) * y)
        ang = twopi * Q * x
        cs = math.cos(ang)
        sn = math.sin(ang)
        tr = (a * cs - b * sn) * kv
        ti = (a * sn + b * cs) * kv
        # Neumaier summation
        t = sr + tr
        if abs(sr) >= abs(tr):
            cr += (sr - t) + tr
        else:
            cr += (tr - t) + sr
        sr = t
        t = si + ti
        if abs(si) >= abs(ti):
            ci += (si - t) + ti
        else:
            ci += (ti - t) + si
        si = t
    return sr + cr, si + ci

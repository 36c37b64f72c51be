# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.  Same surface as ``_kernels_py``.

The integer kernels run on int64 with checked arithmetic and raise
OverflowError instead of wrapping; callers retry on the Python path.
"""
from libc.math cimport sqrt, exp, log, cos, sin, fabs, M_PI
from libc.stdlib cimport malloc, free

cdef extern from *:
    bint add_overflow "__builtin_add_overflow"(long long a, long long b, long long *r) nogil
    bint sub_overflow "__builtin_sub_overflow"(long long a, long long b, long long *r) nogil
    bint mul_overflow "__builtin_mul_overflow"(long long a, long long b, long long *r) nogil

cdef double EULER_GAMMA = 0.57721566490153286061
cdef double _EPS = 1e-17


def binom_product(Py_ssize_t n, factors):
    cdef long long *c
    cdef Py_ssize_t i, e, top, hi
    cdef int s, p
    cdef bint bad = False
    out = [0] * n if n > 0 else []
    if n <= 0:
        return out
    c = <long long *> malloc(n * sizeof(long long))
    if c == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            c[i] = 0
        c[0] = 1
        top = 1
        for fac in factors:
            e = fac[0]
            s = fac[1]
            p = fac[2]
            if e >= n:
                continue
            if p > 0:
                hi = top + e
                if hi > n:
                    hi = n
                i = hi - 1
                while i >= e:
                    if s > 0:
                        bad = sub_overflow(c[i], c[i - e], &c[i])
                    else:
                        bad = add_overflow(c[i], c[i - e], &c[i])
                    if bad:
                        raise OverflowError("int64 overflow in binom_product")
                    i -= 1
                top = hi
            else:
                for i in range(e, n):
                    if s > 0:
                        bad = add_overflow(c[i], c[i - e], &c[i])
                    else:
                        bad = sub_overflow(c[i], c[i - e], &c[i])
                    if bad:
                        raise OverflowError("int64 overflow in binom_product")
                top = n
        for i in range(n):
            out[i] = c[i]
    finally:
        free(c)
    return out


def dense_mul(a, b, Py_ssize_t n):
    cdef Py_ssize_t i, j, la, lb
    cdef long long *x
    cdef long long *y
    cdef long long *z
    cdef long long t
    la = min(len(a), n)
    lb = min(len(b), n)
    x = <long long *> malloc((la + 1) * sizeof(long long))
    y = <long long *> malloc((lb + 1) * sizeof(long long))
    z = <long long *> malloc((n + 1) * sizeof(long long))
    if x == NULL or y == NULL or z == NULL:
        free(x); free(y); free(z)
        raise MemoryError()
    try:
        for i in range(la):
            x[i] = a[i]
        for i in range(lb):
            y[i] = b[i]
        for i in range(n):
            z[i] = 0
        for i in range(la):
            if x[i] == 0:
                continue
            for j in range(min(lb, n - i)):
                if y[j] == 0:
                    continue
                if mul_overflow(x[i], y[j], &t) or add_overflow(z[i + j], t, &z[i + j]):
                    raise OverflowError("int64 overflow in dense_mul")
        out = [z[i] for i in range(n)]
    finally:
        free(x); free(y); free(z)
    return out


cdef double _k0_series(double x) nogil:
    cdef double z = 0.25 * x * x
    cdef double term = 1.0, i0 = 1.0, rest = 0.0, h = 0.0
    cdef int k = 0
    while True:
        k += 1
        term *= z / (<double> k * k)
        h += 1.0 / k
        i0 += term
        rest += term * h
        if term < _EPS * i0:
            break
    return -(log(0.5 * x) + EULER_GAMMA) * i0 + rest


cdef double _k0e_cf2(double x) nogil:
    cdef double b = 2.0 * (1.0 + x)
    cdef double d = 1.0 / b
    cdef double h = d, delh = d
    cdef double q1 = 0.0, q2 = 1.0
    cdef double a1 = 0.25
    cdef double q = a1, c = a1
    cdef double a = -a1
    cdef double s = 1.0 + q * delh
    cdef double qnew, dels
    cdef int i = 1
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
        if fabs(dels / s) < 1e-17:
            break
    return sqrt(M_PI / (2.0 * x)) / s


cdef double _k0e_asymptotic(double x) nogil:
    cdef double total = 1.0, term = 1.0, nxt
    cdef int k = 0
    while k < 200:
        k += 1
        nxt = -term * (2 * k - 1) * (2 * k - 1) / (k * 8.0 * x)
        if fabs(nxt) >= fabs(term):
            break
        term = nxt
        total += term
        if fabs(term) < _EPS:
            break
    return sqrt(M_PI / (2.0 * x)) * total


cdef double _k0e(double x) nogil:
    if x <= 2.0:
        return _k0_series(x) * exp(x)
    if x < 30.0:
        return _k0e_cf2(x)
    return _k0e_asymptotic(x)


cdef double _k0(double x) nogil:
    if x <= 2.0:
        return _k0_series(x)
    if x > 745.0:
        return 0.0
    return _k0e(x) * exp(-x)


def k0e(double x):
    if not x > 0:
        raise ValueError("K0 needs x > 0")
    return _k0e(x)


def k0(double x):
    if not x > 0:
        raise ValueError("K0 needs x > 0")
    return _k0(x)


def theta_k0_sum(qs, cre, cim, double x, double y):
    cdef double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0
    cdef double twopi = 2.0 * M_PI
    cdef double Q, a, b, kv, ang, cs, sn, tr, ti, t
    cdef Py_ssize_t k, m = len(qs)
    for k in range(m):
        Q = qs[k]
        a = cre[k]
        b = cim[k]
        kv = _k0(twopi * fabs(Q) * y)
        ang = twopi * Q * x
        cs = cos(ang)
        sn = sin(ang)
        tr = (a * cs - b * sn) * kv
        ti = (a * sn + b * cs) * kv
        t = sr + tr
        if fabs(sr) >= fabs(tr):
            cr += (sr - t) + tr
        else:
            cr += (tr - t) + sr
        sr = t
        t = si + ti
        if fabs(si) >= fabs(ti):
            ci += (si - t) + ti
        else:
            ci += (ti - t) + si
        si = t
    return sr + cr, si + ci

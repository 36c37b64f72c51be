"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``QMAASS_PURE_PYTHON=1`` to force the fallback.  ``BACKEND`` names the
active implementation.
"""
import os

from . import _kernels_py

if os.environ.get("QMAASS_PURE_PYTHON", "") not in ("", "0"):
    _fast = None
else:
    try:
        from . import _kernels as _fast
    except ImportError:
        _fast = None

BACKEND = "cython" if _fast is not None else "python"


def binom_product(n, factors):
    """prod (1 - s q^e)^p mod q^n as a list of ints; see ``_kernels_py``."""
    factors = list(factors)
    if _fast is not None:
        try:
            return _fast.binom_product(n, factors)
        except OverflowError:
            pass
    return _kernels_py.binom_product(n, factors)


def dense_mul(a, b, n):
    if _fast is not None:
        try:
            return _fast.dense_mul(a, b, n)
        except (OverflowError, TypeError):
            pass
    return _kernels_py.dense_mul(a, b, n)


if _fast is not None:
    k0 = _fast.k0
    k0e = _fast.k0e
    theta_k0_sum = _fast.theta_k0_sum
else:
    k0 = _kernels_py.k0
    k0e = _kernels_py.k0e
    theta_k0_sum = _kernels_py.theta_k0_sum

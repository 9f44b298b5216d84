"""Scalar minimization and root bracketing used by the bound solvers."""

from __future__ import annotations

import math

__all__ = ["golden_section_min", "bisect_root"]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2


def golden_section_min(fun, lo: float, hi: float, tol: float = 1e-10,
                       max_iter: int = 200) -> tuple[float, float]:
    """Minimize a unimodal ``fun`` on [lo, hi] to argument tolerance ``tol``.

    Returns (argmin, fun(argmin)).  Standard golden-section with cached
    interior evaluations; ~1.44 log2((hi-lo)/tol) function calls.
    """
    if hi < lo:
        lo, hi = hi, lo
    a, b = lo, hi
    h = b - a
    if h <= tol:
        mid = 0.5 * (a + b)
        return mid, fun(mid)
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc = fun(c)
    fd = fun(d)
    for _ in range(max_iter):
        if h <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INVPHI2 * h
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = fun(d)
    x = c if fc < fd else d
    return x, min(fc, fd)


def bisect_root(fun, lo: float, hi: float, f_lo: float | None = None,
                f_hi: float | None = None, xtol: float = 1e-3,
                max_iter: int = 200) -> float:
    """Find a sign change of ``fun`` inside [lo, hi] by bisection.

    ``xtol`` is an absolute tolerance on the argument.  The bracket must be
    valid: fun(lo) and fun(hi) of opposite sign (zero counts as a sign).
    """
    if f_lo is None:
        f_lo = fun(lo)
    if f_hi is None:
        f_hi = fun(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise ValueError("bisect_root: endpoints do not bracket a sign change")
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = fun(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return 0.5 * (lo + hi)

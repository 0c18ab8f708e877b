"""Bisection helpers for monotone scalar problems."""

import math


def bisect_level(f, target, lo, hi, ftol, xtol=0.0, max_iter=500):
    """Find ``x`` in ``[lo, hi]`` with ``|f(x) - target| <= ftol`` for monotone ``f``.

    ``f(lo) - target`` and ``f(hi) - target`` must differ in sign. Returns the
    last midpoint if ``xtol`` or ``max_iter`` is exhausted first.
    """
    f_lo = f(lo) - target
    if abs(f_lo) <= ftol:
        return lo
    f_hi = f(hi) - target
    if abs(f_hi) <= ftol:
        return hi
    if f_lo * f_hi > 0:
        raise ValueError("target not bracketed")
    mid = lo
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid) - target
        if abs(f_mid) <= ftol or (hi - lo) <= xtol:
            return mid
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return mid


def bisect_feasible(feasible, lo, hi, xtol, max_iter=60):
    """Largest ``x`` in ``[lo, hi]`` with ``feasible(x)``, assuming a monotone
    feasible set ``[lo, x*]``. ``feasible(lo)`` is taken as true without
    evaluation; the returned value is always a feasible point."""
    if feasible(hi):
        return hi
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo

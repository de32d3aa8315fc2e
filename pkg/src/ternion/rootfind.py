"""Bracketed root finding: geometric bracket scans plus a Brent-style solve.

The solver is the classic inverse-quadratic/secant/bisection hybrid; callers
state a residual tolerance and get RootFindingFailure when either no bracket
exists on the scanned grid or the bracketed solve cannot push |f| below it.
"""

from __future__ import annotations

import math

from .errors import RootFindingFailure

__all__ = ["brent", "scan_bracket", "geometric_grid", "solve_bracketed"]

_EPS = 2.220446049250313e-16


def brent(f, a, b, fa=None, fb=None, xtol=1e-15, maxiter=200):
    """Root of f in the sign-change interval [a, b]."""
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise RootFindingFailure(f"no sign change on [{a}, {b}]: f = ({fa:.3e}, {fb:.3e})")
    c, fc = a, fa
    d = e = b - a
    for _ in range(maxiter):
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol = 2.0 * _EPS * abs(b) + 0.5 * xtol
        m = 0.5 * (c - b)
        if abs(m) <= tol or fb == 0.0:
            return b
        if abs(e) < tol or abs(fa) <= abs(fb):
            d = e = m
        else:
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            else:
                p = -p
            s, e = e, d
            if 2.0 * p < 3.0 * m * q - abs(tol * q) and p < abs(0.5 * s * q):
                d = p / q
            else:
                d = e = m
        a, fa = b, fb
        b += d if abs(d) > tol else math.copysign(tol, m)
        fb = f(b)
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            d = e = b - a
    return b


def geometric_grid(center, decades=4, per_decade=16, direction=+1, limit=None):
    """Points center * 10^(direction * k/per_decade), k = 0..decades*per_decade.

    For direction=-1 the grid walks inward toward zero.  A positive center is
    required; an optional hard limit clips the walk.
    """
    if center <= 0.0:
        raise ValueError("geometric grid needs a positive center")
    pts = []
    for k in range(decades * per_decade + 1):
        x = center * 10.0 ** (direction * k / per_decade)
        if limit is not None and ((direction > 0 and x > limit) or (direction < 0 and x < limit)):
            break
        pts.append(x)
    return pts


def scan_bracket(f, points):
    """First sign-change interval of f on consecutive grid points, or None."""
    it = iter(points)
    try:
        x_prev = next(it)
    except StopIteration:
        return None
    f_prev = f(x_prev)
    if f_prev == 0.0:
        return (x_prev, x_prev, 0.0, 0.0)
    for x in it:
        fx = f(x)
        if fx == 0.0 or (fx > 0.0) != (f_prev > 0.0):
            return (x_prev, x, f_prev, fx)
        x_prev, f_prev = x, fx
    return None


def solve_bracketed(f, bracket, residual_tol=1e-12):
    """Brent on a scanned bracket, then enforce |f(root)| <= residual_tol."""
    a, b, fa, fb = bracket
    root = a if a == b else brent(f, a, b, fa, fb)
    res = abs(f(root))
    if res > residual_tol:
        raise RootFindingFailure(f"residual {res:.3e} above {residual_tol:.1e} at root {root}")
    return root

"""Adaptive Gauss-Kronrod quadrature for vector-valued integrands.

A (G7, K15) embedded pair drives interval/cell subdivision: the value is the
Kronrod estimate, the error estimate is |K15 - G7| (per component, reduced by
max).  All routines share an evaluation budget and raise QuadratureFailure
when the requested absolute tolerance cannot be met within it.
"""

from __future__ import annotations

import heapq
import itertools

import numpy as np

from .errors import QuadratureFailure

__all__ = ["adaptive_quad", "adaptive_quad_2d", "adaptive_quad_3d", "DEFAULT_TOL", "DEFAULT_BUDGET"]

DEFAULT_TOL = 1e-10
DEFAULT_BUDGET = 10**6

# Kronrod-15 abscissae (positive half) and weights; the Gauss-7 subset sits at
# every second node.
_XGK = (
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
)
_WGK = (
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
)
_WG = (
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
)

NODES = np.array([-x for x in _XGK[:7]] + [0.0] + [x for x in reversed(_XGK[:7])])
WEIGHTS_K = np.array(list(_WGK[:7]) + [_WGK[7]] + list(reversed(_WGK[:7])))
# Gauss weights aligned on the 15-node grid (zero where the node is Kronrod-only).
WEIGHTS_G = np.zeros(15)
for _i, _w in zip((1, 3, 5), _WG[:3]):
    WEIGHTS_G[_i] = _w
    WEIGHTS_G[14 - _i] = _w
WEIGHTS_G[7] = _WG[3]


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n):
        self.left = n

    def spend(self, n):
        self.left -= n
        if self.left < 0:
            raise QuadratureFailure("quadrature evaluation budget exhausted")


def _eval_panel(f, a, b, budget):
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    budget.spend(15)
    vals = [np.asarray(f(c + h * x), dtype=float) for x in NODES]
    k = h * sum(w * v for w, v in zip(WEIGHTS_K, vals))
    g = h * sum(w * v for w, v in zip(WEIGHTS_G, vals) if w != 0.0)
    if not np.all(np.isfinite(k)):
        raise QuadratureFailure(f"non-finite integrand on [{a}, {b}]")
    return k, float(np.max(np.abs(k - g)))


def adaptive_quad(f, a, b, tol=DEFAULT_TOL, budget=None):
    """Integrate vector-valued f over [a, b] to absolute tolerance tol.

    Reversed limits flip the sign, as usual.
    """
    if b < a:
        return -adaptive_quad(f, b, a, tol, budget)
    budget = budget if isinstance(budget, _Budget) else _Budget(budget or DEFAULT_BUDGET)
    counter = itertools.count()
    val, err = _eval_panel(f, a, b, budget)
    heap = [(-err, next(counter), a, b, val, err)]
    total_err = err
    while total_err > tol:
        neg_err, _, pa, pb, pval, perr = heapq.heappop(heap)
        if perr <= 0.0 or pb - pa <= abs(pa) * 1e-15 + 1e-300:
            # cannot refine further; put it back and give up
            heapq.heappush(heap, (neg_err, next(counter), pa, pb, pval, perr))
            raise QuadratureFailure(
                f"interval [{pa}, {pb}] stalled with error {perr:.3e} (tol {tol:.1e})"
            )
        pm = 0.5 * (pa + pb)
        lv, le = _eval_panel(f, pa, pm, budget)
        rv, re = _eval_panel(f, pm, pb, budget)
        total_err += le + re - perr
        heapq.heappush(heap, (-le, next(counter), pa, pm, lv, le))
        heapq.heappush(heap, (-re, next(counter), pm, pb, rv, re))
    return sum(item[4] for item in heap)


def _eval_cell(f, u0, u1, v0, v1, budget):
    cu, hu = 0.5 * (u0 + u1), 0.5 * (u1 - u0)
    cv, hv = 0.5 * (v0 + v1), 0.5 * (v1 - v0)
    budget.spend(225)
    grid = [[np.asarray(f(cu + hu * xu, cv + hv * xv), dtype=float) for xv in NODES] for xu in NODES]
    scale = hu * hv
    kk = scale * sum(
        WEIGHTS_K[i] * WEIGHTS_K[j] * grid[i][j] for i in range(15) for j in range(15)
    )
    gk = scale * sum(
        WEIGHTS_G[i] * WEIGHTS_K[j] * grid[i][j]
        for i in range(15)
        for j in range(15)
        if WEIGHTS_G[i] != 0.0
    )
    kg = scale * sum(
        WEIGHTS_K[i] * WEIGHTS_G[j] * grid[i][j]
        for i in range(15)
        for j in range(15)
        if WEIGHTS_G[j] != 0.0
    )
    if not np.all(np.isfinite(kk)):
        raise QuadratureFailure("non-finite integrand on a surface cell")
    err_u = float(np.max(np.abs(kk - gk)))
    err_v = float(np.max(np.abs(kk - kg)))
    return kk, max(err_u, err_v), err_u >= err_v


def adaptive_quad_2d(f, u_range, v_range, tol=DEFAULT_TOL, budget=None):
    """Integrate vector-valued f(u, v) over a rectangle to absolute tol."""
    budget = budget if isinstance(budget, _Budget) else _Budget(budget or DEFAULT_BUDGET)
    counter = itertools.count()
    u0, u1 = u_range
    v0, v1 = v_range
    val, err, split_u = _eval_cell(f, u0, u1, v0, v1, budget)
    heap = [(-err, next(counter), (u0, u1, v0, v1), val, err, split_u)]
    total_err = err
    while total_err > tol:
        neg_err, _, cell, cval, cerr, csplit_u = heapq.heappop(heap)
        a0, a1, b0, b1 = cell
        if cerr <= 0.0 or (a1 - a0 < 1e-13 and b1 - b0 < 1e-13):
            heapq.heappush(heap, (neg_err, next(counter), cell, cval, cerr, csplit_u))
            raise QuadratureFailure(f"surface cell {cell} stalled with error {cerr:.3e}")
        if csplit_u:
            mid = 0.5 * (a0 + a1)
            halves = ((a0, mid, b0, b1), (mid, a1, b0, b1))
        else:
            mid = 0.5 * (b0 + b1)
            halves = ((a0, a1, b0, mid), (a0, a1, mid, b1))
        total_err -= cerr
        for h in halves:
            hv, he, hs = _eval_cell(f, *h, budget)
            total_err += he
            heapq.heappush(heap, (-he, next(counter), h, hv, he, hs))
    return sum(item[3] for item in heap)


def adaptive_quad_3d(f, ranges, tol=DEFAULT_TOL, budget=None):
    """Integrate vector-valued f(x0, x1, x2) over a box (iterated 1D/2D)."""
    budget = budget if isinstance(budget, _Budget) else _Budget(budget or DEFAULT_BUDGET)
    (a0, b0), r1, r2 = ranges
    span = max(b0 - a0, 1.0)
    inner_tol = tol / (4.0 * span)

    def outer(x0):
        return adaptive_quad_2d(lambda x1, x2: f(x0, x1, x2), r1, r2, inner_tol, budget)

    return adaptive_quad(outer, a0, b0, tol, budget)

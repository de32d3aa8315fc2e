"""Derivatives, holomorphy tests, and quadrature of ternary differential forms.

A ternary field F(x) = f0 + f1 q + f2 q^2 over R^3 supports two notions of
holomorphy:

* type 1 (double analyticity): both conjugate Wirtinger derivatives vanish,
  equivalently the nine Cauchy-Riemann-type equalities among the component
  partials hold, equivalently the 1-form F dz is closed;
* type 2 (single analyticity): the plain Wirtinger derivative vanishes
  (three summed constraints), optionally strengthened by the reality
  constraints that force F to depend on the conjugate pair only through
  their product.

All derivative checks are numerical (central differences, two step sizes);
all integrals are adaptive Gauss-Kronrod with an evaluation budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import algebra as ta
from .algebra import ComplexTernary, Ternary, J, J2, Q, Q2, mul
from .errors import (
    DomainError,
    NotHolomorphic,
    NumericalBreakdown,
    SingularNumber,
    SingularOnPath,
)
from .quadrature import DEFAULT_BUDGET, DEFAULT_TOL, adaptive_quad, adaptive_quad_2d, adaptive_quad_3d

__all__ = [
    "TernaryField",
    "Curve",
    "SurfacePatch",
    "CubicSurfaceGeometry",
    "HoloType1Report",
    "HoloType2Report",
    "EPS_FD",
    "EPS_FD3",
    "EPS_GEO",
    "wirtinger_partials",
    "check_holo_type1",
    "check_holo_type2",
    "ternary_laplacian",
    "line_integral",
    "surface_integral_2form",
    "volume_integral_3form",
    "cubic_surface_geometry",
    "conformal_jacobian",
    "trisectrice_loop",
    "cubic_band_patch",
    "polar_band_patch",
    "sphere_patch",
    "box_boundary_patches",
]

# Central-difference steps: h ~ eps^(1/3) for first derivatives, eps^(1/5)
# for third, both scaled by the point magnitude.
_FD1 = 2.220446049250313e-16 ** (1.0 / 3.0)
_FD3 = 2.220446049250313e-16 ** (1.0 / 5.0)

EPS_FD = 1e-6     # absolute tolerance for first-derivative identities on O(1) inputs
EPS_FD3 = 1e-3    # same for third-derivative identities
EPS_GEO = 1e-9    # closed-curve / on-surface geometric tolerance


class TernaryField:
    """A map R^3 -> ternary numbers, with an optional analytic derivative.

    func takes and returns Ternary; derivative (optional) returns dF/dz for
    fields that have one (used by conformal_jacobian oracles).
    """

    def __init__(self, func, derivative=None, name=None):
        self.func = func
        self.derivative = derivative
        self.name = name or getattr(func, "__name__", "field")

    def __call__(self, p: Ternary) -> Ternary:
        return self.func(p)

    def __repr__(self):
        return f"TernaryField({self.name})"


def _shift(p: Ternary, axis: int, d: float) -> Ternary:
    c = list(p.components())
    c[axis] += d
    return Ternary(*c)


def _component_partials(F, p: Ternary, h: float) -> np.ndarray:
    """3x3 matrix d f_i / d x_j of central differences at step h."""
    out = np.empty((3, 3))
    for j in range(3):
        plus = F(_shift(p, j, h)).components()
        minus = F(_shift(p, j, -h)).components()
        for i in range(3):
            out[i, j] = (plus[i] - minus[i]) / (2.0 * h)
    return out


def _checked_partials(F, p: Ternary) -> np.ndarray:
    """Component partials with a two-step consistency check."""
    h = _FD1 * (1.0 + p.max_abs())
    fine = _component_partials(F, p, h)
    coarse = _component_partials(F, p, 2.0 * h)
    scale = 1.0 + np.max(np.abs(fine))
    if np.max(np.abs(fine - coarse)) > EPS_FD * scale:
        raise NumericalBreakdown(
            f"finite differences of {F!r} disagree across steps at {p}"
        )
    return fine


def wirtinger_partials(F, p: Ternary):
    """(dF/dz, dF/dz~, dF/dz~~) at p by central differences.

    The constant coefficient combinations come from inverting the linear
    change of basis between (x0, x1, x2) and (z, z~, z~~):

        d/dz    = (1/3) (d/dx0 +     q^2 d/dx1 +     q d/dx2)
        d/dz~   = (1/3) (d/dx0 + j^2 q^2 d/dx1 +   j q d/dx2)
        d/dz~~  = (1/3) (d/dx0 +   j q^2 d/dx1 + j^2 q d/dx2)

    dF/dz of a real field is real (a Ternary); the conjugate derivatives are
    ComplexTernary.  For the identity field the result is (1, 0, 0).
    """
    part = _checked_partials(F, p)
    d0 = Ternary(*part[:, 0])
    d1 = Ternary(*part[:, 1])
    d2 = Ternary(*part[:, 2])
    q2d1 = mul(Q2, d1)
    qd2 = mul(Q, d2)
    dz = ta.scale(d0 + q2d1 + qd2, 1.0 / 3.0)
    c0 = ComplexTernary.from_real(d0)
    c1 = ComplexTernary.from_real(q2d1)
    c2 = ComplexTernary.from_real(qd2)
    dzt = (c0 + J2 * c1 + J * c2) * (1.0 / 3.0)
    dztt = (c0 + J * c1 + J2 * c2) * (1.0 / 3.0)
    return dz, dzt, dztt


@dataclass
class HoloType1Report:
    """Residuals of the first-kind Cauchy-Riemann system at a point."""

    tol: float
    max_cartesian: float
    max_polar: float | None
    residuals_cartesian: np.ndarray = field(repr=False)
    residuals_polar: np.ndarray | None = field(repr=False, default=None)

    @property
    def passed(self) -> bool:
        worst = self.max_cartesian
        if self.max_polar is not None:
            worst = max(worst, self.max_polar)
        return worst <= self.tol


def _polar_partials(F, p: Ternary):
    """Partials of h(rho, phi1, phi2) = components of z F(z) at p's polar coords."""
    pol = ta.to_polar(p)
    coords = [pol.rho, pol.phi1, pol.phi2]

    def h(c):
        z = ta.from_polar(ta.PolarForm(c[0], c[1], c[2]))
        return mul(z, F(z)).components()

    out = np.empty((3, 3))
    for j in range(3):
        hj = _FD1 * (1.0 + abs(coords[j]))
        up = list(coords)
        dn = list(coords)
        up[j] += hj
        dn[j] -= hj
        plus, minus = h(up), h(dn)
        for i in range(3):
            out[i, j] = (plus[i] - minus[i]) / (2.0 * hj)
    return pol.rho, out


def check_holo_type1(F, p: Ternary, tol: float = EPS_FD) -> HoloType1Report:
    """All nine cartesian residuals of the first-kind system

        f0,0 = f1,1 = f2,2 ; f0,1 = f1,2 = f2,0 ; f0,2 = f1,0 = f2,1

    (f i,j = d f_i/d x_j), plus, when p admits polar coordinates, the nine
    polar residuals for h = z F(z).  Passes iff every residual <= tol.
    """
    m = _checked_partials(F, p)
    rows = [
        (m[0, 0], m[1, 1], m[2, 2]),
        (m[0, 1], m[1, 2], m[2, 0]),
        (m[0, 2], m[1, 0], m[2, 1]),
    ]
    cart = np.array([[a - b, b - c, c - a] for a, b, c in rows])

    polar = None
    try:
        rho, hm = _polar_partials(F, p)
    except (DomainError, SingularNumber):
        rho, hm = None, None
    if hm is not None:
        polar = np.array(
            [
                [hm[1, 1] - hm[2, 2], rho * hm[2, 0] - hm[0, 1], hm[0, 2] - rho * hm[1, 0]],
                [hm[2, 1] - hm[0, 2], rho * hm[0, 0] - hm[1, 1], hm[1, 2] - rho * hm[2, 0]],
                [hm[0, 1] - hm[1, 2], rho * hm[1, 0] - hm[2, 1], hm[2, 2] - rho * hm[0, 0]],
            ]
        )
    return HoloType1Report(
        tol=tol,
        max_cartesian=float(np.max(np.abs(cart))),
        max_polar=None if polar is None else float(np.max(np.abs(polar))),
        residuals_cartesian=cart,
        residuals_polar=polar,
    )


@dataclass
class HoloType2Report:
    """Residuals of single analyticity and of the extra reality constraints."""

    tol: float
    max_single: float
    max_reality: float
    residuals_single: np.ndarray = field(repr=False)
    residuals_reality: np.ndarray = field(repr=False)

    @property
    def passes_single(self) -> bool:
        return self.max_single <= self.tol

    @property
    def passes_reality(self) -> bool:
        return self.passes_single and self.max_reality <= self.tol


def check_holo_type2(F, p: Ternary, tol: float = EPS_FD) -> HoloType2Report:
    """Single analyticity (three summed constraints) plus reality constraints.

    Single analyticity:  f0,0 + f1,1 + f2,2 = f0,2 + f1,0 + f2,1
                        = f0,1 + f1,2 + f2,0 = 0.
    Reality (F a function of the conjugate product only): with the first-order
    operators U = x0 d2 + x1 d0 + x2 d1 and W = x0 d1 + x1 d2 + x2 d0,
    U f2 = W f1, U f0 = W f2, U f1 = W f0.
    """
    m = _checked_partials(F, p)
    single = np.array(
        [
            m[0, 0] + m[1, 1] + m[2, 2],
            m[0, 2] + m[1, 0] + m[2, 1],
            m[0, 1] + m[1, 2] + m[2, 0],
        ]
    )
    x0, x1, x2 = p.components()

    def u_op(i):
        return x0 * m[i, 2] + x1 * m[i, 0] + x2 * m[i, 1]

    def w_op(i):
        return x0 * m[i, 1] + x1 * m[i, 2] + x2 * m[i, 0]

    reality = np.array([u_op(2) - w_op(1), u_op(0) - w_op(2), u_op(1) - w_op(0)])
    return HoloType2Report(
        tol=tol,
        max_single=float(np.max(np.abs(single))),
        max_reality=float(np.max(np.abs(reality))),
        residuals_single=single,
        residuals_reality=reality,
    )


def ternary_laplacian(f, p: Ternary, step: float | None = None) -> float:
    """d^3f/dx0^3 + d^3f/dx1^3 + d^3f/dx2^3 - 3 d^3f/(dx0 dx1 dx2) at p.

    f is a scalar callable of Ternary.  Third-order central differences with
    h ~ eps^(1/5) scaled by the point magnitude.
    """
    h = step if step is not None else _FD3 * (1.0 + p.max_abs())
    total = 0.0
    for axis in range(3):
        total += (
            f(_shift(p, axis, 2 * h))
            - 2.0 * f(_shift(p, axis, h))
            + 2.0 * f(_shift(p, axis, -h))
            - f(_shift(p, axis, -2 * h))
        ) / (2.0 * h**3)
    mixed = 0.0
    for s0 in (1.0, -1.0):
        for s1 in (1.0, -1.0):
            for s2 in (1.0, -1.0):
                q = Ternary(p.x0 + s0 * h, p.x1 + s1 * h, p.x2 + s2 * h)
                mixed += s0 * s1 * s2 * f(q)
    total -= 3.0 * mixed / (8.0 * h**3)
    return total


class Curve:
    """Parametrized curve gamma: [t_start, t_end] -> R^3 (values are Ternary)."""

    def __init__(self, gamma, t_start, t_end, derivative=None):
        self.gamma = gamma
        self.t_start = float(t_start)
        self.t_end = float(t_end)
        self.derivative = derivative

    @property
    def closed(self) -> bool:
        a = self.gamma(self.t_start)
        b = self.gamma(self.t_end)
        gap = (a - b).max_abs()
        return gap <= EPS_GEO * (1.0 + a.max_abs())

    def velocity(self, t: float) -> Ternary:
        if self.derivative is not None:
            return self.derivative(t)
        h = _FD1 * (1.0 + abs(t))
        return ta.scale(self.gamma(t + h) - self.gamma(t - h), 1.0 / (2.0 * h))


def _guard_singular(evaluate):
    def wrapped(*args):
        try:
            return evaluate(*args)
        except (SingularNumber, ZeroDivisionError) as exc:
            raise SingularOnPath(f"integrand hit the singular set: {exc}") from exc

    return wrapped


def line_integral(F, curve: Curve, tol: float = DEFAULT_TOL, budget: int = DEFAULT_BUDGET) -> Ternary:
    """Integral of the 1-form F dz along the curve.

    The three component 1-forms are exactly the components of the algebra
    product F(gamma(t)) * gamma'(t), so the integrand is that product.  For a
    type-1 holomorphic F the result is primitive(end) - primitive(start).
    """

    @_guard_singular
    def integrand(t):
        return np.array(mul(F(curve.gamma(t)), curve.velocity(t)).components())

    value = adaptive_quad(integrand, curve.t_start, curve.t_end, tol, budget)
    return Ternary(*value)


class SurfacePatch:
    """Surface patch g(u, v) over a rectangle, with an orientation sign.

    Positive orientation is the (du, dv) order of the parametrization.
    partials (optional) returns the pair of tangent Ternary vectors.
    """

    def __init__(self, param, u_range, v_range, orientation=1, partials=None):
        self.param = param
        self.u_range = (float(u_range[0]), float(u_range[1]))
        self.v_range = (float(v_range[0]), float(v_range[1]))
        if orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        self.orientation = orientation
        self.partials = partials

    def tangents(self, u, v):
        if self.partials is not None:
            return self.partials(u, v)
        hu = _FD1 * (1.0 + abs(u))
        hv = _FD1 * (1.0 + abs(v))
        du = ta.scale(self.param(u + hu, v) - self.param(u - hu, v), 1.0 / (2.0 * hu))
        dv = ta.scale(self.param(u, v + hv) - self.param(u, v - hv), 1.0 / (2.0 * hv))
        return du, dv


def surface_integral_2form(Phi, patch: SurfacePatch, tol: float = DEFAULT_TOL, budget: int = DEFAULT_BUDGET) -> Ternary:
    """Integral over the patch of the three 2-forms attached to Phi.

    With the pullback Jacobians J12, J20, J01 (areas on the coordinate
    planes), the components are

        Omega0 = Phi0 J12 + Phi1 J20 + Phi2 J01
        Omega1 = Phi1 J12 + Phi2 J20 + Phi0 J01
        Omega2 = Phi2 J12 + Phi0 J20 + Phi1 J01
    """

    @_guard_singular
    def integrand(u, v):
        x = patch.param(u, v)
        du, dv = patch.tangents(u, v)
        j12 = du.x1 * dv.x2 - du.x2 * dv.x1
        j20 = du.x2 * dv.x0 - du.x0 * dv.x2
        j01 = du.x0 * dv.x1 - du.x1 * dv.x0
        f0, f1, f2 = Phi(x).components()
        return patch.orientation * np.array(
            [
                f0 * j12 + f1 * j20 + f2 * j01,
                f1 * j12 + f2 * j20 + f0 * j01,
                f2 * j12 + f0 * j20 + f1 * j01,
            ]
        )

    value = adaptive_quad_2d(integrand, patch.u_range, patch.v_range, tol, budget)
    return Ternary(*value)


def volume_integral_3form(W, box, tol: float = DEFAULT_TOL, budget: int = DEFAULT_BUDGET) -> Ternary:
    """Componentwise volume integral of W over a box ((a0,b0),(a1,b1),(a2,b2)).

    Each component multiplies the same volume element dx0^dx1^dx2, so the
    result is simply the componentwise 3D integral of W.
    """

    @_guard_singular
    def integrand(x0, x1, x2):
        return np.array(W(Ternary(x0, x1, x2)).components())

    value = adaptive_quad_3d(integrand, box, tol, budget)
    return Ternary(*value)


@dataclass(frozen=True)
class CubicSurfaceGeometry:
    """Point and first/second-order data of the cubic level surface ||z||^3 = rho^3.

    Coordinates: a = x0+x1+x2 along the trisectrice, theta around it; the
    transverse radius r satisfies a r^2 = rho^3.  metric_r and metric_theta
    are the dr^2 and dtheta^2 coefficients of the induced metric.
    """

    rho: float
    a: float
    theta: float
    r: float
    point: Ternary
    metric_r: float
    metric_theta: float
    gauss_curvature: float
    jacobians: tuple[float, float, float]  # (J12, J20, J01) in (a, theta) order


def cubic_surface_geometry(rho: float, a: float, theta: float) -> CubicSurfaceGeometry:
    """Evaluate the standard parametrization of the cubic surface at (a, theta).

    Returns the surface point, the induced-metric coefficients
    ((1/3)(2 + 4 rho^6/r^6), (2/3) r^2), the curvature -12 a^4/(4a^3+rho^3)^2,
    and the pullback Jacobians (J12, J20, J01) whose cubic combination
    satisfies the ternary Pythagorean identity rho^6/(3 sqrt3 a^3).
    """
    if a <= 0.0:
        raise DomainError(f"surface coordinate a must be positive, got {a}")
    if rho <= 0.0:
        raise DomainError(f"modulus level rho must be positive, got {rho}")
    r = rho ** 1.5 / math.sqrt(a)
    c, s = math.cos(theta), math.sin(theta)
    point = Ternary(
        (a - 2.0 * r * c) / 3.0,
        (a + r * (c + math.sqrt(3.0) * s)) / 3.0,
        (a + r * (c - math.sqrt(3.0) * s)) / 3.0,
    )
    metric_r = (2.0 + 4.0 * rho**6 / r**6) / 3.0
    metric_theta = 2.0 * r**2 / 3.0
    gauss = -12.0 * a**4 / (4.0 * a**3 + rho**3) ** 2
    p = rho**3 / a**2
    k = math.sqrt(3.0) / 9.0
    j12 = k * (p - 2.0 * r * c)
    j20 = k * (p + r * (c + math.sqrt(3.0) * s))
    j01 = k * (p + r * (c - math.sqrt(3.0) * s))
    return CubicSurfaceGeometry(rho, a, theta, r, point, metric_r, metric_theta, gauss, (j12, j20, j01))


def conformal_jacobian(F, p: Ternary, tol: float = EPS_FD) -> float:
    """Jacobian determinant of (f0, f1, f2) at p for a type-1 holomorphic F.

    Equals the cubic norm of dF/dz; raises NotHolomorphic when the type-1
    residuals at p exceed tol.
    """
    report = check_holo_type1(F, p, tol)
    if not report.passed:
        raise NotHolomorphic(
            f"type-1 residual {max(report.max_cartesian, report.max_polar or 0.0):.3e} "
            f"exceeds {tol:.1e} at {p}"
        )
    return float(np.linalg.det(_checked_partials(F, p)))


# ---------------------------------------------------------------------------
# Curve and surface presets


def trisectrice_loop(rho: float = 1.0, phi: float = 0.0) -> Curve:
    """Closed loop of constant modulus winding once around the trisectrice.

    gamma(t) = from_polar(rho, phi + t, phi - t) for t in [0, 2 pi/sqrt3);
    the tangent is gamma * (q - q^2), supplied analytically.
    """

    def gamma(t):
        return ta.from_polar(ta.PolarForm(rho, phi + t, phi - t))

    def velocity(t):
        return mul(gamma(t), Ternary(0.0, 1.0, -1.0))

    return Curve(gamma, 0.0, ta.THETA_PERIOD, derivative=velocity)


def cubic_band_patch(rho: float, a1: float, a2: float) -> SurfacePatch:
    """Band of the cubic surface between trisectrice coordinates a1 < a2.

    Parametrized by (a, theta) with theta over a full turn; tangents are
    analytic.  Positive orientation is the (a, theta) order.
    """
    if not (0.0 < a1 < a2):
        raise DomainError(f"need 0 < a1 < a2, got ({a1}, {a2})")

    def param(a, theta):
        return cubic_surface_geometry(rho, a, theta).point

    def partials(a, theta):
        r = rho**1.5 / math.sqrt(a)
        c, s = math.cos(theta), math.sin(theta)
        s3 = math.sqrt(3.0)
        da = Ternary(
            (1.0 + r * c / a) / 3.0,
            (1.0 - r * (c + s3 * s) / (2.0 * a)) / 3.0,
            (1.0 - r * (c - s3 * s) / (2.0 * a)) / 3.0,
        )
        dtheta = Ternary(
            2.0 * r * s / 3.0,
            r * (-s + s3 * c) / 3.0,
            r * (-s - s3 * c) / 3.0,
        )
        return da, dtheta

    return SurfacePatch(param, (a1, a2), (0.0, 2.0 * math.pi), partials=partials)


def polar_band_patch(rho: float, phi_lo: float, phi_hi: float) -> SurfacePatch:
    """Constant-modulus band in polar coordinates (theta, phi).

    Full compact turn theta in [0, 2 pi/sqrt3), non-compact angle phi in
    [phi_lo, phi_hi]; tangents are z*(q - q^2) and z*(q + q^2).
    """

    def param(theta, phi):
        return ta.from_polar(ta.PolarForm(rho, phi + theta, phi - theta))

    def partials(theta, phi):
        z = param(theta, phi)
        return mul(z, Ternary(0.0, 1.0, -1.0)), mul(z, Ternary(0.0, 1.0, 1.0))

    return SurfacePatch(param, (0.0, ta.THETA_PERIOD), (phi_lo, phi_hi), partials=partials)


def sphere_patch(center: Ternary, radius: float) -> SurfacePatch:
    """Round sphere (closed surface) with outward orientation."""

    def param(u, v):
        return Ternary(
            center.x0 + radius * math.sin(u) * math.cos(v),
            center.x1 + radius * math.sin(u) * math.sin(v),
            center.x2 + radius * math.cos(u),
        )

    def partials(u, v):
        du = Ternary(
            radius * math.cos(u) * math.cos(v),
            radius * math.cos(u) * math.sin(v),
            -radius * math.sin(u),
        )
        dv = Ternary(-radius * math.sin(u) * math.sin(v), radius * math.sin(u) * math.cos(v), 0.0)
        return du, dv

    return SurfacePatch(param, (0.0, math.pi), (0.0, 2.0 * math.pi), partials=partials)


def box_boundary_patches(box) -> list[SurfacePatch]:
    """The six faces of a box, each oriented with the outward normal."""
    (a0, b0), (a1, b1), (a2, b2) = box
    faces = []
    # x0 faces: (u, v) = (x1, x2)
    faces.append(SurfacePatch(lambda u, v: Ternary(b0, u, v), (a1, b1), (a2, b2), orientation=1))
    faces.append(SurfacePatch(lambda u, v: Ternary(a0, u, v), (a1, b1), (a2, b2), orientation=-1))
    # x1 faces: (u, v) = (x2, x0)
    faces.append(SurfacePatch(lambda u, v: Ternary(v, b1, u), (a2, b2), (a0, b0), orientation=1))
    faces.append(SurfacePatch(lambda u, v: Ternary(v, a1, u), (a2, b2), (a0, b0), orientation=-1))
    # x2 faces: (u, v) = (x0, x1)
    faces.append(SurfacePatch(lambda u, v: Ternary(u, v, b2), (a0, b0), (a1, b1), orientation=1))
    faces.append(SurfacePatch(lambda u, v: Ternary(u, v, a2), (a0, b0), (a1, b1), orientation=-1))
    return faces

"""Arithmetic and transcendental functions on ternary complex numbers.

A ternary complex number is z = x0 + x1*q + x2*q**2 with real components and
q**3 = 1, i.e. an element of R[X]/(1 - X**3).  The algebra is commutative and
splits into a real line (spanned by the idempotent K0) and a complex plane
(spanned by E0 and I), glued along the cubic pseudo-norm

    ||z||^3 = x0^3 + x1^3 + x2^3 - 3*x0*x1*x2.

Numbers with vanishing cubic norm are singular (non-invertible).  Nonsingular
numbers with positive trisectrice component x0+x1+x2 admit a polar form
z = rho * e^{phi1*q + phi2*q^2}, whose component functions are the Appell
multi-sine functions implemented here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularNumber

__all__ = [
    "Ternary",
    "ComplexTernary",
    "PolarForm",
    "IdempotentCoords",
    "ZERO",
    "ONE",
    "Q",
    "Q2",
    "K0",
    "E0",
    "I_UNIT",
    "J",
    "J2",
    "THETA_PERIOD",
    "EPS_ROUNDTRIP",
    "add",
    "sub",
    "neg",
    "scale",
    "mul",
    "cubic_form",
    "norm_cubed",
    "norm",
    "singular_tolerance",
    "is_singular",
    "tilde_product",
    "inverse",
    "bar",
    "conjugates",
    "idempotent_decompose",
    "idempotent_reconstruct",
    "multisine",
    "exp",
    "log",
    "to_polar",
    "from_polar",
    "characteristic_matrix",
]

SQRT3 = math.sqrt(3.0)

#: Canonical reduction interval for the compact angle theta is [0, THETA_PERIOD).
THETA_PERIOD = 2.0 * math.pi / SQRT3

#: Relative tolerance used by round-trip contracts (exp/log, polar).
EPS_ROUNDTRIP = 1e-10

#: Coefficient of the singularity cutoff; the cutoff scales cubically because
#: the norm is cubic in the components.
EPS_SINGULAR = 1e-12

#: Primitive cube root of unity used by the conjugate copies.
J = complex(-0.5, SQRT3 / 2.0)
J2 = complex(-0.5, -SQRT3 / 2.0)


@dataclass(frozen=True)
class Ternary:
    """z = x0 + x1*q + x2*q^2 with real, finite components."""

    x0: float
    x1: float
    x2: float

    def __post_init__(self):
        for c in (self.x0, self.x1, self.x2):
            if not math.isfinite(c):
                raise ValueError(f"non-finite ternary component: {c!r}")

    def components(self):
        return (self.x0, self.x1, self.x2)

    def max_abs(self):
        return max(abs(self.x0), abs(self.x1), abs(self.x2))

    def __add__(self, other):
        return Ternary(self.x0 + other.x0, self.x1 + other.x1, self.x2 + other.x2)

    def __sub__(self, other):
        return Ternary(self.x0 - other.x0, self.x1 - other.x1, self.x2 - other.x2)

    def __neg__(self):
        return Ternary(-self.x0, -self.x1, -self.x2)

    def __mul__(self, other):
        if isinstance(other, Ternary):
            return mul(self, other)
        return scale(self, other)

    def __rmul__(self, other):
        return scale(self, other)

    def __repr__(self):
        return f"Ternary({self.x0!r}, {self.x1!r}, {self.x2!r})"


ZERO = Ternary(0.0, 0.0, 0.0)
ONE = Ternary(1.0, 0.0, 0.0)
Q = Ternary(0.0, 1.0, 0.0)
Q2 = Ternary(0.0, 0.0, 1.0)

# Idempotent basis: K0 spans the real ideal, {E0, I} the complex one.
K0 = Ternary(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
E0 = Ternary(2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0)
I_UNIT = Ternary(0.0, 1.0 / SQRT3, -1.0 / SQRT3)


def add(z: Ternary, w: Ternary) -> Ternary:
    return z + w


def sub(z: Ternary, w: Ternary) -> Ternary:
    return z - w


def neg(z: Ternary) -> Ternary:
    return -z


def scale(z: Ternary, c: float) -> Ternary:
    return Ternary(c * z.x0, c * z.x1, c * z.x2)


def mul(z: Ternary, w: Ternary) -> Ternary:
    """Ring product; q^3 = 1 folds every power of q back into {1, q, q^2}."""
    return Ternary(
        z.x0 * w.x0 + z.x1 * w.x2 + z.x2 * w.x1,
        z.x0 * w.x1 + z.x1 * w.x0 + z.x2 * w.x2,
        z.x0 * w.x2 + z.x1 * w.x1 + z.x2 * w.x0,
    )


def cubic_form(u: float, v: float, w: float) -> float:
    """u^3 + v^3 + w^3 - 3uvw, evaluated in the factored form

    (u + v + w) * ((u-v)^2 + (v-w)^2 + (w-u)^2) / 2,

    which avoids the cancellation of the direct power sum when the three
    values are large and nearly equal.
    """
    return (u + v + w) * 0.5 * ((u - v) ** 2 + (v - w) ** 2 + (w - u) ** 2)


def norm_cubed(z: Ternary) -> float:
    """Cubic pseudo-norm x0^3 + x1^3 + x2^3 - 3*x0*x1*x2 (sign preserved)."""
    return cubic_form(z.x0, z.x1, z.x2)


def norm(z: Ternary) -> float:
    """Real cube root of the cubic norm (sign preserved)."""
    n = norm_cubed(z)
    return math.copysign(abs(n) ** (1.0 / 3.0), n)


def singular_tolerance(z: Ternary) -> float:
    return EPS_SINGULAR * (1.0 + z.max_abs()) ** 3


def is_singular(z: Ternary) -> bool:
    """True when z lies (numerically) in one of the two ideals."""
    return abs(norm_cubed(z)) <= singular_tolerance(z)


def tilde_product(z: Ternary) -> Ternary:
    """Product of the two conjugate copies, a real ternary number.

    z * tilde_product(z) = ||z||^3 * 1, which is what makes division work.
    """
    return Ternary(
        z.x0 * z.x0 - z.x1 * z.x2,
        z.x2 * z.x2 - z.x0 * z.x1,
        z.x1 * z.x1 - z.x2 * z.x0,
    )


def inverse(z: Ternary) -> Ternary:
    n = norm_cubed(z)
    if abs(n) <= singular_tolerance(z):
        raise SingularNumber(f"non-invertible: ||z||^3 = {n:.3e} for z = {z}")
    return scale(tilde_product(z), 1.0 / n)


def bar(z: Ternary) -> Ternary:
    """Norm-preserving duality z -> z~ z~~ / ||z||; an involution."""
    n = norm_cubed(z)
    if abs(n) <= singular_tolerance(z):
        raise SingularNumber(f"duality undefined: ||z||^3 = {n:.3e} for z = {z}")
    return scale(tilde_product(z), 1.0 / math.copysign(abs(n) ** (1.0 / 3.0), n))


@dataclass(frozen=True)
class ComplexTernary:
    """Ternary number with complex components; houses the conjugate copies."""

    c0: complex
    c1: complex
    c2: complex

    @staticmethod
    def from_real(z: Ternary) -> "ComplexTernary":
        return ComplexTernary(complex(z.x0), complex(z.x1), complex(z.x2))

    def components(self):
        return (self.c0, self.c1, self.c2)

    def real_part(self) -> Ternary:
        return Ternary(self.c0.real, self.c1.real, self.c2.real)

    def imag_part(self) -> Ternary:
        return Ternary(self.c0.imag, self.c1.imag, self.c2.imag)

    def max_imag(self) -> float:
        return max(abs(self.c0.imag), abs(self.c1.imag), abs(self.c2.imag))

    def __add__(self, other):
        return ComplexTernary(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2)

    def __sub__(self, other):
        return ComplexTernary(self.c0 - other.c0, self.c1 - other.c1, self.c2 - other.c2)

    def __mul__(self, other):
        if isinstance(other, ComplexTernary):
            return ComplexTernary(
                self.c0 * other.c0 + self.c1 * other.c2 + self.c2 * other.c1,
                self.c0 * other.c1 + self.c1 * other.c0 + self.c2 * other.c2,
                self.c0 * other.c2 + self.c1 * other.c1 + self.c2 * other.c0,
            )
        return ComplexTernary(self.c0 * other, self.c1 * other, self.c2 * other)

    def __rmul__(self, other):
        return ComplexTernary(self.c0 * other, self.c1 * other, self.c2 * other)


def conjugates(z: Ternary) -> tuple[ComplexTernary, ComplexTernary]:
    """The two conjugate copies (z~, z~~) with j = e^{2 pi i/3}:

    z~  = x0 + x1*j*q   + x2*j^2*q^2
    z~~ = x0 + x1*j^2*q + x2*j*q^2
    """
    zt = ComplexTernary(complex(z.x0), z.x1 * J, z.x2 * J2)
    ztt = ComplexTernary(complex(z.x0), z.x1 * J2, z.x2 * J)
    return zt, ztt


@dataclass(frozen=True)
class IdempotentCoords:
    """Coordinates of z in the basis {K0, E0, I}."""

    k: float
    e: float
    i: float


def idempotent_decompose(z: Ternary) -> IdempotentCoords:
    """z = k*K0 + e*E0 + i*I with

    k = x0 + x1 + x2,  e = x0 - (x1 + x2)/2,  i = (sqrt3/2)(x1 - x2).

    The e-coefficient is fixed by requiring exact reconstruction (it also
    matches the diagonal of the characteristic matrix); with it the cubic
    norm factors as k*(e^2 + i^2).
    """
    return IdempotentCoords(
        z.x0 + z.x1 + z.x2,
        z.x0 - 0.5 * (z.x1 + z.x2),
        (SQRT3 / 2.0) * (z.x1 - z.x2),
    )


def idempotent_reconstruct(c: IdempotentCoords) -> Ternary:
    """Inverse linear map of idempotent_decompose."""
    return Ternary(
        (c.k + 2.0 * c.e) / 3.0,
        (c.k - c.e + SQRT3 * c.i) / 3.0,
        (c.k - c.e - SQRT3 * c.i) / 3.0,
    )


def multisine(k: int, phi1: float, phi2: float) -> float:
    """Appell multi-sine m_k(phi1, phi2), k in {0, 1, 2}:

    m_k = (1/3) * (e^{phi1+phi2}
                   + 2 e^{-(phi1+phi2)/2} cos((sqrt3/2)(phi1-phi2) - 2 pi k/3))

    These are the components of e^{phi1*q + phi2*q^2}; they preserve the cubic
    form: m0^3 + m1^3 + m2^3 - 3 m0 m1 m2 = 1 identically.
    """
    if k not in (0, 1, 2):
        raise ValueError(f"multisine index must be 0, 1 or 2, got {k}")
    s = phi1 + phi2
    psi = (SQRT3 / 2.0) * (phi1 - phi2)
    return (math.exp(s) + 2.0 * math.exp(-0.5 * s) * math.cos(psi - 2.0 * math.pi * k / 3.0)) / 3.0


def exp(z: Ternary) -> Ternary:
    """Componentwise e^z = e^{x0} (m0(x1,x2) + m1(x1,x2) q + m2(x1,x2) q^2).

    The two exponential scales e^{x0+x1+x2} and e^{x0-(x1+x2)/2} are formed
    directly so intermediate products cannot overflow spuriously; a genuine
    overflow of either scale raises OverflowError.
    """
    s = z.x1 + z.x2
    big = math.exp(z.x0 + s)          # may raise OverflowError
    small = 2.0 * math.exp(z.x0 - 0.5 * s)
    psi = (SQRT3 / 2.0) * (z.x1 - z.x2)
    return Ternary(
        (big + small * math.cos(psi)) / 3.0,
        (big + small * math.cos(psi - 2.0 * math.pi / 3.0)) / 3.0,
        (big + small * math.cos(psi - 4.0 * math.pi / 3.0)) / 3.0,
    )


def _log_parts(z: Ternary) -> tuple[float, float, float]:
    """(ln rho, phi, theta) for admissible z; theta reduced into [0, period)."""
    n = norm_cubed(z)
    if abs(n) <= singular_tolerance(z):
        raise SingularNumber(f"log undefined on the singular set: ||z||^3 = {n:.3e}")
    k = z.x0 + z.x1 + z.x2
    if n <= 0.0 or k <= 0.0:
        raise DomainError(
            f"log requires ||z||^3 > 0 and x0+x1+x2 > 0, got {n:.3e} and {k:.3e}"
        )
    ln_rho = math.log(n) / 3.0
    phi = 0.5 * (math.log(k) - ln_rho)
    psi = math.atan2(SQRT3 * (z.x1 - z.x2), 2.0 * z.x0 - z.x1 - z.x2)
    theta = psi / SQRT3
    if theta < 0.0:
        theta += THETA_PERIOD
    return ln_rho, phi, theta


def log(z: Ternary) -> Ternary:
    """Principal logarithm: ln z = ln rho + phi1*q + phi2*q^2 with

    ln rho = (1/3) ln ||z||^3,
    phi    = (phi1+phi2)/2 = (1/2) ln((x0+x1+x2)/rho),
    theta  = (phi1-phi2)/2 = psi/sqrt3,  psi = atan2(sqrt3 (x1-x2), 2x0-x1-x2),

    with theta reduced into [0, 2 pi/sqrt3).  exp(log(z)) = z on the domain
    (nonsingular, x0+x1+x2 > 0); the formulas are not extended elsewhere.
    """
    ln_rho, phi, theta = _log_parts(z)
    return Ternary(ln_rho, phi + theta, phi - theta)


@dataclass(frozen=True)
class PolarForm:
    """Polar coordinates (rho, phi1, phi2) of a nonsingular ternary number."""

    rho: float
    phi1: float
    phi2: float

    def __post_init__(self):
        if not (math.isfinite(self.rho) and self.rho > 0.0):
            raise DomainError(f"polar modulus must be positive and finite, got {self.rho!r}")
        if not (math.isfinite(self.phi1) and math.isfinite(self.phi2)):
            raise ValueError("non-finite polar angle")

    @property
    def theta(self) -> float:
        """Compact angle (phi1-phi2)/2 reduced into [0, 2 pi/sqrt3)."""
        t = 0.5 * (self.phi1 - self.phi2)
        t = math.fmod(t, THETA_PERIOD)
        if t < 0.0:
            t += THETA_PERIOD
        return t

    @property
    def phi(self) -> float:
        """Non-compact angle (phi1+phi2)/2."""
        return 0.5 * (self.phi1 + self.phi2)


def to_polar(z: Ternary) -> PolarForm:
    """Polar form of z; same domain as log, theta canonicalized."""
    ln_rho, phi, theta = _log_parts(z)
    return PolarForm(math.exp(ln_rho), phi + theta, phi - theta)


def from_polar(p: PolarForm) -> Ternary:
    """x_k = rho * m_k(phi1, phi2)."""
    return Ternary(
        p.rho * multisine(0, p.phi1, p.phi2),
        p.rho * multisine(1, p.phi1, p.phi2),
        p.rho * multisine(2, p.phi1, p.phi2),
    )


def characteristic_matrix(z: Ternary) -> np.ndarray:
    """3x3 matrix sum x_i R(q^i) over the vector rotation matrices

    R(q) = rotation by 2 pi/3 in the plane orthogonal to the trisectrice.

    The map is an algebra homomorphism (matrix product matches mul) and its
    determinant equals the cubic norm.
    """
    k = z.x0 + z.x1 + z.x2
    e = z.x0 - 0.5 * (z.x1 + z.x2)
    i = (SQRT3 / 2.0) * (z.x1 - z.x2)
    return np.array([[k, 0.0, 0.0], [0.0, e, i], [0.0, -i, e]])

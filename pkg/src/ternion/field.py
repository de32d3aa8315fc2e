"""The singular ternary magnetic field in trisectrice-frame coordinates.

The cartesian field H = x / ||z||^3 is divergence-free away from the
trisectrice x0 = x1 = x2, where a string of monopoles sits.  In the rotated
orthonormal frame (l along the trisectrice, r1, r2 transverse) the rescaled
field h = (3 sqrt3/2) H has the closed form

    h0 = 1/|r|^2,   h_i = r_i / (l |r|^2),   |r|^2 = r1^2 + r2^2,

and splits into a gradient part (of the scalar potential of the monopole
density) plus a rotational part sourced by azimuthal currents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import Ternary, norm_cubed
from .errors import DomainError, OnSingularSet

__all__ = [
    "FrameVector",
    "FieldSample",
    "EPS_FIELD",
    "EPS_DIV",
    "FRAME_MATRIX",
    "to_frame",
    "from_frame",
    "field_h",
    "potential_decompose",
    "current_density",
    "vector_potential",
    "sample_field",
    "write_field_grid",
    "cycle_components",
    "cycle_point",
    "h_cartesian",
    "FIELD_GRID_HEADER",
]

EPS_FIELD = 1e-8   # admissibility margin around the singular sets
EPS_DIV = 1e-5     # tolerance for stencil divergence/curl checks on O(1) points

# Frame rows (trisectrice, then two transverse directions), acting on the
# component vector ordered (x1, x2, x0).  Stored once to keep the ordering
# convention in a single place.
FRAME_MATRIX = np.array(
    [
        [1.0 / math.sqrt(3.0), 1.0 / math.sqrt(3.0), 1.0 / math.sqrt(3.0)],
        [1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0), 0.0],
        [1.0 / math.sqrt(6.0), 1.0 / math.sqrt(6.0), -2.0 / math.sqrt(6.0)],
    ]
)


@dataclass(frozen=True)
class FrameVector:
    """Coordinates (l, r1, r2): l along the trisectrice, r transverse."""

    l: float
    r1: float
    r2: float

    @property
    def r_mag(self) -> float:
        return math.hypot(self.r1, self.r2)

    def as_array(self) -> np.ndarray:
        return np.array([self.l, self.r1, self.r2])


def _components(x) -> tuple[float, float, float]:
    if isinstance(x, Ternary):
        return x.components()
    x0, x1, x2 = x
    return (float(x0), float(x1), float(x2))


def to_frame(x) -> FrameVector:
    """Frame coordinates of a point given as Ternary or an (x0, x1, x2) triple."""
    x0, x1, x2 = _components(x)
    vec = FRAME_MATRIX @ np.array([x1, x2, x0])
    return FrameVector(float(vec[0]), float(vec[1]), float(vec[2]))


def from_frame(v: FrameVector) -> Ternary:
    """Inverse frame map (the transpose, since the frame is orthonormal)."""
    x1, x2, x0 = FRAME_MATRIX.T @ v.as_array()
    return Ternary(float(x0), float(x1), float(x2))


def _require_admissible(v: FrameVector):
    r = v.r_mag
    if r <= EPS_FIELD * (1.0 + abs(v.l)):
        raise OnSingularSet(f"point within {EPS_FIELD} of the trisectrice: {v}")
    if abs(v.l) <= EPS_FIELD:
        raise OnSingularSet(f"point within {EPS_FIELD} of the l = 0 plane: {v}")
    return r


def field_h(v: FrameVector) -> np.ndarray:
    """Frame components (h0, h1, h2) of the rescaled field."""
    r = _require_admissible(v)
    r2 = r * r
    return np.array([1.0 / r2, v.r1 / (v.l * r2), v.r2 / (v.l * r2)])


def potential_decompose(v: FrameVector):
    """(phi_s, h_pot, h_rot): scalar potential, its gradient, and the rest.

    phi_s = ln((R - l)/(R + l)) / (2R) with R^2 = l^2 + |r|^2; the log ratio
    is formed from r^2/(R + |l|)^2 so it stays accurate for |l| >> |r|.
    h_pot is the analytic gradient; h_rot the closed-form remainder, and
    h_pot + h_rot reproduces field_h exactly.
    """
    r = _require_admissible(v)
    l = v.l
    big_r = math.hypot(l, r)
    if big_r <= abs(l):
        raise DomainError(f"|R| <= |l| at {v}")
    log_ratio = 2.0 * (math.log(r) - math.log(big_r + abs(l)))
    if l < 0.0:
        log_ratio = -log_ratio
    phi_s = log_ratio / (2.0 * big_r)
    r2 = r * r
    rr3 = big_r**3
    rr2 = big_r**2
    h_pot = np.array(
        [
            -l / (2.0 * rr3) * log_ratio - 1.0 / rr2,
            -v.r1 / (2.0 * rr3) * log_ratio + l * v.r1 / (r2 * rr2),
            -v.r2 / (2.0 * rr3) * log_ratio + l * v.r2 / (r2 * rr2),
        ]
    )
    h_rot = np.array(
        [
            l / (2.0 * rr3) * log_ratio + 1.0 / rr2 + 1.0 / r2,
            v.r1 / (2.0 * rr3) * log_ratio + v.r1 / (rr2 * l),
            v.r2 / (2.0 * rr3) * log_ratio + v.r2 / (rr2 * l),
        ]
    )
    return phi_s, h_pot, h_rot


def current_density(v: FrameVector) -> np.ndarray:
    """Azimuthal current (0, j1, j2) sourcing the rotational part.

    j_k = eps_kl r_l (-2/|r|^4 + 1/(l^2 |r|^2)); tangential to circles around
    the trisectrice and vanishing on the cone |r| = sqrt2 |l|.
    """
    r = _require_admissible(v)
    r2 = r * r
    t = -2.0 / (r2 * r2) + 1.0 / (v.l * v.l * r2)
    return np.array([0.0, v.r2 * t, -v.r1 * t])


def vector_potential(v: FrameVector) -> np.ndarray:
    """Gauge A0 = 0 potential with curl A = h in the region l > 0.

    A1 = r2 ln(l/|r|)/|r|^2, A2 = -r1 ln(l/|r|)/|r|^2.
    """
    r = _require_admissible(v)
    if v.l <= 0.0:
        raise DomainError(f"vector potential requires l > 0, got l = {v.l}")
    u = math.log(v.l / r) / (r * r)
    return np.array([0.0, v.r2 * u, -v.r1 * u])


@dataclass(frozen=True)
class FieldSample:
    """Every field quantity at one admissible frame point."""

    point: FrameVector
    h: np.ndarray
    phi_s: float
    h_pot: np.ndarray
    h_rot: np.ndarray
    j: np.ndarray
    a: np.ndarray | None  # None where the gauge potential is undefined (l <= 0)


def sample_field(v: FrameVector) -> FieldSample:
    h = field_h(v)
    phi_s, h_pot, h_rot = potential_decompose(v)
    j = current_density(v)
    a = vector_potential(v) if v.l > 0.0 else None
    return FieldSample(v, h, phi_s, h_pot, h_rot, j, a)


FIELD_GRID_HEADER = (
    "l,r1,r2,h0,h1,h2,hpot0,hpot1,hpot2,hrot0,hrot1,hrot2,j0,j1,j2"
)


def write_field_grid(path, l_values, r1_values, r2_values):
    """CSV scan of the field over the cartesian product of the grids.

    Every grid point must be admissible; floats are written with shortest
    round-trip precision.  Returns the number of rows written.
    """
    rows = 0
    with open(path, "w") as fh:
        fh.write(FIELD_GRID_HEADER + "\n")
        for l in l_values:
            for r1 in r1_values:
                for r2 in r2_values:
                    s = sample_field(FrameVector(float(l), float(r1), float(r2)))
                    cells = [s.point.l, s.point.r1, s.point.r2, *s.h, *s.h_pot, *s.h_rot, *s.j]
                    fh.write(",".join(repr(float(c)) for c in cells) + "\n")
                    rows += 1
    return rows


def cycle_components(vec: np.ndarray) -> np.ndarray:
    """Cyclic transmutation of cartesian components: new_i = old_{i+1 mod 3}."""
    return np.array([vec[1], vec[2], vec[0]])


def cycle_point(z: Ternary) -> Ternary:
    """The point rotation matching cycle_components (2 pi/3 about the trisectrice)."""
    return Ternary(z.x1, z.x2, z.x0)


def h_cartesian(z: Ternary) -> np.ndarray:
    """Cartesian components (H_x0, H_x1, H_x2) of H = x / ||z||^3."""
    n = norm_cubed(z)
    if n == 0.0:
        raise OnSingularSet(f"cartesian field undefined on the singular set at {z}")
    return np.array([z.x0 / n, z.x1 / n, z.x2 / n])

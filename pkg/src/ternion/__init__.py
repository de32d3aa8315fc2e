"""Ternary complex numbers and the integrable monopole dynamics they induce.

Subpackages by layer: algebra (the number system), calculus (holomorphy and
differential-form quadrature), field (the singular magnetic field), dynamics
(trajectories and scattering), verify (seeded property suites), cli.
"""

from . import algebra, calculus, dynamics, errors, field
from .algebra import ComplexTernary, PolarForm, Ternary

__version__ = "0.1.0"

__all__ = [
    "algebra",
    "calculus",
    "dynamics",
    "errors",
    "field",
    "Ternary",
    "ComplexTernary",
    "PolarForm",
    "__version__",
]

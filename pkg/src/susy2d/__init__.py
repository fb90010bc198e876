"""susy2d: exact operator algebra and numerical verification for 2D radial
quantum systems (isotropic oscillator, hydrogen atom, and the power-law
potential interpolating between them)."""

from .exact import Expo, GaussianRational, PARAMS, Poly
from .operators import Operator, PrefactorError, apply_to_monomial, commutator, compose

__all__ = [
    "Expo",
    "GaussianRational",
    "Operator",
    "PARAMS",
    "Poly",
    "PrefactorError",
    "apply_to_monomial",
    "commutator",
    "compose",
]

__version__ = "0.1.0"

"""Homogeneous geodesics on Lie groups with left-invariant pseudo-Riemannian metrics."""

from homgeo.algebra import (
    LieAlgebra,
    MetricTensor,
    PseudoOrthonormalFrame,
    bracket,
    pseudo_orthonormalize,
    signature,
    validate,
)
from homgeo.config import SolverConfig
from homgeo.connection import (
    ConnectionCoefficients,
    covariant_quadratic,
    koszul_coefficients,
)
from homgeo.errors import HomGeoError

__version__ = "0.1.0"

__all__ = [
    "ConnectionCoefficients",
    "HomGeoError",
    "LieAlgebra",
    "MetricTensor",
    "PseudoOrthonormalFrame",
    "SolverConfig",
    "bracket",
    "covariant_quadratic",
    "koszul_coefficients",
    "pseudo_orthonormalize",
    "signature",
    "validate",
]

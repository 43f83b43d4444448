"""Levi-Civita connection of a left-invariant metric in a pseudo-orthonormal frame."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from homgeo.algebra import LieAlgebra, PseudoOrthonormalFrame, _as_vector, _readonly
from homgeo.errors import DimensionError

TOL_CONN = 1e-10


@dataclass(frozen=True, eq=False)
class ConnectionCoefficients:
    """``gamma[i, j, k]`` is the E_k-component of ``nabla_{E_i} E_j``.

    ``structure`` holds the bracket constants in the same frame and ``eta``
    the diagonal of the frame metric; both are needed by consumers that
    cross-check against the bracket.
    """

    gamma: np.ndarray
    structure: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        for name in ("gamma", "structure", "eta"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))
        n = self.gamma.shape[0]
        # cached for the per-point hot paths
        object.__setattr__(self, "_flat", self.gamma.reshape(n, n * n))
        object.__setattr__(self, "_lorentzian", bool(np.sum(self.eta < 0) == 1 and self.eta[-1] < 0))

    @property
    def dim(self) -> int:
        return self.gamma.shape[0]

    @property
    def is_lorentzian(self) -> bool:
        return self._lorentzian

    def inner(self, x, y) -> float:
        return float(np.sum(self.eta * np.asarray(x) * np.asarray(y)))

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.structure)

    def torsion_defect(self) -> float:
        t = self.gamma - self.gamma.transpose(1, 0, 2) - self.structure
        return float(np.max(np.abs(t)))

    def compatibility_defect(self) -> float:
        # <nabla_i E_j, E_k> + <E_j, nabla_i E_k>
        lowered = self.gamma * self.eta[None, None, :]
        return float(np.max(np.abs(lowered + lowered.transpose(0, 2, 1))))


def koszul_coefficients(algebra: LieAlgebra, frame: PseudoOrthonormalFrame) -> ConnectionCoefficients:
    """Solve 2<nabla_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y> on frame vectors.

    In a pseudo-orthonormal frame ``<E_k, E_k> = eta_k = +-1``, so each
    coefficient is the right-hand side divided by ``2 eta_k``.
    """
    if algebra.dim != frame.dim:
        raise DimensionError("algebra and frame dimensions differ")
    c = algebra.in_basis(frame.P).structure
    eta = frame.eta
    # lowered[i, j, k] = <[E_i, E_j], E_k>
    lowered = c * eta[None, None, :]
    # transpose(2, 0, 1)[i, j, k] == lowered[j, k, i]; transpose(1, 2, 0)[i, j, k] == lowered[k, i, j]
    rhs = lowered - lowered.transpose(2, 0, 1) + lowered.transpose(1, 2, 0)
    gamma = rhs / (2.0 * eta[None, None, :])
    return ConnectionCoefficients(gamma, c, eta)


def covariant_quadratic(gamma: ConnectionCoefficients, x) -> np.ndarray:
    """``nabla_X X`` for the left-invariant field with frame coordinates ``x``."""
    x = _as_vector(x, gamma.dim)
    n = len(x)
    # contract i, then j; np.dot beats einsum by ~5x at this size
    return np.dot(x, np.dot(x, gamma._flat).reshape(n, n))


def covariant_quadratic_jacobian(gamma: ConnectionCoefficients, x) -> np.ndarray:
    """``D[k, i] = d y^k / d x^i`` for ``y = covariant_quadratic(x)``."""
    g = gamma.gamma
    return np.einsum("j,ijk->ki", x, g) + np.einsum("j,jik->ki", x, g)


def covariant_quadratic_batch(gamma: ConnectionCoefficients, xs: np.ndarray) -> np.ndarray:
    return np.einsum("pi,pj,ijk->pk", xs, xs, gamma.gamma)

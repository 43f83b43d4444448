"""Lie algebras given by structure constants, invariant scalar products and
pseudo-orthonormal frames.

Conventions: ``C[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``
(0-based internally). A frame ``P`` stores the new basis vectors as columns,
``f_j = sum_i P[i, j] e_i``, so coordinates transform as ``x_old = P @ x_new``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from homgeo.errors import DimensionError, MetricError, SignatureError, ValidationError

TOL_ALG = 1e-12
TOL_FRAME = 1e-10
NULL_PIVOT = 1e-10


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


class LieAlgebra:
    """Finite-dimensional real Lie algebra stored as a dense structure-constant array.

    Antisymmetry in the first two indices is enforced here: defects above
    ``TOL_ALG`` are rejected, smaller ones are symmetrized away. The Jacobi
    identity is *not* checked at construction; use :func:`validate`.
    """

    def __init__(self, structure, labels: Optional[Sequence[str]] = None):
        c = np.asarray(structure, dtype=float)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] < 1:
            raise DimensionError(f"structure constants must have shape (n, n, n), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValidationError("structure constants must be finite")
        defect = float(np.max(np.abs(c + c.transpose(1, 0, 2))))
        if defect > TOL_ALG:
            raise ValidationError(f"structure constants are not antisymmetric (defect {defect:.3e})")
        self.structure = _readonly(0.5 * (c - c.transpose(1, 0, 2)))
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != c.shape[0]:
                raise DimensionError("need one label per basis vector")
        self.labels = labels

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    @classmethod
    def abelian(cls, n: int) -> "LieAlgebra":
        return cls(np.zeros((n, n, n)))

    @classmethod
    def from_brackets(cls, n: int, brackets: dict, labels=None) -> "LieAlgebra":
        """Build from ``{(i, j): {k: value}}`` with 0-based indices; the (j, i) entries are completed."""
        c = np.zeros((n, n, n))
        for (i, j), coeffs in brackets.items():
            for k, value in coeffs.items():
                c[i, j, k] += value
                c[j, i, k] -= value
        return cls(c, labels)

    def in_basis(self, P: np.ndarray) -> "LieAlgebra":
        """Structure constants with respect to the basis given by the columns of ``P``."""
        P = np.asarray(P, dtype=float)
        Pinv = np.linalg.inv(P)
        c = np.einsum("ia,jb,ijk,ck->abc", P, P, self.structure, Pinv)
        # re-antisymmetrize: the transform is exact up to rounding
        return LieAlgebra(0.5 * (c - c.transpose(1, 0, 2)), None)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return np.array_equal(self.structure, other.structure)

    def __hash__(self):
        return hash(self.structure.tobytes())

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim})"


class MetricTensor:
    """Nondegenerate symmetric bilinear form on the algebra."""

    def __init__(self, g):
        g = np.asarray(g, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise DimensionError(f"metric must be square, got shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise MetricError("metric entries must be finite")
        if not np.array_equal(g, g.T):
            raise MetricError("metric is not symmetric")
        if abs(np.linalg.det(g)) <= TOL_ALG:
            raise MetricError("metric is degenerate")
        self.g = _readonly(g)

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def inner(self, x, y) -> float:
        return float(np.asarray(x) @ self.g @ np.asarray(y))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MetricTensor):
            return NotImplemented
        return np.array_equal(self.g, other.g)

    def __hash__(self):
        return hash(self.g.tobytes())

    def __repr__(self):
        return f"MetricTensor({self.g.tolist()})"


@dataclass(frozen=True, eq=False)
class PseudoOrthonormalFrame:
    """Change of basis ``P`` with ``P.T @ g @ P = diag(+1 * p, -1 * q)``."""

    P: np.ndarray
    signature: tuple

    def __post_init__(self):
        object.__setattr__(self, "P", _readonly(self.P))
        object.__setattr__(self, "signature", tuple(int(s) for s in self.signature))

    @property
    def dim(self) -> int:
        return self.P.shape[0]

    @property
    def eta(self) -> np.ndarray:
        """Diagonal of the frame metric."""
        p, q = self.signature
        return np.array([1.0] * p + [-1.0] * q)

    @property
    def is_lorentzian(self) -> bool:
        return self.signature[1] == 1

    def to_frame(self, x) -> np.ndarray:
        return np.linalg.solve(self.P, np.asarray(x, dtype=float))

    def from_frame(self, x) -> np.ndarray:
        return self.P @ np.asarray(x, dtype=float)


@dataclass
class ValidationReport:
    antisymmetry_defect: float
    jacobi_defect: float
    worst_jacobi: Optional[tuple]  # 1-based (i, j, k, m)
    tol: float = TOL_ALG

    @property
    def passed(self) -> bool:
        return self.antisymmetry_defect < self.tol and self.jacobi_defect < self.tol


def _as_vector(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DimensionError(f"expected a vector of length {n}, got shape {x.shape}")
    return x


def bracket(algebra: LieAlgebra, x, y) -> np.ndarray:
    n = algebra.dim
    return np.einsum("i,j,ijk->k", _as_vector(x, n), _as_vector(y, n), algebra.structure)


def jacobi_tensor(structure: np.ndarray) -> np.ndarray:
    """``J[i,j,k,m]``: component m of the cyclic sum [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]."""
    c = structure
    return (
        np.einsum("ijl,lkm->ijkm", c, c)
        + np.einsum("jkl,lim->ijkm", c, c)
        + np.einsum("kil,ljm->ijkm", c, c)
    )


def validate(algebra: LieAlgebra) -> ValidationReport:
    c = algebra.structure
    anti = float(np.max(np.abs(c + c.transpose(1, 0, 2))))
    jac = np.abs(jacobi_tensor(c))
    worst = None
    jmax = float(jac.max())
    if jmax > 0:
        worst = tuple(int(i) + 1 for i in np.unravel_index(int(np.argmax(jac)), jac.shape))
    return ValidationReport(anti, jmax, worst)


def signature(metric: MetricTensor) -> tuple:
    """(number of positive, number of negative) eigenvalues."""
    ev = np.linalg.eigvalsh(metric.g)
    if np.any(np.abs(ev) <= TOL_ALG * max(1.0, float(np.abs(ev).max()))):
        raise MetricError("metric is degenerate")
    p = int(np.sum(ev > 0))
    return p, metric.dim - p


def pseudo_orthonormalize(metric: MetricTensor, lorentzian: bool = True) -> PseudoOrthonormalFrame:
    """Signed Gram-Schmidt on the standard basis.

    Vectors are processed in index order. If the next vector becomes null
    after projection, another pool vector with non-null norm is used instead;
    if every remaining vector is null, a pair with nonzero mutual product is
    combined (``<v+w, v+w> = 2<v, w>``). Positive vectors are placed first.
    """
    g = metric.g
    n = metric.dim
    p_count, q_count = signature(metric)
    if lorentzian and q_count != 1:
        raise SignatureError(f"Lorentzian frame requested but signature is {(p_count, q_count)}")

    def ip(a, b):
        return float(a @ g @ b)

    pool = [np.eye(n)[i] for i in range(n)]
    accepted: list = []
    norms: list = []

    def project(v):
        for f, s in zip(accepted, norms):
            v = v - ip(v, f) / s * f
        return v

    while len(accepted) < n:
        projected = [project(v) for v in pool]
        pick = None
        for idx, v in enumerate(projected):
            if abs(ip(v, v)) >= NULL_PIVOT:
                pick = idx
                break
        if pick is not None:
            v = projected[pick]
            pool.pop(pick)
        else:
            v = None
            for a in range(len(projected)):
                for b in range(a + 1, len(projected)):
                    if abs(ip(projected[a], projected[b])) >= NULL_PIVOT:
                        v = projected[a] + projected[b]
                        pool.pop(a)
                        break
                if v is not None:
                    break
            if v is None:
                raise MetricError("metric is degenerate (Gram-Schmidt breakdown)")
        s = ip(v, v)
        v = v / np.sqrt(abs(s))
        accepted.append(v)
        norms.append(float(np.sign(s)))

    plus = [v for v, s in zip(accepted, norms) if s > 0]
    minus = [v for v, s in zip(accepted, norms) if s < 0]
    P = np.column_stack(plus + minus)
    frame = PseudoOrthonormalFrame(P, (len(plus), len(minus)))
    defect = np.max(np.abs(P.T @ g @ P - np.diag(frame.eta)))
    if defect >= TOL_FRAME:
        raise MetricError(f"orthonormalization lost accuracy (defect {defect:.3e})")
    return frame

"""Geodesic vectors of a left-invariant metric, null and non-null.

Two characterizations are computed side by side:

* connection form: ``nabla_x x = k x`` (``residual_nabla``);
* bracket form: ``<[x, z], x> = k_L <x, z>`` for every basis vector ``z``
  (``residual_lemma``).

The Koszul formula gives ``<nabla_x x, z> = -<[x, z], x>``, so the two
constants are related by ``k_L = -k``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from homgeo.algebra import TOL_ALG, LieAlgebra, MetricTensor
from homgeo.config import SolverConfig
from homgeo.connection import (
    ConnectionCoefficients,
    covariant_quadratic,
    covariant_quadratic_batch,
    covariant_quadratic_jacobian,
)
from homgeo.errors import DimensionError, ReductiveError, ValidationError
from homgeo.nullcone import sphere_scan

log = logging.getLogger(__name__)

TOL_CAUSAL = 1e-9

SPACELIKE, TIMELIKE, NULL = "spacelike", "timelike", "null"


@dataclass
class GeodesicCandidate:
    x: np.ndarray
    k: float
    causal: str
    residual_nabla: float
    residual_lemma: float
    accepted: bool = True
    flags: list = field(default_factory=list)


@dataclass
class GeodesicSearch:
    candidates: list
    plateau: bool
    rejected: list = field(default_factory=list)


def causal_character(gamma: ConnectionCoefficients, x) -> str:
    x = np.asarray(x, dtype=float)
    q = gamma.inner(x, x) / float(x @ x)
    if abs(q) < TOL_CAUSAL:
        return NULL
    return SPACELIKE if q > 0 else TIMELIKE


def lemma_residual(gamma: ConnectionCoefficients, x, k_lemma: float) -> float:
    """max over frame vectors z of |<[x, z], x> - k_lemma <x, z>|."""
    x = np.asarray(x, dtype=float)
    ad = np.einsum("i,izk->zk", x, gamma.structure)  # row z: [x, E_z]
    lhs = ad @ (gamma.eta * x)
    rhs = k_lemma * gamma.eta * x
    return float(np.max(np.abs(lhs - rhs)))


def classify_candidate(
    gamma: ConnectionCoefficients, x, k: float, tol_zero: float = 1e-9
) -> GeodesicCandidate:
    x = np.asarray(x, dtype=float)
    if x.shape != (gamma.dim,):
        raise DimensionError(f"expected a vector of length {gamma.dim}")
    if not np.any(x):
        raise ValidationError("geodesic candidates must be nonzero")
    causal = causal_character(gamma, x)
    y = covariant_quadratic(gamma, x)
    cand = GeodesicCandidate(
        x=x,
        k=float(k),
        causal=causal,
        residual_nabla=float(np.linalg.norm(y - k * x)),
        residual_lemma=lemma_residual(gamma, x, -k),
    )
    if cand.residual_nabla >= tol_zero:
        cand.accepted = False
        cand.flags.append("residual-above-tolerance")
    if abs(k) >= tol_zero and causal != NULL:
        # a nonzero constant is only possible along null curves
        cand.accepted = False
        cand.flags.append("nonzero-k-requires-null")
    return cand


def canonical_sign(x: np.ndarray, k: float, eps: float = 1e-8) -> tuple:
    """Flip so that the first non-negligible coordinate is positive (k flips with x)."""
    for c in x:
        if abs(c) > eps:
            return (x, k) if c > 0 else (-x, -k)
    return x, k


def _parallel_field(gamma: ConnectionCoefficients):
    n = gamma.dim

    def f(x):
        y = covariant_quadratic(gamma, x)
        return y - (y @ x) * x

    def jac(x):
        y = covariant_quadratic(gamma, x)
        D = covariant_quadratic_jacobian(gamma, x)
        return D - np.outer(x, D.T @ x + y) - (y @ x) * np.eye(n)

    def defect(points):
        ys = covariant_quadratic_batch(gamma, points)
        proj = np.einsum("pk,pk->p", ys, points)[:, None] * points
        return np.linalg.norm(ys - proj, axis=1)

    return f, jac, defect


def geodesic_search(gamma: ConnectionCoefficients, config: SolverConfig) -> GeodesicSearch:
    """Scan the Euclidean unit sphere of frame directions for ``nabla_x x || x``."""
    f, jac, defect = _parallel_field(gamma)
    merged, _, plateau, _, _ = sphere_scan(f, jac, defect, gamma.dim - 1, config, antipodal=True)
    tol = config.tol_zero
    out, rejected = [], []
    for point, _, _ in merged:
        x = point / np.linalg.norm(point)
        x[np.abs(x) < 1e-15] = 0.0
        y = covariant_quadratic(gamma, x)
        if causal_character(gamma, x) == NULL:
            k = float(y @ x)
        else:
            k = 0.0
        x, k = canonical_sign(x, k)
        k += 0.0  # no negative zero in reports
        cand = classify_candidate(gamma, x, k, tol)
        (out if cand.accepted else rejected).append(cand)
    out.sort(key=lambda c: tuple(-c.x))
    if not out:
        log.warning("no geodesic vector found; every homogeneous space should admit one")
    return GeodesicSearch(out, plateau, rejected)


def find_geodesic_vectors(gamma: ConnectionCoefficients, config: SolverConfig) -> list:
    return geodesic_search(gamma, config).candidates


class ReductiveDecomposition:
    """Splitting g = m + h along basis indices (0-based) with an inner product on m."""

    def __init__(
        self,
        full_algebra: LieAlgebra,
        h_indices: Sequence[int],
        metric_m: Optional[MetricTensor] = None,
        m_indices: Optional[Sequence[int]] = None,
    ):
        n = full_algebra.dim
        h = sorted(int(i) for i in h_indices)
        if m_indices is None:
            m_indices = [i for i in range(n) if i not in h]
        m = sorted(int(i) for i in m_indices)
        if sorted(h + m) != list(range(n)):
            raise ReductiveError("h and m indices must partition the basis")
        if not m:
            raise ReductiveError("m must be nonzero")
        if metric_m is None:
            raise ReductiveError("an inner product on m is required")
        if metric_m.dim != len(m):
            raise ReductiveError("metric on m has the wrong size")
        c = full_algebra.structure
        if h:
            closure = float(np.max(np.abs(c[np.ix_(h, h, m)])))
            if closure > TOL_ALG:
                raise ReductiveError(f"h is not a subalgebra (defect {closure:.3e})")
            invariance = float(np.max(np.abs(c[np.ix_(h, m, h)])))
            if invariance > TOL_ALG:
                raise ReductiveError(f"[h, m] is not contained in m (defect {invariance:.3e})")
        self.full_algebra = full_algebra
        self.h_indices = tuple(h)
        self.m_indices = tuple(m)
        self.metric_m = metric_m


def reductive_residual(dec: ReductiveDecomposition, x, k: float) -> float:
    """max over basis vectors Z of m of |<[x, Z]_m, x_m> - k <x_m, Z>|."""
    c = dec.full_algebra.structure
    x = np.asarray(x, dtype=float)
    if x.shape != (dec.full_algebra.dim,):
        raise DimensionError("x must live in the full algebra")
    m = list(dec.m_indices)
    g = dec.metric_m.g
    xm = x[m]
    # ad_m[z, a] = component a (in m) of [x, e_{m[z]}]
    ad_m = np.einsum("i,izk->zk", x, c[:, m, :])[:, m]
    lhs = ad_m @ (g @ xm)
    rhs = k * (g @ xm)
    return float(np.max(np.abs(lhs - rhs)))

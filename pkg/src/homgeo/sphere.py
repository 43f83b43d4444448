"""Sampling and zero refinement for tangent vector fields on spheres S^m in R^(m+1).

Hyperspherical convention (recursive): a point of S^m with angles
``(theta_1, ..., theta_{m-1}, phi)`` is ``(sin(theta_1) * p', cos(theta_1))``
where ``p'`` is the point of S^(m-1) for the remaining angles, and the
circle is ``(sin(phi), cos(phi))``. Polar angles are sampled on a closed
grid in [0, pi], the azimuth on an open periodic grid in [0, 2 pi).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class SphereGrid:
    points: np.ndarray  # (P, m+1), unit vectors, in grid (C) order
    shape: tuple  # index shape; last axis periodic when m >= 1
    covering_radius: float  # upper bound on geodesic distance to the nearest sample

    @property
    def sphere_dim(self) -> int:
        return self.points.shape[1] - 1


def sphere_points(angles: np.ndarray) -> np.ndarray:
    """Map ``(..., m)`` angle arrays to ``(..., m+1)`` points of S^m."""
    angles = np.asarray(angles, dtype=float)
    m = angles.shape[-1]
    if m == 1:
        phi = angles[..., 0]
        return np.stack([np.sin(phi), np.cos(phi)], axis=-1)
    theta = angles[..., 0]
    rest = sphere_points(angles[..., 1:])
    return np.concatenate([np.sin(theta)[..., None] * rest, np.cos(theta)[..., None]], axis=-1)


def sphere_grid(m: int, resolution: int) -> SphereGrid:
    if m == 0:
        return SphereGrid(np.array([[1.0], [-1.0]]), (2,), 0.0)
    phi = 2.0 * np.pi * np.arange(resolution) / resolution
    if m == 1:
        points = sphere_points(phi[:, None])
        points[np.abs(points) < 1e-15] = 0.0
        return SphereGrid(points, (resolution,), np.pi / resolution)
    theta = np.linspace(0.0, np.pi, resolution)
    axes = [theta] * (m - 1) + [phi]
    mesh = np.meshgrid(*axes, indexing="ij")
    angles = np.stack([a.ravel() for a in mesh], axis=-1)
    # round-metric line element is bounded by the flat one in angle space
    half_steps = [np.pi / (2 * (resolution - 1))] * (m - 1) + [np.pi / resolution]
    radius = float(np.sqrt(np.sum(np.square(half_steps))))
    points = sphere_points(angles)
    # sin(pi) and cos(pi/2) round to ~1e-16; keep exact axes exact
    points[np.abs(points) < 1e-15] = 0.0
    return SphereGrid(points, tuple(len(a) for a in axes), radius)


def grid_neighbors_min(values: np.ndarray, shape: tuple, periodic_last: bool) -> np.ndarray:
    """Elementwise minimum over the +-1 index neighbours along every axis."""
    v = values.reshape(shape)
    best = np.full(shape, np.inf)
    for axis in range(len(shape)):
        if shape[axis] < 2:
            continue
        periodic = periodic_last and axis == len(shape) - 1
        for shift in (1, -1):
            rolled = np.roll(v, shift, axis=axis)
            if not periodic:
                edge = [slice(None)] * len(shape)
                edge[axis] = 0 if shift == 1 else -1
                rolled = rolled.copy()
                rolled[tuple(edge)] = np.inf
            best = np.minimum(best, rolled)
    return best.ravel()


def local_minima(values: np.ndarray, grid: SphereGrid) -> np.ndarray:
    """Indices (grid order) of samples no larger than any index neighbour."""
    if grid.sphere_dim == 0:
        return np.arange(len(values))
    nb = grid_neighbors_min(values, grid.shape, periodic_last=True)
    return np.flatnonzero(values <= nb)


def tangent_basis(p: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the tangent space of the sphere at ``p``."""
    # complete p to an orthonormal basis; Householder QR is stable for any p
    q, _ = np.linalg.qr(np.column_stack([p, np.eye(len(p))]))
    return q[:, 1:len(p)]


def stereographic(p: np.ndarray, basis: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse stereographic projection from ``-p``; ``u = 0`` maps to ``p``."""
    w = basis @ u
    r2 = float(u @ u)
    q = ((1.0 - r2) * p + 2.0 * w) / (1.0 + r2)
    return q / np.linalg.norm(q)


@dataclass
class RefineResult:
    point: np.ndarray
    residual: float
    iterations: int
    converged: bool


def refine_zero(
    field: Callable[[np.ndarray], np.ndarray],
    jacobian: Callable[[np.ndarray], np.ndarray],
    p0: np.ndarray,
    tol: float,
    max_iter: int = 50,
) -> RefineResult:
    """Damped Newton for a tangent field on S^m.

    ``field(p)`` returns the ambient vector field (tangent at ``p``) and
    ``jacobian(p)`` its ambient derivative. Each step works in the
    stereographic chart centred at the current iterate, where the chart
    differential at the origin is ``2 * basis``.
    """
    p = np.asarray(p0, dtype=float)
    p = p / np.linalg.norm(p)
    f = field(p)
    res = float(np.linalg.norm(f))
    it = 0
    target = min(tol * 1e-3, 1e-14)
    if len(p) == 1:
        return RefineResult(p, res, 0, res < tol)
    while it < max_iter and res > target:
        it += 1
        B = tangent_basis(p)
        F = B.T @ f
        J = B.T @ jacobian(p) @ (2.0 * B)
        step = -np.linalg.lstsq(J, F, rcond=None)[0]
        if not np.all(np.isfinite(step)):
            break
        alpha = 1.0
        improved = False
        while alpha > 1e-6:
            q = stereographic(p, B, alpha * step)
            fq = field(q)
            rq = float(np.linalg.norm(fq))
            if rq < res:
                p, f, res = q, fq, rq
                improved = True
                break
            alpha *= 0.5
        if not improved:
            break
    return RefineResult(p, res, it, res < tol)


def is_degenerate_zero(jacobian: Callable, p: np.ndarray, rel: float = 1e-7) -> bool:
    """True if the field's derivative at ``p``, restricted to the tangent space, is rank deficient."""
    if len(p) == 1:
        return False
    B = tangent_basis(p)
    sv = np.linalg.svd(B.T @ jacobian(p) @ B, compute_uv=False)
    return bool(sv[-1] <= rel * max(1.0, float(sv[0])))


def angular_distance(a: np.ndarray, b: np.ndarray) -> float:
    c = float(np.clip(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)), -1.0, 1.0))
    # arccos is ill-conditioned near 1; use the chord instead
    chord = float(np.linalg.norm(a / np.linalg.norm(a) - b / np.linalg.norm(b)))
    return 2.0 * np.arcsin(min(1.0, chord / 2.0)) if c > 0 else float(np.arccos(c))

"""Null directions of a Lorentzian frame and the tangent field they carry.

A null direction is written ``x = (x~, 1)`` with ``x~`` on the unit sphere
S^(n-2). With ``y = nabla_x x`` the vector ``t = y - y^n x`` has vanishing
last component, and ``x~ -> t~`` (its first n-1 components) is a tangent
field on S^(n-2). Its zeros are exactly the null geodesic vectors, with
constant ``k = y^n``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from homgeo.algebra import _readonly
from homgeo.config import SolverConfig
from homgeo.connection import (
    ConnectionCoefficients,
    covariant_quadratic,
    covariant_quadratic_batch,
    covariant_quadratic_jacobian,
)
from homgeo.errors import DimensionError, SignatureError, UndefinedWindingError
from homgeo.sphere import (
    is_degenerate_zero,
    local_minima,
    refine_zero,
    sphere_grid,
    sphere_points,
)

log = logging.getLogger(__name__)

MERGE_RADIUS = 1e-6
# Lipschitz constant of x~ -> t~ on the lift {(x~, 1) : |x~| <= 1} is at most
# (2*sqrt(2)*n**1.5 + 6*n) * max|gamma| <= (2*sqrt(2) + 6) * n**2 * max|gamma|.
LIPSCHITZ_C = 9.0


@dataclass(frozen=True, eq=False)
class NullDirection:
    tilde_x: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.tilde_x, dtype=float)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValueError("null direction needs a nonzero spatial part")
        object.__setattr__(self, "tilde_x", _readonly(v / nrm))
        object.__setattr__(self, "_x", _readonly(np.append(v / nrm, 1.0)))

    @classmethod
    def from_angle(cls, phi: float) -> "NullDirection":
        """Circle case, ``x~ = (sin phi, cos phi)``."""
        return cls(np.array([math.sin(phi), math.cos(phi)]))

    @property
    def x(self) -> np.ndarray:
        return self._x


@dataclass(frozen=True, eq=False)
class TangentSample:
    t_full: np.ndarray
    y: np.ndarray

    @property
    def tilde_t(self) -> np.ndarray:
        return self.t_full[:-1]

    @property
    def k(self) -> float:
        return float(self.y[-1])


@dataclass
class NullZero:
    direction: NullDirection
    residual: float
    k: float
    grid_index: int


@dataclass
class NullScan:
    zeros: list
    grid_min: float
    plateau: bool
    truncated: bool


@dataclass
class ZeroCertificate:
    kind: str  # zero-found | nonexistence-certified | inconclusive
    witness: Optional[NullDirection]
    min_norm: float
    grid_step: float
    lipschitz_bound: float
    witness_residual: Optional[float] = None
    witness_k: Optional[float] = None


def _require_lorentzian(gamma: ConnectionCoefficients) -> None:
    if not gamma.is_lorentzian:
        raise SignatureError("null-cone machinery needs a Lorentzian frame with the timelike vector last")


def t_field(gamma: ConnectionCoefficients, direction: NullDirection) -> TangentSample:
    _require_lorentzian(gamma)
    if len(direction.tilde_x) != gamma.dim - 1:
        raise DimensionError("null direction has the wrong dimension")
    x = direction.x
    y = covariant_quadratic(gamma, x)
    t = y - y[-1] * x
    t[-1] = 0.0
    return TangentSample(t, y)


def t_field_batch(gamma: ConnectionCoefficients, tilde_xs: np.ndarray) -> np.ndarray:
    xs = np.column_stack([tilde_xs, np.ones(len(tilde_xs))])
    ys = covariant_quadratic_batch(gamma, xs)
    return ys[:, :-1] - ys[:, -1:] * tilde_xs


def _tilde_field(gamma: ConnectionCoefficients) -> tuple:
    """Ambient field and Jacobian of x~ -> t~ for Newton refinement."""
    m1 = gamma.dim - 1

    def field(xt):
        x = np.append(xt, 1.0)
        y = covariant_quadratic(gamma, x)
        return y[:-1] - y[-1] * xt

    def jac(xt):
        x = np.append(xt, 1.0)
        y = covariant_quadratic(gamma, x)
        D = covariant_quadratic_jacobian(gamma, x)[:, :m1]
        return D[:-1] - np.outer(xt, D[-1]) - y[-1] * np.eye(m1)

    return field, jac


def lipschitz_bound(gamma: ConnectionCoefficients) -> float:
    n = gamma.dim
    return LIPSCHITZ_C * n * n * float(np.max(np.abs(gamma.gamma)))


def _merge(found: list, radius: float, antipodal: bool = False) -> list:
    """Greedy merge in arrival order; a merged cluster keeps the smallest residual."""
    reps: list = []
    units = np.zeros((0, len(found[0][0]) if found else 0))
    # chord length equivalent of the angular radius
    chord = 2.0 * np.sin(radius / 2.0)
    for item in found:
        v = item[0] / np.linalg.norm(item[0])
        d = np.linalg.norm(units - v, axis=1)
        if antipodal:
            d = np.minimum(d, np.linalg.norm(units + v, axis=1))
        hits = np.flatnonzero(d < chord)
        if len(hits) == 0:
            reps.append(item)
            units = np.vstack([units, v])
        elif item[1] < reps[hits[0]][1]:
            reps[hits[0]] = item
            units[hits[0]] = v
    return reps


def _distinct_zero_neighbors(points, zero_mask, shape) -> bool:
    """True if some zero sample has a grid neighbour that is a different zero."""
    pts = points.reshape(shape + (points.shape[1],))
    zm = zero_mask.reshape(shape)
    for axis in range(len(shape)):
        if shape[axis] < 2:
            continue
        nb_pts = np.roll(pts, 1, axis=axis)
        nb_zero = np.roll(zm, 1, axis=axis)
        if axis != len(shape) - 1:
            edge = [slice(None)] * len(shape)
            edge[axis] = 0
            nb_zero = nb_zero.copy()
            nb_zero[tuple(edge)] = False
        apart = np.linalg.norm(pts - nb_pts, axis=-1) > MERGE_RADIUS
        if np.any(zm & nb_zero & apart):
            return True
    return False


def sphere_scan(field, jac, values_fn, m, config: SolverConfig, antipodal=False, lipschitz=None) -> tuple:
    """Grid, local minima, Newton, merge. Returns (merged, grid_min, plateau, truncated, grid).

    With a Lipschitz bound for ``values_fn``, refinement is skipped when the
    grid minimum already rules out any zero.
    """
    grid = sphere_grid(m, config.resolution(m))
    values = values_fn(grid.points)
    if lipschitz is not None and values.min() > lipschitz * grid.covering_radius:
        return [], float(values.min()), False, False, grid
    seeds = local_minima(values, grid)
    tol = config.tol_zero
    if len(seeds) > config.seed_limit:
        tied = seeds[values[seeds] < tol * 1e-3]
        if len(tied) >= config.seed_limit:
            # zero plateau: spread representatives over the grid
            seeds = tied[np.linspace(0, len(tied) - 1, config.seed_limit).astype(int)]
        else:
            keep = np.argsort(values[seeds], kind="stable")[: config.seed_limit]
            seeds = np.sort(seeds[keep])
    zero_mask = values < tol
    plateau = bool(m > 0 and zero_mask.sum() > 1) and _distinct_zero_neighbors(grid.points, zero_mask, grid.shape)
    if plateau and m > 1:
        # zero sets of positive dimension can meet along valleys with no grid
        # minimum; Newton from spread seeds lands on every nearby component
        spread = np.linspace(0, len(values) - 1, config.seed_limit).astype(int)
        seeds = np.concatenate([seeds, spread[values[spread] >= tol * 1e-3]])
    seeds = np.unique(seeds)
    found = []
    for idx in seeds:
        p = grid.points[idx]
        if values[idx] < tol * 1e-3:
            point, res = p, float(values[idx])
        else:
            r = refine_zero(field, jac, p, tol, config.newton_max_iter)
            if not r.converged:
                continue
            point, res = r.point, r.residual
        found.append((point, res, int(idx)))
    merged = _merge(found, MERGE_RADIUS, antipodal=antipodal)
    if not plateau and len(merged) > 1:
        # non-isolated zeros make the derivative singular along the zero set
        plateau = sum(is_degenerate_zero(jac, it[0]) for it in merged) >= 2
    merged.sort(key=lambda it: (it[2], it[1]))
    truncated = len(merged) > config.max_candidates
    if truncated:
        keep = np.linspace(0, len(merged) - 1, config.max_candidates).astype(int)
        merged = [merged[i] for i in keep]
        plateau = True
    return merged, float(values.min()), plateau, truncated, grid


def null_scan(gamma: ConnectionCoefficients, config: SolverConfig) -> NullScan:
    _require_lorentzian(gamma)
    field, jac = _tilde_field(gamma)

    def norms(points):
        return np.linalg.norm(t_field_batch(gamma, points), axis=1)

    merged, gmin, plateau, truncated, _ = sphere_scan(
        field, jac, norms, gamma.dim - 2, config, lipschitz=lipschitz_bound(gamma)
    )
    zeros = []
    for point, res, idx in merged:
        d = NullDirection(point)
        zeros.append(NullZero(d, res, t_field(gamma, d).k, idx))
    return NullScan(zeros, gmin, plateau, truncated)


def scan_and_refine(gamma: ConnectionCoefficients, config: SolverConfig) -> list:
    """Null geodesic directions: refined zeros of t~ below ``config.tol_zero``."""
    return null_scan(gamma, config).zeros


def certify_nonexistence(gamma: ConnectionCoefficients, config: SolverConfig) -> ZeroCertificate:
    """Covering argument: if ``min |t~| > L * h`` on a grid of covering radius h, t~ has no zero.

    ``L`` bounds the Lipschitz constant of t~ with respect to chordal
    distance, which is dominated by the geodesic distance used for ``h``.
    """
    _require_lorentzian(gamma)
    m = gamma.dim - 2
    grid = sphere_grid(m, config.resolution(m))
    min_norm = float(np.linalg.norm(t_field_batch(gamma, grid.points), axis=1).min())
    L = lipschitz_bound(gamma)
    h = grid.covering_radius
    if min_norm > L * h:
        return ZeroCertificate("nonexistence-certified", None, min_norm, h, L)
    zeros = scan_and_refine(gamma, config)
    if zeros:
        best = min(zeros, key=lambda z: z.residual)
        return ZeroCertificate("zero-found", best.direction, min_norm, h, L, best.residual, best.k)
    return ZeroCertificate("inconclusive", None, min_norm, h, L)


def winding_number_of_field(
    field: Callable[[np.ndarray], np.ndarray], n_grid: int = 720, max_grid: int = 1 << 20
) -> int:
    """Degree of a nonvanishing planar field sampled along phi in [0, 2 pi).

    The grid is doubled until consecutive angle increments stay below pi/2.
    """
    n = n_grid
    while True:
        phi = 2.0 * np.pi * np.arange(n) / n
        v = np.asarray(field(phi), dtype=float)
        if v.shape != (n, 2):
            raise DimensionError("winding field must return an (N, 2) array")
        norms = np.linalg.norm(v, axis=1)
        if np.any(norms < 1e-12):
            raise UndefinedWindingError("field vanishes on the sample grid")
        ang = np.arctan2(v[:, 1], v[:, 0])
        inc = np.diff(np.append(ang, ang[0]))
        inc = (inc + np.pi) % (2.0 * np.pi) - np.pi
        if np.max(np.abs(inc)) < np.pi / 2:
            return int(round(inc.sum() / (2.0 * np.pi)))
        if n >= max_grid:
            raise UndefinedWindingError("could not resolve the field's angle increments")
        n *= 2


def winding_number(gamma: ConnectionCoefficients, config: SolverConfig) -> int:
    """Winding of t~ around the circle of null directions (n = 3 only)."""
    _require_lorentzian(gamma)
    if gamma.dim != 3:
        raise DimensionError("winding number is defined for n = 3 only")
    return winding_number_of_field(
        lambda phi: t_field_batch(gamma, sphere_points(phi[:, None])), config.resolution(1)
    )

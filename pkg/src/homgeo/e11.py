"""Coordinate model of E(1,1) with its left-invariant Lorentzian metric.

The group is the set of matrices ``[[e^-w, 0, u], [0, e^w, v], [0, 0, 1]]``,
identified with R^3 in the coordinates (u, v, w); the identity is the
origin. Left-invariant fields are ``U = e^-w d_u``, ``V = e^w d_v``,
``W = d_w`` and the pseudo-orthonormal frame is

    E1 = U - V,   E2 = -W,   E3 = (U + V) / 2   (E3 timelike).

Everything here works in the chart, independently of the structure-constant
route, so the two can be checked against each other.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from homgeo.errors import DivergenceError, ValidationError

CHRISTOFFEL_FD_STEP = 1e-5
CHRISTOFFEL_FD_TOL = 1e-6
VERIFY_TOL = 1e-6
K_ZERO = 1e-12


class ChartPoint(NamedTuple):
    u: float
    v: float
    w: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


IDENTITY = ChartPoint(0.0, 0.0, 0.0)

# frame coordinates (x1, x2, x3) -> (a, b, c) with X = aU + bV + cW
FRAME_TO_UVW = np.array([[1.0, 0.0, 0.5], [-1.0, 0.0, 0.5], [0.0, -1.0, 0.0]])
UVW_TO_FRAME = np.array([[0.5, -0.5, 0.0], [0.0, 0.0, -1.0], [1.0, 1.0, 0.0]])


@dataclass(frozen=True)
class AlgebraElementUVW:
    a: float
    b: float
    c: float

    @classmethod
    def from_frame(cls, x) -> "AlgebraElementUVW":
        return cls(*(float(v) for v in FRAME_TO_UVW @ np.asarray(x, dtype=float)))

    def to_frame(self) -> np.ndarray:
        return UVW_TO_FRAME @ self.as_array()

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c])


@dataclass
class CurveSample:
    t: float
    point: ChartPoint
    velocity: np.ndarray
    geodesic_residual: np.ndarray


def coordinate_metric(p) -> np.ndarray:
    w = p[2]
    e2 = np.exp(2.0 * w)
    return np.array(
        [
            [-0.75 * e2, -1.25, 0.0],
            [-1.25, -0.75 / e2, 0.0],
            [0.0, 0.0, 1.0],
        ]
    )


def christoffels(p) -> np.ndarray:
    """``G[..., k, i, j]`` = Gamma^k_ij, symmetric in (i, j); indices 0, 1, 2 = u, v, w.

    ``p`` may carry leading batch axes, ``(..., 3)``.
    """
    w = np.asarray(p, dtype=float)[..., 2]
    e2 = np.exp(2.0 * w)
    G = np.zeros(w.shape + (3, 3, 3))
    G[..., 2, 0, 0] = 0.75 * e2
    G[..., 2, 1, 1] = -0.75 / e2
    G[..., 0, 0, 2] = G[..., 0, 2, 0] = -9.0 / 16.0
    G[..., 1, 0, 2] = G[..., 1, 2, 0] = 15.0 / 16.0 * e2
    G[..., 1, 1, 2] = G[..., 1, 2, 1] = 9.0 / 16.0
    G[..., 0, 1, 2] = G[..., 0, 2, 1] = -15.0 / 16.0 / e2
    return G


def coordinate_metric_and_christoffels(p) -> tuple:
    return coordinate_metric(p), christoffels(p)


def christoffels_fd(p, h: float = CHRISTOFFEL_FD_STEP) -> np.ndarray:
    """Christoffel symbols of :func:`coordinate_metric` by central differences."""
    p = np.asarray(p, dtype=float)
    dg = np.zeros((3, 3, 3))  # dg[l, i, j] = d_l g_ij
    for l in range(3):
        e = np.zeros(3)
        e[l] = h
        dg[l] = (coordinate_metric(p + e) - coordinate_metric(p - e)) / (2.0 * h)
    ginv = np.linalg.inv(coordinate_metric(p))
    # Gamma_{l,ij} = (d_j g_li + d_i g_lj - d_l g_ij) / 2
    lowered = 0.5 * (dg.transpose(1, 2, 0) + dg.transpose(1, 0, 2) - dg)
    return np.einsum("kl,lij->kij", ginv, lowered)


@functools.lru_cache(maxsize=1)
def christoffel_self_check(ws: tuple = (0.0, 0.5, -0.5)) -> float:
    """Max deviation between the closed-form and finite-difference symbols; raises above tolerance."""
    dev = 0.0
    for w in ws:
        p = np.array([0.3, -0.7, w])
        dev = max(dev, float(np.max(np.abs(christoffels(p) - christoffels_fd(p)))))
    if dev > CHRISTOFFEL_FD_TOL:
        raise ValidationError(f"hard-coded Christoffel symbols disagree with the metric ({dev:.3e})")
    return dev


def geodesic_lhs(p, vel, acc) -> np.ndarray:
    """x'' + Gamma(x)(x', x'); broadcasts over leading axes."""
    return np.asarray(acc) + np.einsum("...kij,...i,...j->...k", christoffels(p), vel, vel)


def _orbit_arrays(abc: np.ndarray, t: np.ndarray) -> tuple:
    a, b, c = abc
    t = np.asarray(t, dtype=float)
    if c == 0.0:
        pos = np.stack([a * t, b * t, np.zeros_like(t)], axis=-1)
    else:
        pos = np.stack([-a * np.expm1(-c * t) / c, b * np.expm1(c * t) / c, c * t], axis=-1)
    em, ep = np.exp(-c * t), np.exp(c * t)
    vel = np.stack([a * em, b * ep, np.full_like(t, c)], axis=-1)
    acc = np.stack([-a * c * em, b * c * ep, np.zeros_like(t)], axis=-1)
    return pos, vel, acc


def group_exp_orbit(X: AlgebraElementUVW, t: float) -> ChartPoint:
    """Point ``exp(tX)`` of the one-parameter subgroup generated by X."""
    pos, _, _ = _orbit_arrays(X.as_array(), np.array([t]))
    return ChartPoint(*(float(v) for v in pos[0]))


def orbit(X: AlgebraElementUVW, ts) -> tuple:
    """Positions, velocities and accelerations of ``t -> exp(tX)`` (closed form)."""
    return _orbit_arrays(X.as_array(), np.asarray(ts, dtype=float))


def _derivative_4th(f: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order finite differences along axis 0 (central inside, one-sided at the ends)."""
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
    d[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / (12.0 * h)
    d[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / (12.0 * h)
    return d


def integrate_geodesic(p0, v0, t_end: float, steps: int) -> list:
    """Fixed-step RK4 for x'' + Gamma(x)(x', x') = 0.

    Each sample's residual uses fourth-order finite differences of the
    integrated velocity.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    dt = t_end / steps
    x = np.asarray(p0, dtype=float).copy()
    v = np.asarray(v0, dtype=float).copy()

    def rhs(x, v):
        return v, -np.einsum("kij,i,j->k", christoffels(x), v, v)

    xs = np.empty((steps + 1, 3))
    vs = np.empty((steps + 1, 3))
    xs[0], vs[0] = x, v
    for i in range(steps):
        k1x, k1v = rhs(x, v)
        k2x, k2v = rhs(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v)
        k3x, k3v = rhs(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v)
        k4x, k4v = rhs(x + dt * k3x, v + dt * k3v)
        x = x + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise DivergenceError(f"geodesic integration diverged at step {i + 1}")
        xs[i + 1], vs[i + 1] = x, v
    if steps >= 4:
        acc = _derivative_4th(vs, dt)
    elif steps >= 2:
        acc = np.gradient(vs, dt, axis=0, edge_order=2)
    else:
        acc = np.repeat(((vs[1] - vs[0]) / dt)[None, :], 2, axis=0)
    res = geodesic_lhs(xs, vs, acc)
    return [
        CurveSample(i * dt, ChartPoint(*(float(c) for c in xs[i])), vs[i].copy(), res[i])
        for i in range(steps + 1)
    ]


def energy(p, vel) -> float:
    return float(vel @ coordinate_metric(p) @ vel)


@dataclass
class VerificationReport:
    x_frame: list
    k: float
    branch: str  # affine | reparametrized
    deviation: float
    tol: float
    passed: bool
    details: dict = field(default_factory=dict)


def verify_homogeneous_geodesic(
    x_frame, k: float = 0.0, steps: int = 1000, t_end: float = 1.0, tol: float = VERIFY_TOL
) -> VerificationReport:
    """Check that ``t -> exp(tX)`` is a geodesic, possibly after reparametrization.

    ``k`` is the bracket-form constant: ``<[X, Z], X> = k <X, Z>``. For
    ``k == 0`` the closed-form orbit is compared with an RK4 geodesic with the
    same initial velocity (max chart distance over [0, t_end]). Otherwise
    the orbit is reparametrized by ``s = exp(-k t)`` (log grid in s covering
    t in [0, t_end]) and the geodesic residual of ``s -> orbit(t(s))``,
    divided by the squared chart speed, is reported.
    """
    christoffel_self_check()
    x_frame = np.asarray(x_frame, dtype=float)
    if not np.any(x_frame):
        raise ValidationError("X must be nonzero")
    X = AlgebraElementUVW.from_frame(x_frame)
    ts = np.linspace(0.0, t_end, steps + 1)
    pos, vel, acc = orbit(X, ts)
    if abs(k) < K_ZERO:
        try:
            samples = integrate_geodesic(IDENTITY, vel[0], t_end, steps)
            traj = np.array([s.point for s in samples])
            deviation = float(np.max(np.linalg.norm(traj - pos, axis=1)))
        except DivergenceError:
            deviation = float("inf")
        branch = "affine"
    else:
        s = np.exp(-k * ts)
        dt_ds = -1.0 / (k * s)
        d2t_ds2 = 1.0 / (k * s * s)
        c1 = vel * dt_ds[:, None]
        c2 = acc * (dt_ds**2)[:, None] + vel * d2t_ds2[:, None]
        res = geodesic_lhs(pos, c1, c2)
        speed2 = np.sum(c1 * c1, axis=1)
        deviation = float(np.max(np.linalg.norm(res, axis=1) / speed2))
        branch = "reparametrized"
    return VerificationReport(
        x_frame.tolist(), float(k), branch, deviation, tol, bool(deviation < tol)
    )


def orbit_speed_drift(x_frame, t_end: float = 1.0, samples: int = 100) -> float:
    """max |g(X*, X*) - g(X*, X*)|_e| along the orbit."""
    X = AlgebraElementUVW.from_frame(x_frame)
    pos, vel, _ = orbit(X, np.linspace(0.0, t_end, samples))
    e = np.array([energy(p, v) for p, v in zip(pos, vel)])
    return float(np.max(np.abs(e - e[0])))


def orbit_orthogonality(x_frame, t_end: float = 1.0, samples: int = 100) -> float:
    """max |g(nabla_{X*} X*, X*)| along the orbit."""
    X = AlgebraElementUVW.from_frame(x_frame)
    pos, vel, acc = orbit(X, np.linspace(0.0, t_end, samples))
    lhs = geodesic_lhs(pos, vel, acc)
    return max(abs(float(l @ coordinate_metric(p) @ v)) for l, p, v in zip(lhs, pos, vel))


def covariant_self_derivative_at_identity(x_frame) -> np.ndarray:
    """Coordinate components of nabla_{X*} X* at the identity."""
    X = AlgebraElementUVW.from_frame(x_frame)
    pos, vel, acc = orbit(X, np.array([0.0]))
    return geodesic_lhs(pos[0], vel[0], acc[0])


def frame_vector_to_coordinates_at_identity(y_frame) -> np.ndarray:
    # at the identity U, V, W are the coordinate vectors
    return FRAME_TO_UVW @ np.asarray(y_frame, dtype=float)


def null_sweep(x_frame, ks: Optional[np.ndarray] = None, steps: int = 1000) -> dict:
    """Run the verifier for every k on a grid; report the smallest deviation."""
    if ks is None:
        ks = np.round(np.arange(-500, 501) * 0.01, 10)
    devs = [verify_homogeneous_geodesic(x_frame, float(k), steps=steps).deviation for k in ks]
    i = int(np.argmin(devs))
    return {"k_min": float(ks[0]), "k_max": float(ks[-1]), "count": len(ks),
            "min_deviation": float(devs[i]), "argmin_k": float(ks[i])}


def run_suite(steps: int = 1000) -> dict:
    """Coordinate checks reported by the pipeline for the E(1,1) entry."""
    fd_dev = christoffel_self_check()
    basis = {"E1": [1.0, 0.0, 0.0], "E2": [0.0, 1.0, 0.0], "E3": [0.0, 0.0, 1.0]}
    frame_checks = {}
    for name, x in basis.items():
        rep = verify_homogeneous_geodesic(x, 0.0, steps=steps)
        frame_checks[name] = {"deviation": rep.deviation, "passed": rep.passed}
    null = null_sweep([1.0, 0.0, 1.0], steps=steps)
    null["passed_any"] = bool(null["min_deviation"] < VERIFY_TOL)
    return {
        "christoffel_fd_deviation": fd_dev,
        "frame_vectors": frame_checks,
        "null_e1_plus_e3": null,
        "speed_drift_max": max(orbit_speed_drift(x) for x in basis.values()),
        "orthogonality_max": max(orbit_orthogonality(x) for x in basis.values()),
    }

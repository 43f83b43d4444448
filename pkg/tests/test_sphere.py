import numpy as np
import pytest

from homgeo.sphere import (
    angular_distance,
    is_degenerate_zero,
    local_minima,
    refine_zero,
    sphere_grid,
    sphere_points,
    stereographic,
    tangent_basis,
)


def random_unit(rng, count, dim):
    v = rng.normal(size=(count, dim))
    return v / np.linalg.norm(v, axis=1)[:, None]


class TestGrid:
    @pytest.mark.parametrize("m, res", [(1, 64), (2, 20), (3, 8)])
    def test_covering_radius_bounds_random_points(self, m, res, rng):
        grid = sphere_grid(m, res)
        assert np.allclose(np.linalg.norm(grid.points, axis=1), 1.0)
        q = random_unit(rng, 2000, m + 1)
        nearest = np.max(q @ grid.points.T, axis=1)
        worst = float(np.max(np.arccos(np.clip(nearest, -1.0, 1.0))))
        assert worst <= grid.covering_radius

    def test_circle_convention(self):
        assert np.allclose(sphere_points(np.array([[np.pi / 2]])), [[1.0, 0.0]])
        assert sphere_grid(1, 4).points.tolist() == [[0.0, 1.0], [1.0, 0.0], [0.0, -1.0], [-1.0, 0.0]]

    def test_s0(self):
        assert sphere_grid(0, 10).points.tolist() == [[1.0], [-1.0]]

    def test_local_minima_periodic(self):
        grid = sphere_grid(1, 8)
        values = np.array([0.0, 1, 2, 3, 4, 3, 2, 1])
        assert local_minima(values, grid).tolist() == [0]


class TestChart:
    def test_stereographic_origin_and_unit(self, rng):
        for p in random_unit(rng, 5, 4):
            B = tangent_basis(p)
            assert np.allclose(B.T @ B, np.eye(3))
            assert np.allclose(B.T @ p, 0.0)
            assert np.allclose(stereographic(p, B, np.zeros(3)), p)
            q = stereographic(p, B, rng.normal(size=3))
            assert np.linalg.norm(q) == pytest.approx(1.0)

    def test_angular_distance(self):
        a = np.array([1.0, 0.0])
        assert angular_distance(a, np.array([0.0, 1.0])) == pytest.approx(np.pi / 2)
        assert angular_distance(a, np.array([np.cos(1e-9), np.sin(1e-9)])) == pytest.approx(1e-9, rel=1e-6)
        assert angular_distance(a, -a) == pytest.approx(np.pi)


class TestRefine:
    def test_newton_finds_simple_zero(self):
        # rotation field about the z axis vanishes at the poles
        def field(p):
            return np.array([-p[1], p[0], 0.0])

        def jac(p):
            return np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])

        r = refine_zero(field, jac, np.array([0.1, 0.05, 1.0]), tol=1e-12)
        assert r.converged
        assert angular_distance(r.point, np.array([0.0, 0.0, 1.0])) < 1e-10
        assert not is_degenerate_zero(jac, r.point)

    def test_degenerate_zero_detected(self):
        def jac(p):
            return np.zeros((3, 3))

        assert is_degenerate_zero(jac, np.array([0.0, 0.0, 1.0]))

    def test_nonvanishing_field_does_not_converge(self):
        # the rotation field on the circle has unit length everywhere
        def field(p):
            return np.array([-p[1], p[0]])

        def jac(p):
            return np.array([[0.0, -1.0], [1.0, 0.0]])

        r = refine_zero(field, jac, np.array([1.0, 0.0]), tol=1e-9)
        assert not r.converged
        assert r.residual == pytest.approx(1.0)

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from homgeo.algebra import LieAlgebra, PseudoOrthonormalFrame
from homgeo.config import SolverConfig
from homgeo.connection import covariant_quadratic, koszul_coefficients
from homgeo.errors import DimensionError, SignatureError, UndefinedWindingError
from homgeo.nullcone import (
    NullDirection,
    certify_nonexistence,
    lipschitz_bound,
    null_scan,
    scan_and_refine,
    t_field,
    t_field_batch,
    winding_number,
    winding_number_of_field,
)
from homgeo.sphere import angular_distance, sphere_grid


class TestTField:
    def test_closed_form(self, e11_gamma):
        for phi in np.linspace(0.0, 2 * np.pi, 91):
            s = t_field(e11_gamma, NullDirection.from_angle(phi))
            expected = (2 - 0.5 * np.sin(phi) ** 2) * np.array([np.cos(phi), -np.sin(phi)])
            assert np.allclose(s.tilde_t, expected, atol=1e-12)

    def test_quarter_turn(self, e11_gamma):
        s = t_field(e11_gamma, NullDirection.from_angle(np.pi / 2))
        assert np.allclose(s.tilde_t, [0.0, -1.5], atol=1e-15)

    def test_abelian(self):
        gamma = koszul_coefficients(LieAlgebra.abelian(4), PseudoOrthonormalFrame(np.eye(4), (3, 1)))
        s = t_field(gamma, NullDirection([0.3, -0.2, 0.9]))
        assert not np.any(s.tilde_t)

    def test_orthogonality(self, catalog_gammas, rng):
        for name, gamma in catalog_gammas.items():
            if not gamma.is_lorentzian:
                continue
            for _ in range(20):
                d = NullDirection(rng.normal(size=gamma.dim - 1))
                s = t_field(gamma, d)
                assert abs(gamma.inner(s.t_full, d.x)) < 1e-10, name
                assert abs(s.tilde_t @ d.tilde_x) < 1e-10, name
                assert s.t_full[-1] == 0.0

    def test_batch_agrees(self, e11_gamma):
        pts = sphere_grid(1, 64).points
        batch = t_field_batch(e11_gamma, pts)
        single = np.array([t_field(e11_gamma, NullDirection(p)).tilde_t for p in pts])
        assert np.allclose(batch, single, atol=1e-15)

    def test_requires_lorentzian(self):
        gamma = koszul_coefficients(LieAlgebra.abelian(3), PseudoOrthonormalFrame(np.eye(3), (3, 0)))
        with pytest.raises(SignatureError):
            t_field(gamma, NullDirection([1.0, 0.0]))

    def test_wrong_dimension(self, e11_gamma):
        with pytest.raises(DimensionError):
            t_field(e11_gamma, NullDirection([1.0, 0.0, 0.0]))

    def test_zero_direction_rejected(self):
        with pytest.raises(ValueError):
            NullDirection([0.0, 0.0])


class TestScan:
    def test_e11_has_no_zero(self, e11_gamma):
        scan = null_scan(e11_gamma, SolverConfig(grid=720))
        assert scan.zeros == []
        assert scan.grid_min == pytest.approx(1.5, abs=1e-12)
        assert not scan.plateau

    def test_e11_plus_r(self, catalog_gammas):
        zeros = scan_and_refine(catalog_gammas["e11_plus_r"], SolverConfig())
        assert angular_distance(zeros[0].direction.tilde_x, np.array([0.0, 0.0, 1.0])) < 1e-6
        assert zeros[0].k == 0.0
        # the opposite spatial direction is also a null geodesic direction
        assert any(angular_distance(z.direction.tilde_x, np.array([0.0, 0.0, -1.0])) < 1e-6 for z in zeros)

    def test_zero_equivalence(self, catalog_gammas):
        for name in ("e11_plus_r", "minkowski4", "minkowski2"):
            gamma = catalog_gammas[name]
            for z in scan_and_refine(gamma, SolverConfig()):
                x = z.direction.x
                y = covariant_quadratic(gamma, x)
                assert np.linalg.norm(y - z.k * x) < 1e-9

    def test_minkowski_plateau(self, catalog_gammas):
        scan = null_scan(catalog_gammas["minkowski4"], SolverConfig())
        assert scan.plateau
        assert len(scan.zeros) >= 1
        assert all(z.residual == 0.0 for z in scan.zeros)

    def test_minkowski2_two_points(self, catalog_gammas):
        zeros = scan_and_refine(catalog_gammas["minkowski2"], SolverConfig())
        assert sorted(float(z.direction.tilde_x[0]) for z in zeros) == [-1.0, 1.0]

    def test_deterministic_ordering(self, catalog_gammas):
        for name in ("e11_plus_r", "minkowski4"):
            a = scan_and_refine(catalog_gammas[name], SolverConfig())
            b = scan_and_refine(catalog_gammas[name], SolverConfig())
            assert [z.grid_index for z in a] == [z.grid_index for z in b]
            assert all(np.array_equal(p.direction.tilde_x, q.direction.tilde_x) for p, q in zip(a, b))
            assert [z.grid_index for z in a] == sorted(z.grid_index for z in a)


class TestCertificate:
    def test_e11_certified(self, e11_gamma):
        cert = certify_nonexistence(e11_gamma, SolverConfig(grid=4096))
        assert cert.kind == "nonexistence-certified"
        assert cert.min_norm == pytest.approx(1.5, abs=1e-9)
        assert cert.min_norm > cert.lipschitz_bound * cert.grid_step

    def test_e11_min_norm_oracle(self, e11_gamma):
        # independent 1-D minimization of the field norm itself
        opt = minimize_scalar(
            lambda p: np.linalg.norm(t_field(e11_gamma, NullDirection.from_angle(p)).tilde_t),
            bounds=(0.0, np.pi), method="bounded", options={"xatol": 1e-10},
        )
        assert opt.fun == pytest.approx(1.5, abs=1e-9)
        assert np.sin(opt.x) ** 2 == pytest.approx(1.0, abs=1e-6)

    def test_coarse_grid_is_inconclusive(self, e11_gamma):
        # the bound L * h must dominate min |t~| before a certificate is issued
        cert = certify_nonexistence(e11_gamma, SolverConfig(grid=16))
        assert cert.kind == "inconclusive"

    def test_lipschitz_bound_is_sound(self, catalog_gammas, rng):
        for name, gamma in catalog_gammas.items():
            if not gamma.is_lorentzian or not np.any(gamma.gamma):
                continue
            L = lipschitz_bound(gamma)
            a = rng.normal(size=(2000, gamma.dim - 1))
            b = a + 1e-3 * rng.normal(size=a.shape)
            a /= np.linalg.norm(a, axis=1)[:, None]
            b /= np.linalg.norm(b, axis=1)[:, None]
            ratio = np.linalg.norm(t_field_batch(gamma, a) - t_field_batch(gamma, b), axis=1) / np.linalg.norm(a - b, axis=1)
            assert ratio.max() < L, name

    def test_abelian_zero_found(self, catalog_gammas):
        cert = certify_nonexistence(catalog_gammas["minkowski4"], SolverConfig())
        assert cert.kind == "zero-found"
        assert cert.witness_residual == 0.0

    def test_e11_plus_r_witness(self, catalog_gammas):
        cert = certify_nonexistence(catalog_gammas["e11_plus_r"], SolverConfig())
        assert cert.kind == "zero-found"
        assert angular_distance(cert.witness.tilde_x, np.array([0.0, 0.0, 1.0])) < 1e-6

    def test_heisenberg_certified(self, catalog_gammas):
        cert = certify_nonexistence(catalog_gammas["heisenberg3"], SolverConfig())
        assert cert.kind == "nonexistence-certified"
        assert cert.min_norm == pytest.approx(1.0, abs=1e-12)


class TestWinding:
    def test_e11(self, e11_gamma):
        assert winding_number(e11_gamma, SolverConfig()) == -1

    def test_scale_invariance(self):
        assert winding_number_of_field(lambda p: 3.0 * np.column_stack([np.cos(p), -np.sin(p)])) == -1

    def test_positive(self):
        assert winding_number_of_field(lambda p: np.column_stack([-np.sin(p), np.cos(p)])) == 1

    def test_constant_field(self):
        assert winding_number_of_field(lambda p: np.tile([1.0, 2.0], (len(p), 1))) == 0

    def test_coarse_grid_is_refined(self):
        # degree 5 needs more than 20 samples for increments below pi/2
        assert winding_number_of_field(lambda p: np.column_stack([np.cos(5 * p), np.sin(5 * p)]), n_grid=8) == 5

    def test_zero_on_grid(self):
        with pytest.raises(UndefinedWindingError):
            winding_number_of_field(lambda p: np.column_stack([np.cos(p), np.zeros_like(p)]), n_grid=8)

    def test_only_n3(self, catalog_gammas):
        with pytest.raises(DimensionError):
            winding_number(catalog_gammas["minkowski4"], SolverConfig())

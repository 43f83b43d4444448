import itertools

import numpy as np
import pytest

from homgeo.algebra import (
    LieAlgebra,
    MetricTensor,
    bracket,
    pseudo_orthonormalize,
    signature,
    validate,
)
from homgeo.errors import DimensionError, MetricError, SignatureError, ValidationError


def e(i, n=3):
    v = np.zeros(n)
    v[i - 1] = 1.0
    return v


def brute_force_jacobi(c):
    """Cyclic sum [x,[y,z]] + [y,[z,x]] + [z,[x,y]] over basis triples, by nested loops."""
    n = c.shape[0]

    def br(x, y):
        out = np.zeros(n)
        for i in range(n):
            for j in range(n):
                out += x[i] * y[j] * c[i, j]
        return out

    worst = 0.0
    for i, j, k in itertools.product(range(n), repeat=3):
        x, y, z = np.eye(n)[i], np.eye(n)[j], np.eye(n)[k]
        s = br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y))
        worst = max(worst, float(np.max(np.abs(s))))
    return worst


class TestLieAlgebra:
    def test_bracket_examples(self, e11_entry):
        alg = e11_entry.algebra
        assert np.array_equal(bracket(alg, e(2), e(1)), 2 * e(3))
        assert np.array_equal(bracket(alg, e(2), e(3)), 0.5 * e(1))
        assert np.array_equal(bracket(alg, e(1), e(3)), np.zeros(3))

    def test_bracket_self_is_zero(self, e11_entry, rng):
        for _ in range(20):
            x = rng.normal(size=3)
            assert np.allclose(bracket(e11_entry.algebra, x, x), 0.0, atol=1e-15)

    def test_bracket_length_mismatch(self, e11_entry):
        with pytest.raises(DimensionError):
            bracket(e11_entry.algebra, [1, 0], [0, 1, 0])

    def test_rejects_non_antisymmetric(self):
        c = np.zeros((2, 2, 2))
        c[0, 1, 0] = 1.0
        with pytest.raises(ValidationError):
            LieAlgebra(c)

    def test_rejects_bad_shape(self):
        with pytest.raises(DimensionError):
            LieAlgebra(np.zeros((2, 3, 2)))

    def test_structure_is_read_only(self):
        alg = LieAlgebra.abelian(2)
        with pytest.raises(ValueError):
            alg.structure[0, 1, 0] = 1.0

    def test_from_brackets_completes_antisymmetry(self):
        alg = LieAlgebra.from_brackets(3, {(0, 1): {2: 1.0}})
        assert alg.structure[0, 1, 2] == 1.0
        assert alg.structure[1, 0, 2] == -1.0

    def test_in_basis_identity(self, e11_entry):
        assert e11_entry.algebra.in_basis(np.eye(3)) == e11_entry.algebra


class TestValidate:
    def test_e11_passes(self, e11_entry):
        rep = validate(e11_entry.algebra)
        assert rep.passed
        assert rep.antisymmetry_defect == 0.0
        assert rep.jacobi_defect == 0.0
        assert brute_force_jacobi(e11_entry.algebra.structure) == 0.0

    def test_abelian_passes(self):
        assert validate(LieAlgebra.abelian(4)).passed

    def test_known_failure(self):
        # [e1,e2]=e3, [e2,e3]=e1, [e1,e3]=e3
        alg = LieAlgebra.from_brackets(3, {(0, 1): {2: 1.0}, (1, 2): {0: 1.0}, (0, 2): {2: 1.0}})
        rep = validate(alg)
        assert not rep.passed
        assert rep.jacobi_defect == pytest.approx(1.0)
        assert rep.jacobi_defect == pytest.approx(brute_force_jacobi(alg.structure))
        i, j, k, m = rep.worst_jacobi
        assert sorted((i, j, k)) == [1, 2, 3]
        assert m == 1

    def test_matches_brute_force_on_random_constants(self, rng):
        for _ in range(5):
            c = rng.normal(size=(3, 3, 3))
            alg = LieAlgebra(0.5 * (c - c.transpose(1, 0, 2)))
            assert validate(alg).jacobi_defect == pytest.approx(brute_force_jacobi(alg.structure), rel=1e-12)


class TestSignature:
    @pytest.mark.parametrize(
        "g, expected",
        [
            (np.diag([1.0, 1.0, -1.0]), (2, 1)),
            (np.eye(4), (4, 0)),
            # coordinate metric of E(1,1) at w = 0, order (u, v, w)
            ([[-0.75, -1.25, 0.0], [-1.25, -0.75, 0.0], [0.0, 0.0, 1.0]], (2, 1)),
        ],
    )
    def test_examples(self, g, expected):
        assert signature(MetricTensor(g)) == expected

    def test_degenerate(self):
        with pytest.raises(MetricError):
            MetricTensor(np.diag([1.0, 0.0]))

    def test_asymmetric(self):
        with pytest.raises(MetricError):
            MetricTensor([[1.0, 0.5], [0.0, -1.0]])


class TestPseudoOrthonormalize:
    def test_identity_for_standard_lorentzian(self):
        frame = pseudo_orthonormalize(MetricTensor(np.diag([1.0, 1.0, -1.0])))
        assert np.array_equal(frame.P, np.eye(3))
        assert frame.signature == (2, 1)

    def test_e11_coordinate_metric(self):
        g = np.array([[-0.75, -1.25, 0.0], [-1.25, -0.75, 0.0], [0.0, 0.0, 1.0]])
        frame = pseudo_orthonormalize(MetricTensor(g))
        assert np.allclose(frame.P.T @ g @ frame.P, np.diag([1.0, 1.0, -1.0]), atol=1e-10)
        # a known closed-form frame is one valid answer
        known = np.array([[1.0, 0.0, 0.5], [-1.0, 0.0, 0.5], [0.0, -1.0, 0.0]])
        assert np.allclose(known.T @ g @ known, np.diag([1.0, 1.0, -1.0]), atol=1e-15)

    def test_timelike_first_is_moved_last(self):
        frame = pseudo_orthonormalize(MetricTensor(np.diag([-1.0, 1.0])))
        assert np.allclose(frame.P, [[0.0, 1.0], [1.0, 0.0]])
        assert frame.is_lorentzian

    def test_null_pivot(self):
        # e1 and e2 are both null; the algorithm must combine them
        g = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        frame = pseudo_orthonormalize(MetricTensor(g))
        assert np.allclose(frame.P.T @ g @ frame.P, np.diag(frame.eta), atol=1e-12)
        assert frame.signature == (2, 1)

    def test_wrong_signature_in_lorentzian_mode(self):
        with pytest.raises(SignatureError):
            pseudo_orthonormalize(MetricTensor(np.eye(3)))
        frame = pseudo_orthonormalize(MetricTensor(np.eye(3)), lorentzian=False)
        assert frame.signature == (3, 0)

    def test_random_lorentzian_metrics(self, rng):
        for n in (2, 3, 4, 5):
            for _ in range(10):
                A = np.eye(n) + 0.4 * rng.normal(size=(n, n))
                g = A.T @ np.diag([1.0] * (n - 1) + [-1.0]) @ A
                g = (g + g.T) / 2
                frame = pseudo_orthonormalize(MetricTensor(g))
                assert np.allclose(frame.P.T @ g @ frame.P, np.diag(frame.eta), atol=1e-10)
                x = rng.normal(size=n)
                assert np.allclose(frame.from_frame(frame.to_frame(x)), x)

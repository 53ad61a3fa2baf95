"""
Tests for the eigen, Schur and bordered factorizations of E_B.
"""

import numpy as np
from django.test import SimpleTestCase
from scipy.linalg import solve_triangular

from core.engine.decomposition import eigen_decompose, schur_decompose, tweaked_assemble
from core.engine.exceptions import DefectiveError
from core.engine.instances import defective_instance
from core.engine.linalg import inf_norm

from .fixtures import spectra_match

JORDAN = np.array([[0.0, 1.0], [0.0, 0.0]])


class EigenDecomposeTests(SimpleTestCase):
    """Test cases for eigen_decompose."""

    def test_diagonal(self):
        """Test a 1x1 diagonal input."""
        eig = eigen_decompose(np.array([[0.5]]))
        np.testing.assert_allclose(eig.sigma, [0.5])
        self.assertAlmostEqual(abs(eig.Q[0, 0]), 1.0)

    def test_jordan_block_is_defective(self):
        """Test that the canonical 2x2 Jordan block is rejected."""
        with self.assertRaises(DefectiveError):
            eigen_decompose(JORDAN)

    def test_symmetric_pair(self):
        """Test [[2, 1], [1, 2]] with eigenvalues 1 and 3."""
        E = np.array([[2.0, 1.0], [1.0, 2.0]])
        eig = eigen_decompose(E)
        np.testing.assert_allclose(np.sort(eig.sigma.real), [1.0, 3.0])
        residual = inf_norm(eig.Q @ np.diag(eig.sigma) @ eig.Q_inv - E)
        self.assertLessEqual(residual, 1e-8 * 2 * (1 + inf_norm(E)))

    def test_engineered_jordan_blocks(self):
        """Test that similarity-disguised nilpotent blocks are detected."""
        for m in (10, 12):
            for seed in range(3):
                lp = defective_instance(m, seed=seed)
                with self.assertRaises(DefectiveError, msg=f"m={m} seed={seed}"):
                    eigen_decompose(lp.D[:, :m])

    def test_spectrum_matches_characteristic_roots(self):
        """Test eigenvalues against polynomial roots on small random matrices."""
        rng = np.random.default_rng(1)
        for m in range(1, 7):
            E = rng.uniform(-1, 1, (m, m))
            roots = np.roots(np.poly(E))
            self.assertTrue(spectra_match(eigen_decompose(E).sigma, roots, 1e-6))
            self.assertTrue(spectra_match(schur_decompose(E).sigma, roots, 1e-6))


class SchurDecomposeTests(SimpleTestCase):
    """Test cases for schur_decompose."""

    def test_diagonal(self):
        """Test that a diagonal input gives U equal to it."""
        schur = schur_decompose(np.array([[0.5]]))
        np.testing.assert_allclose(schur.U, [[0.5]])

    def test_jordan_block(self):
        """Test that a defective matrix is handled and reproduced."""
        schur = schur_decompose(JORDAN)
        np.testing.assert_allclose(schur.sigma, [0.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(schur.Q @ schur.U @ schur.Q.conj().T, JORDAN, atol=1e-12)

    def test_invariants_on_random_matrices(self):
        """Test unitarity, triangularity and reconstruction."""
        rng = np.random.default_rng(2)
        for _ in range(10):
            E = rng.uniform(-1, 1, (3, 3))
            schur = schur_decompose(E)
            self.assertLessEqual(inf_norm(schur.Q @ schur.Q.conj().T - np.eye(3)), 1e-8 * 3)
            np.testing.assert_array_equal(np.tril(schur.U, -1), np.zeros((3, 3)))
            self.assertLessEqual(inf_norm(schur.Q @ schur.U @ schur.Q.conj().T - E), 1e-8 * 3 * (1 + inf_norm(E)))

    def test_triangular_solve_matches_dense(self):
        """Test that back-substitution in Schur coordinates solves (I + lambda E) y = w."""
        rng = np.random.default_rng(4)
        for _ in range(10):
            m = int(rng.integers(2, 7))
            E = rng.uniform(-1, 1, (m, m))
            w = rng.normal(size=m)
            lam = float(rng.uniform(-0.3, 0.3))
            schur = schur_decompose(E)
            T = np.eye(m) + lam * schur.U
            y = schur.Q @ solve_triangular(T, schur.Q.conj().T @ w)
            expected = np.linalg.solve(np.eye(m) + lam * E, w)
            np.testing.assert_allclose(y.real, expected, rtol=0, atol=1e-8 * (1 + np.abs(expected).max()))


class TweakedAssembleTests(SimpleTestCase):
    """Test cases for the bordered eigendecomposition."""

    def test_jordan_block_becomes_diagonalizable(self):
        """Test that bordering the Jordan block yields a valid 3x3 decomposition."""
        tweak = tweaked_assemble(JORDAN, seed=0)
        self.assertEqual(tweak.Q.shape, (3, 3))
        residual = inf_norm(tweak.Q @ np.diag(tweak.sigma) @ tweak.Q_inv - tweak.F)
        self.assertLessEqual(residual, 1e-8 * 3 * (1 + inf_norm(tweak.F)))

    def test_rank_one_factors(self):
        """Test that u v^T equals Q^{-1} blockdiag(alpha beta, 0) Q."""
        tweak = tweaked_assemble(np.array([[0.5]]), seed=3)
        block = np.zeros((2, 2))
        block[:1, :1] = np.outer(tweak.alpha, tweak.beta)
        np.testing.assert_allclose(np.outer(tweak.u, tweak.v), tweak.Q_inv @ block @ tweak.Q, atol=1e-10)

    def test_border_has_unit_norm(self):
        """Test that alpha and beta are normalized."""
        tweak = tweaked_assemble(np.diag([0.1, 0.2, 0.3, 0.4]), seed=9)
        self.assertAlmostEqual(np.linalg.norm(tweak.alpha), 1.0)
        self.assertAlmostEqual(np.linalg.norm(tweak.beta), 1.0)

    def test_deterministic_in_seed(self):
        """Test that the same seed reproduces the same border and factors."""
        first = tweaked_assemble(JORDAN, seed=42)
        second = tweaked_assemble(JORDAN, seed=42)
        np.testing.assert_array_equal(first.alpha, second.alpha)
        np.testing.assert_array_equal(first.beta, second.beta)
        np.testing.assert_array_equal(first.Q, second.Q)
        self.assertEqual(first.attempt, second.attempt)

    def test_top_left_block_of_bordered_inverse(self):
        """Test that the leading m x m block of the bordered inverse is (I + lambda E)^{-1}."""
        rng = np.random.default_rng(6)
        for _ in range(8):
            m = int(rng.integers(1, 7))
            E = rng.uniform(-1, 1, (m, m))
            lam = float(rng.uniform(-0.3, 0.3))
            tweak = tweaked_assemble(E, seed=int(rng.integers(1000)))
            border = np.zeros((m + 1, m + 1))
            border[:m, :m] = np.outer(tweak.alpha, tweak.beta)
            G = np.eye(m + 1) + lam * tweak.F + lam * lam * border
            np.testing.assert_allclose(
                np.linalg.inv(G)[:m, :m], np.linalg.inv(np.eye(m) + lam * E), atol=1e-6,
            )

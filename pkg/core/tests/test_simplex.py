"""
Tests for the dense two-phase simplex.
"""

import numpy as np
from django.test import SimpleTestCase

from core.engine.exceptions import NotOptimalError, SingularBasisError
from core.engine.instances import random_instance
from core.engine.models import Basis, SolveStatus
from core.engine.simplex import optimal_basis, solve_lp

from .fixtures import brute_force_optimum, dense_reduced_costs, infeasible, p1, p4, standard


class SolveTests(SimpleTestCase):
    """Test cases for solve_lp on hand-checked problems."""

    def test_single_variable(self):
        """Test 2x = 4 at lambda = 0."""
        result = solve_lp(p1(), 0.0)
        self.assertEqual(result.status, SolveStatus.OPTIMAL)
        np.testing.assert_allclose(result.x, [2.0])
        self.assertAlmostEqual(result.objective, 2.0)
        self.assertEqual(result.basis, Basis((0,)))

    def test_two_variables_at_zero(self):
        """Test that the cheaper column wins at lambda = 0."""
        result = solve_lp(p4(), 0.0)
        np.testing.assert_allclose(result.x, [2.0, 0.0])
        self.assertAlmostEqual(result.objective, 2.0)
        self.assertEqual(optimal_basis(result), Basis((0,)))

    def test_basis_changes_at_three(self):
        """Test that the second column wins once 6 / (1 + lambda) < 2."""
        result = solve_lp(p4(), 3.0)
        self.assertEqual(optimal_basis(result), Basis((1,)))
        self.assertAlmostEqual(result.objective, 1.5)

    def test_infeasible(self):
        """Test that x = -1 with x >= 0 is reported infeasible."""
        result = solve_lp(infeasible(), 0.0)
        self.assertEqual(result.status, SolveStatus.INFEASIBLE)
        self.assertIsNone(result.x)
        with self.assertRaises(NotOptimalError):
            optimal_basis(result)

    def test_unbounded(self):
        """Test that min -x0 s.t. x0 - x1 = 1 is unbounded."""
        result = solve_lp(standard([-1, 0], [[1, -1]], [[0, 0]], [1]), 0.0)
        self.assertEqual(result.status, SolveStatus.UNBOUNDED)

    def test_dependent_rows(self):
        """Test that linearly dependent constraints raise SingularBasisError."""
        lp = standard([1, 1], [[1, 1], [1, 1]], [[0, 0], [0, 0]], [1, 1])
        with self.assertRaises(SingularBasisError):
            solve_lp(lp, 0.0)

    def test_warm_start_from_optimal_basis(self):
        """Test that an optimal starting basis needs no pivots."""
        lp = random_instance(4, seed=5)
        cold = solve_lp(lp, 0.0)
        warm = solve_lp(lp, 0.0, initial_basis=cold.basis)
        self.assertEqual(warm.iterations, 0)
        self.assertAlmostEqual(warm.objective, cold.objective, places=10)


class OracleTests(SimpleTestCase):
    """Test cases comparing the simplex against basis enumeration."""

    def test_matches_enumeration(self):
        """Test objectives on random instances with n <= 8."""
        for seed in range(12):
            lp = random_instance(3, 7, seed=seed)
            for lam in (0.0, 0.15):
                result = solve_lp(lp, lam)
                expected = brute_force_optimum(lp, lam)
                if expected is None:
                    self.assertEqual(result.status, SolveStatus.INFEASIBLE)
                    continue
                self.assertTrue(result.is_optimal(), f"seed {seed}, lambda {lam}")
                self.assertAlmostEqual(result.objective, expected, places=7, msg=f"seed {seed}")

    def test_solution_certificate(self):
        """Test residual, sign and reduced-cost conditions at the optimum."""
        for seed in range(5):
            lp = random_instance(5, seed=seed)
            result = solve_lp(lp, 0.0)
            self.assertTrue(result.is_optimal())
            residual = np.max(np.abs(lp.matrix_at(0.0) @ result.x - lp.b))
            self.assertLessEqual(residual, 1e-9 * (1 + np.max(np.abs(lp.b))))
            self.assertGreaterEqual(result.x.min(), -1e-9)
            self.assertAlmostEqual(result.objective, float(lp.c @ result.x), places=9)
            self.assertGreaterEqual(dense_reduced_costs(lp, result.basis, 0.0).min(), -1e-8)

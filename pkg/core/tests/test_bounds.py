"""
Tests for the solution-shift identity and the certified step sizes.
"""

import math

import numpy as np
from django.test import SimpleTestCase

from core.engine.bounds import (
    bound_inputs, certify, deviation_bound, feasibility_conditions, max_delta, solution_shift,
)
from core.engine.exceptions import EngineError
from core.engine.instances import random_instance
from core.engine.models import Basis, Strategy
from core.engine.warmstart import preprocess

from .fixtures import dense_solution, first_basis, p1, p2, standard


class SolutionShiftTests(SimpleTestCase):
    """Test cases for solution_shift."""

    def test_single_variable(self):
        """Test x_B(1) - x_B(0) = 4/3 - 2."""
        cache = preprocess(p1(), Basis((0,)))
        np.testing.assert_allclose(solution_shift(cache, 0.0, 1.0), [-2 / 3])
        np.testing.assert_array_equal(solution_shift(cache, 0.0, 0.0), [0.0])

    def test_jordan_block(self):
        """Test the nilpotent example at lambda = 0 and delta = 0.5."""
        cache = preprocess(p2(), Basis((0, 1)), Strategy.SCHUR)
        np.testing.assert_allclose(solution_shift(cache, 0.0, 0.5), [-0.5, 0.0], atol=1e-12)

    def test_matches_dense_difference(self):
        """Test the identity against two dense solves on random instances."""
        rng = np.random.default_rng(21)
        checked = 0
        for seed in range(20):
            lp = random_instance(4, seed=seed)
            basis = first_basis(lp)
            columns = list(basis.indices)
            cache = preprocess(lp, basis, Strategy.SCHUR)
            while checked < 10 * (seed + 1):
                lam, delta = (float(value) for value in rng.uniform(-0.2, 0.2, 2))
                if max(np.linalg.cond(lp.matrix_at(t)[:, columns]) for t in (lam, lam + delta)) > 1e4:
                    continue
                expected = dense_solution(lp, basis, lam + delta) - dense_solution(lp, basis, lam)
                scale = 1 + np.abs(dense_solution(lp, basis, lam)).max()
                np.testing.assert_allclose(
                    solution_shift(cache, lam, delta), expected, rtol=0, atol=1e-7 * scale,
                    err_msg=f"seed {seed}, lambda {lam}, delta {delta}",
                )
                checked += 1
        self.assertEqual(checked, 200)


class DeviationBoundTests(SimpleTestCase):
    """Test cases for deviation_bound and feasibility_conditions."""

    def setUp(self):
        self.cache = preprocess(p1(), Basis((0,)))
        self.inputs = bound_inputs(self.cache, 0.0)

    def test_inputs(self):
        """Test the norms collected at lambda = 0."""
        self.assertEqual(self.inputs.norm_E, 0.5)
        self.assertEqual(self.inputs.norm_cB, 1.0)
        self.assertAlmostEqual(self.inputs.norm_Ex, 1.0)
        np.testing.assert_allclose(self.inputs.x_lambda, [2.0])

    def test_values(self):
        """Test the bound at delta = 1, delta = 0 and where it does not apply."""
        self.assertAlmostEqual(deviation_bound(self.inputs, 1.0), 2.0)
        self.assertEqual(deviation_bound(self.inputs, 0.0), 0.0)
        self.assertIsNone(deviation_bound(self.inputs, 2.0))
        self.assertIsNone(deviation_bound(self.inputs, -2.5))

    def test_bound_holds(self):
        """Test that |o_B(delta) - o_B(0)| stays below the bound."""
        for delta in (-1.5, -0.5, 0.25, 1.0, 1.9):
            actual = abs(4 / (2 + delta) - 2.0)
            self.assertLessEqual(actual, deviation_bound(self.inputs, delta) + 1e-12)

    def test_monotone_in_step(self):
        """Test that the bound grows with |delta|."""
        values = [deviation_bound(self.inputs, delta) for delta in np.linspace(0.0, 1.9, 20)]
        self.assertEqual(values, sorted(values))

    def test_feasibility_conditions(self):
        """Test the sufficient conditions on either side of their limit."""
        self.assertTrue(feasibility_conditions(self.cache, self.inputs, 0.0, 1.0))
        self.assertFalse(feasibility_conditions(self.cache, self.inputs, 0.0, 1.9))
        self.assertTrue(feasibility_conditions(self.cache, self.inputs, 0.0, 0.0))


class MaxDeltaTests(SimpleTestCase):
    """Test cases for max_delta and certify."""

    def test_epsilon_binds(self):
        """Test the single-variable example with epsilon = 0.5."""
        certificate = certify(preprocess(p1(), Basis((0,))), 0.0, 0.5)
        self.assertAlmostEqual(certificate.delta_max, 0.4)
        self.assertEqual(certificate.binding_term, 'epsilon')
        self.assertEqual(certificate.interval, (0.0, certificate.delta_max))

    def test_component_binds(self):
        """Test that a loose epsilon leaves the feasibility term binding."""
        certificate = certify(preprocess(p1(), Basis((0,))), 0.0, 1e6)
        self.assertAlmostEqual(certificate.delta_max, 1.0)
        self.assertEqual(certificate.binding_term, 'component')

    def test_jordan_block(self):
        """Test the nilpotent example with epsilon = 1."""
        certificate = certify(preprocess(p2(), Basis((0, 1)), Strategy.SCHUR), 0.0, 1.0)
        self.assertAlmostEqual(certificate.delta_max, 1 / 3)
        self.assertEqual(certificate.binding_term, 'epsilon')

    def test_negative_direction(self):
        """Test that direction -1 gives the same radius on the other side."""
        certificate = certify(preprocess(p1(), Basis((0,))), 0.0, 0.5, direction=-1)
        self.assertAlmostEqual(certificate.delta_max, 0.4)
        lo, hi = certificate.interval
        self.assertAlmostEqual(lo, -0.4)
        self.assertEqual(hi, 0.0)

    def test_clamped_beyond_norm_radius(self):
        """Test that the radius is zero once |lambda| * ||E_B|| exceeds 1."""
        certificate = certify(preprocess(p1(), Basis((0,))), 3.0, 0.5)
        self.assertEqual(certificate.delta_max, 0.0)
        self.assertEqual(certificate.binding_term, 'norm')
        self.assertEqual(certificate.excluded, [])

    def test_never_exceeds_norm_radius(self):
        """Test delta_max <= max(0, 1 / ||E_B|| - |lambda|) on random instances."""
        rng = np.random.default_rng(8)
        for seed in range(10):
            cache = preprocess(random_instance(5, seed=seed), first_basis(random_instance(5, seed=seed)))
            for lam in rng.uniform(-0.2, 0.2, 5):
                certificate = certify(cache, float(lam), 0.1, int(rng.choice([-1, 1])))
                self.assertLessEqual(
                    certificate.delta_max, max(0.0, 1.0 / cache.norm_E - abs(lam)) + 1e-12,
                )
                self.assertGreaterEqual(certificate.delta_max, 0.0)

    def test_constant_family(self):
        """Test that D = 0 certifies every step and serializes the radius as null."""
        lp = standard([1], [[2]], [[0]], [4])
        certificate = certify(preprocess(lp, Basis((0,))), 0.0, 0.1)
        self.assertTrue(math.isinf(certificate.delta_max))
        self.assertEqual(certificate.binding_term, 'norm')
        self.assertIsNone(certificate.to_dict()['delta_max'])
        self.assertEqual(certificate.excluded, [])

    def test_invalid_arguments(self):
        """Test that a non-positive epsilon or a zero direction is refused."""
        cache = preprocess(p1(), Basis((0,)))
        inputs = bound_inputs(cache, 0.0)
        with self.assertRaises(EngineError):
            max_delta(cache, inputs, 0.0, 0.0)
        with self.assertRaises(EngineError):
            max_delta(cache, inputs, 0.0, 0.1, direction=0)

    def test_certificate_is_sound(self):
        """Test feasibility and the epsilon guarantee inside certified intervals."""
        for seed in range(8):
            lp = random_instance(4, seed=seed)
            basis = first_basis(lp)
            cache = preprocess(lp, basis, Strategy.SCHUR)
            o0 = float(lp.c[list(basis.indices)] @ dense_solution(lp, basis, 0.0))
            for direction in (1, -1):
                certificate = certify(cache, 0.0, 0.1, direction)
                self.assertGreater(certificate.delta_max, 0.0)
                for step in np.linspace(0.0, certificate.delta_max, 7):
                    x = dense_solution(lp, basis, direction * step)
                    self.assertGreaterEqual(x.min(), -1e-9, f"seed {seed}")
                    objective = float(lp.c[list(basis.indices)] @ x)
                    self.assertLessEqual(abs(objective - o0), 0.1 + 1e-9, f"seed {seed}")

# -*- coding: utf-8 -*-
import numpy as np
from django.test import SimpleTestCase

from lagdyna.exceptions import InputShapeError, PreconditionError, TrainingDivergenceError
from lagdyna.optim.adam import AdamState, sgd_or_adam_step


class AdamStateTestCase(SimpleTestCase):
    def test_validation(self):
        with self.assertRaises(PreconditionError):
            AdamState.zeros(3, eta=0.0)
        with self.assertRaises(PreconditionError):
            AdamState.zeros(3, beta1=1.0)
        with self.assertRaises(PreconditionError):
            AdamState.zeros(3, mode='rmsprop')
        with self.assertRaises(InputShapeError):
            AdamState(np.zeros(2), np.zeros(3))


class StepTestCase(SimpleTestCase):
    def test_sgd(self):
        state, w = sgd_or_adam_step(AdamState.zeros(1, eta=0.1, mode='sgd'), [1.0], [2.0])
        self.assertAlmostEqual(w[0], 0.8, places=15)
        self.assertEqual(state.t, 1)

    def test_first_adam_step_has_unit_size(self):
        state, w = sgd_or_adam_step(AdamState.zeros(1, eta=0.01), [0.0], [3.0])
        self.assertAlmostEqual(w[0], -0.01, delta=1e-8)
        np.testing.assert_allclose(state.m, [0.3])
        np.testing.assert_allclose(state.v, [0.009])

    def test_zero_gradient(self):
        start = AdamState.zeros(2, eta=0.01)
        state, w = sgd_or_adam_step(start, [1.0, -2.0], [0.0, 0.0])
        np.testing.assert_array_equal(w, [1.0, -2.0])
        # Moments of a later step only decay.
        state, _ = sgd_or_adam_step(state, w, [1.0, 1.0])
        decayed, _ = sgd_or_adam_step(state, w, [0.0, 0.0])
        np.testing.assert_allclose(decayed.m, 0.9 * state.m)
        np.testing.assert_allclose(decayed.v, 0.999 * state.v)

    def test_inputs_are_not_modified(self):
        w, grad = np.array([1.0, 2.0]), np.array([0.5, -0.5])
        start = AdamState.zeros(2)
        sgd_or_adam_step(start, w, grad)
        np.testing.assert_array_equal(w, [1.0, 2.0])
        np.testing.assert_array_equal(start.m, [0.0, 0.0])

    def test_errors(self):
        with self.assertRaises(TrainingDivergenceError):
            sgd_or_adam_step(AdamState.zeros(2), [0.0, 0.0], [np.nan, 1.0])
        with self.assertRaises(InputShapeError):
            sgd_or_adam_step(AdamState.zeros(2), [0.0, 0.0], [1.0])

    def test_minimizes_a_quadratic(self):
        state, w = AdamState.zeros(2, eta=0.05), np.array([3.0, -4.0])
        for _ in range(500):
            state, w = sgd_or_adam_step(state, w, 2 * (w - [1.0, 2.0]))
        np.testing.assert_allclose(w, [1.0, 2.0], atol=5e-2)

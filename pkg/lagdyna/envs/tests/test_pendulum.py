# -*- coding: utf-8 -*-
import os
import tempfile

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings as hypothesis_settings, strategies as st

from lagdyna.envs.pendulum import (PendulumEnv, PendulumParams, Transition, accel_targets, energy, env_step,
                                   ground_truth_accel, reset, reward, wrap_angle, write_trajectory)
from lagdyna.exceptions import DomainError, InsufficientDataError, PreconditionError
from lagdyna.integrate.rk import StepSpec, rk2_step
from lagdyna.lnn.operator import accel
from lagdyna.state import Force, GeneralizedState
from lagdyna.tools import read_csv

PARAMS = PendulumParams()

angles = st.floats(min_value=-1e3, max_value=1e3)


class ParamsTestCase(SimpleTestCase):
    def test_defaults(self):
        self.assertEqual((PARAMS.mass, PARAMS.length, PARAMS.gravity, PARAMS.dt), (1.0, 1.0, 10.0, 0.05))
        self.assertEqual((PARAMS.torque_limit, PARAMS.speed_limit, PARAMS.horizon), (2.0, 8.0, 200))

    def test_must_be_positive(self):
        with self.assertRaises(PreconditionError):
            PendulumParams(dt=0.0)
        with self.assertRaises(PreconditionError):
            PendulumParams(mass=-1.0)

    def test_lagrangian_matches_dynamics(self):
        model = PARAMS.lagrangian()
        for q, a in ((0.3, 0.0), (-2.0, 1.5), (3.0, -2.0)):
            self.assertAlmostEqual(model.acceleration(q, a), ground_truth_accel(PARAMS, q, a), places=12)


class WrapAngleTestCase(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(wrap_angle(0.0), 0.0)
        self.assertAlmostEqual(wrap_angle(np.pi + 0.1), -np.pi + 0.1, places=12)
        self.assertAlmostEqual(wrap_angle(4 * np.pi + 0.5), 0.5, places=12)
        self.assertEqual(wrap_angle(np.pi), -np.pi)

    @hypothesis_settings(max_examples=200)
    @given(angles)
    def test_idempotent(self, q):
        once = wrap_angle(q)
        self.assertGreaterEqual(once, -np.pi)
        self.assertLess(once, np.pi)
        self.assertEqual(wrap_angle(once), once)


class RewardTestCase(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(reward(GeneralizedState(0.0, 0.0), Force(0.0)), 0.0)
        self.assertAlmostEqual(reward(GeneralizedState(1.0, 1.0), Force(1.0)), -1.101, places=12)
        self.assertAlmostEqual(reward(GeneralizedState(np.pi / 2, 1.0), Force(1.0)), -2.5684, delta=1e-4)

    @given(st.floats(min_value=-np.pi, max_value=np.pi), st.floats(min_value=-8, max_value=8),
           st.floats(min_value=-2, max_value=2))
    def test_never_positive(self, q, qdot, a):
        r = reward(GeneralizedState(q, qdot), Force(a))
        self.assertLessEqual(r, 0.0)
        if (q, qdot, a) != (0.0, 0.0, 0.0):
            self.assertLess(r, 0.0)

    def test_batch(self):
        r = reward(GeneralizedState([[0.0], [1.0]], [[0.0], [1.0]]), Force([[0.0], [1.0]]))
        np.testing.assert_allclose(r, [0.0, -1.101])


class EnvStepTestCase(SimpleTestCase):
    def test_equilibria(self):
        for q in (0.0, np.pi):
            s, r, done, _ = env_step(PARAMS, GeneralizedState(q, 0.0), 0.0)
            self.assertAlmostEqual(s.qdot[0], 0.0, places=12)
            self.assertAlmostEqual(abs(s.q[0]), q, places=12)
            self.assertFalse(done)

    def test_horizontal(self):
        s, _, _, _ = env_step(PARAMS, GeneralizedState(np.pi / 2, 0.0), 0.0)
        self.assertAlmostEqual(s.qdot[0], 0.75, places=12)
        self.assertAlmostEqual(s.q[0], np.pi / 2 + 0.0375, places=12)

    def test_reward_uses_the_applied_torque(self):
        s = GeneralizedState(0.5, -1.0)
        _, r, _, force = env_step(PARAMS, s, Force(7.0))
        self.assertEqual(force.a[0], 2.0)
        self.assertEqual(r, reward(s, Force(2.0)))

    @hypothesis_settings(max_examples=100)
    @given(st.floats(min_value=-np.pi, max_value=np.pi), st.floats(min_value=-8, max_value=8),
           st.floats(min_value=-100, max_value=100))
    def test_clamps(self, q, qdot, a):
        s, _, _, force = env_step(PARAMS, GeneralizedState(q, qdot), a)
        self.assertLessEqual(abs(force.a[0]), 2.0)
        self.assertLessEqual(abs(s.qdot[0]), 8.0)
        self.assertLess(s.q[0], np.pi)
        again, _, _, _ = env_step(PARAMS, GeneralizedState(q, qdot), a)
        self.assertEqual((s.q[0], s.qdot[0]), (again.q[0], again.qdot[0]))

    def test_done_at_horizon(self):
        self.assertFalse(env_step(PARAMS, GeneralizedState(0.1, 0.0), 0.0, t=198)[2])
        self.assertTrue(env_step(PARAMS, GeneralizedState(0.1, 0.0), 0.0, t=199)[2])

    def test_non_finite(self):
        with self.assertRaises(DomainError):
            env_step(PARAMS, GeneralizedState(np.nan, 0.0), 0.0)
        with self.assertRaises(DomainError):
            env_step(PARAMS, GeneralizedState(0.0, 0.0), np.nan)

    def test_energy_drift(self):
        rng = np.random.default_rng(0)
        scale = PARAMS.mass * PARAMS.gravity * PARAMS.length
        for _ in range(100):
            s = reset(PARAMS, rng)
            s_next, _, _, _ = env_step(PARAMS, s, 0.0)
            self.assertLess(abs(energy(PARAMS, s_next) - energy(PARAMS, s)), 0.01 * scale)


class ResetTestCase(SimpleTestCase):
    def test_seeded(self):
        first, second = reset(PARAMS, 42), reset(PARAMS, 42)
        self.assertEqual((first.q[0], first.qdot[0]), (second.q[0], second.qdot[0]))

    def test_distribution(self):
        rng = np.random.default_rng(1)
        draws = np.array([reset(PARAMS, rng).as_vector() for _ in range(10000)])
        self.assertTrue(np.all(np.abs(draws[:, 0]) < np.pi))
        self.assertTrue(np.all(np.abs(draws[:, 1]) <= 1.0))
        self.assertAlmostEqual(np.mean(np.abs(draws[:, 0])), np.pi / 2, delta=0.05)


class PendulumEnvTestCase(SimpleTestCase):
    def test_episode(self):
        env = PendulumEnv(seed=3)
        s = env.reset()
        transitions = [env.step(0.5) for _ in range(PARAMS.horizon)]
        self.assertIs(transitions[0].s, s)
        self.assertEqual([tr.done for tr in transitions].index(True), PARAMS.horizon - 1)
        for tr in transitions:
            self.assertEqual(tr.r, reward(tr.s, tr.a))

    def test_needs_reset(self):
        with self.assertRaises(PreconditionError):
            PendulumEnv().step(0.0)

    def test_trajectory_csv(self):
        env = PendulumEnv(seed=4)
        env.reset()
        transitions = [env.step(1.0) for _ in range(3)]
        with tempfile.TemporaryDirectory() as directory:
            config_hash, rows = read_csv(write_trajectory(os.path.join(directory, 'ep.csv'), transitions, 'f00'))
        self.assertEqual(config_hash, 'f00')
        self.assertEqual([row['t'] for row in rows], ['0', '1', '2'])
        self.assertEqual(list(rows[0]), ['t', 'q', 'qdot', 'a', 'r', 'done'])
        self.assertEqual(rows[2]['a'], '1.000000')


class AccelTargetsTestCase(SimpleTestCase):
    def transition(self, qdot, qdot_next, q=0.2, a=0.0):
        return Transition(GeneralizedState(q, qdot), Force(a), GeneralizedState(q, qdot_next), 0.0, False)

    def test_difference_quotient(self):
        samples = accel_targets([self.transition(0.5, 0.6, a=1.0)], PARAMS)
        self.assertAlmostEqual(samples.y[0, 0], 2.0, places=12)
        self.assertEqual(samples.a[0, 0], 1.0)

    def test_clamped_velocity_is_dropped(self):
        samples = accel_targets([self.transition(7.9, 8.0), self.transition(0.1, 0.2)], PARAMS)
        self.assertEqual(len(samples), 1)
        with self.assertRaises(InsufficientDataError):
            accel_targets([self.transition(-7.9, -8.0)], PARAMS)
        with self.assertRaises(InsufficientDataError):
            accel_targets([], PARAMS)

    def rollout(self, steps, seed, policy):
        env = PendulumEnv(seed=seed)
        env.reset()
        rng = np.random.default_rng(seed)
        return [env.step(policy(rng)) for _ in range(steps)]

    def test_exact_at_the_start_state(self):
        samples = accel_targets(self.rollout(300, 5, lambda rng: rng.uniform(-2, 2)), PARAMS)
        np.testing.assert_allclose(samples.y, ground_truth_accel(PARAMS, samples.q, samples.a), atol=1e-9)

    def test_midpoint_agreement(self):
        transitions = [tr for tr in self.rollout(300, 6, lambda rng: rng.uniform(-2, 2)) if abs(tr.s.qdot[0]) <= 1.0]
        samples = accel_targets(transitions, PARAMS)
        midpoint = samples.q + 0.5 * PARAMS.dt * samples.qdot
        error = np.abs(samples.y - ground_truth_accel(PARAMS, midpoint, samples.a))
        self.assertLess(np.max(error), 0.6)

    def test_model_transitions_match(self):
        """RK-2 steps of the analytic Lagrangian agree with the environment within the discretization gap."""
        model = PARAMS.lagrangian()
        rng = np.random.default_rng(7)
        for _ in range(50):
            s = GeneralizedState(rng.uniform(-np.pi, np.pi), rng.uniform(-1, 1))
            env_next, _, _, _ = env_step(PARAMS, s, Force(0.0))
            model_next = rk2_step(lambda x, f: accel(model, x, f), s, Force(0.0), StepSpec(PARAMS.dt))
            self.assertLess(abs(wrap_angle(model_next.q[0] - env_next.q[0])), 2e-2)
            self.assertLess(abs(model_next.qdot[0] - env_next.qdot[0]), 2e-2)

# -*- coding: utf-8 -*-
from unittest import mock

import numpy as np
from django.test import SimpleTestCase

from lagdyna.agent.config import AgentConfig
from lagdyna.agent.critic import CriticNet
from lagdyna.agent.policy import PolicyNet
from lagdyna.dyna.buffer import ReplayBuffer
from lagdyna.dyna.loop import (DynaConfig, agent_updates, collect_real, derive_seeds, maybe_train_model,
                               model_rollouts, physical_loss_update, run)
from lagdyna.envs.pendulum import PendulumEnv, PendulumParams, Transition, env_step, reward, wrap_angle
from lagdyna.exceptions import PreconditionError, TrainingDivergenceError
from lagdyna.lnn.analytic import HarmonicLagrangian
from lagdyna.lnn.losses import physical_loss
from lagdyna.nncore.network import NetworkArch, ScalarNetwork
from lagdyna.optim.trainers import OptimizerConfig
from lagdyna.state import Force, GeneralizedState

SHORT = PendulumParams(horizon=50)
TINY_AGENT = AgentConfig(hidden=(8,), updates_per_episode=5, batch_size=16)


def tiny_config(**overrides):
    values = dict(episodes=3, steps_per_episode=50, env_threshold=60, model_threshold=10, loss_threshold=float('inf'),
                  model_batch=100, model_rounds=2, rollout_batch=4, rollout_horizon=3, eval_every=50,
                  eval_episodes=1, capacity=1000, lnn_hidden=(8,), pendulum=SHORT, agent=TINY_AGENT)
    values.update(overrides)
    return DynaConfig(**values)


def quiet_policy(config=TINY_AGENT):
    """Zero mean and the smallest spread, actions stay within about 0.02 of zero."""
    policy = PolicyNet.initialize(config)
    return PolicyNet(policy.mean_net.with_weights(np.zeros(policy.mean_net.weights.size)), config.min_log_std,
                     config, policy.adam)


def filled_env_buffer(count, seed=0, q=None):
    rng = np.random.default_rng(seed)
    buffer = ReplayBuffer(10 * count, 'env', seed=seed)
    states = GeneralizedState(rng.uniform(-np.pi, np.pi, (count, 1)) if q is None else np.full((count, 1), q),
                              rng.uniform(-1, 1, (count, 1)))
    a = Force(rng.uniform(-2, 2, (count, 1)))
    s_next, r, done, _ = env_step(PendulumParams(), states, a)
    buffer.add(Transition(states, a, s_next, r, np.zeros(count, dtype=bool)), 'env')
    return buffer


class DynaConfigTestCase(SimpleTestCase):
    def test_defaults(self):
        config = DynaConfig()
        self.assertEqual((config.env_threshold, config.loss_threshold, config.model_rounds, config.rollout_batch),
                         (1000, 0.1, 10, 32))
        self.assertEqual((config.rollout_horizon, config.eval_every, config.capacity), (5, 1000, 100000))
        self.assertFalse(config.physical_loss)
        self.assertEqual(config.lnn_arch.layer_widths, (2, 32, 32, 1))

    def test_validation(self):
        with self.assertRaises(PreconditionError):
            DynaConfig(episodes=0)
        with self.assertRaises(PreconditionError):
            DynaConfig(loss_threshold=-1.0)
        with self.assertRaises(PreconditionError):
            DynaConfig(mode='offline')

    def test_agent_limits_follow_pendulum(self):
        config = DynaConfig(pendulum=PendulumParams(torque_limit=1.0, speed_limit=4.0))
        self.assertEqual((config.agent_config.torque_limit, config.agent_config.speed_limit), (1.0, 4.0))

    def test_seed_streams(self):
        seeds = derive_seeds(5)
        self.assertEqual(seeds, derive_seeds(5))
        self.assertNotEqual(seeds, derive_seeds(6))
        self.assertEqual(len(set(seeds.values())), len(seeds))


class CollectRealTestCase(SimpleTestCase):
    def test_single_step(self):
        buffer = ReplayBuffer(10, 'env')
        env = PendulumEnv(SHORT, seed=1)
        self.assertEqual(collect_real(env, PolicyNet.initialize(TINY_AGENT), buffer, 1, rng=0), 1)
        self.assertEqual(len(buffer), 1)

    def test_rewards_and_resets(self):
        buffer = ReplayBuffer(500, 'env')
        env = PendulumEnv(SHORT, seed=2)
        collect_real(env, PolicyNet.initialize(TINY_AGENT, seed=2), buffer, 120, rng=2)
        self.assertEqual(env.t, 20)
        batch = buffer.contents()
        np.testing.assert_array_equal(batch.r, reward(batch.s, batch.a))
        self.assertEqual(int(np.sum(batch.done)), 2)
        self.assertTrue(np.all(np.abs(batch.a.a) <= SHORT.torque_limit))


class MaybeTrainModelTestCase(SimpleTestCase):
    def setUp(self):
        self.config = tiny_config(env_threshold=100, model_batch=100)
        self.model = ScalarNetwork.initialize(self.config.lnn_arch, seed=4)

    def test_gate_is_strict(self):
        buffer = filled_env_buffer(100)
        trainer = self.config.optimizer.make_trainer()
        with self.assertLogs('lagdyna.dyna.loop', 'INFO'):
            model, loss = maybe_train_model(buffer, self.model, trainer, self.config)
        self.assertIs(model, self.model)
        self.assertIsNone(loss)

    def test_trains_above_threshold(self):
        buffer = filled_env_buffer(101)
        model, loss = maybe_train_model(buffer, self.model, self.config.optimizer.make_trainer(), self.config)
        self.assertGreater(np.max(np.abs(model.weights - self.model.weights)), 0.0)
        self.assertTrue(np.isfinite(loss))

    def test_deterministic(self):
        losses = []
        for _ in range(2):
            buffer = filled_env_buffer(150, seed=3)
            trainer = OptimizerConfig().make_trainer(seed=9)
            losses.append(maybe_train_model(buffer, self.model, trainer, self.config)[1])
        self.assertEqual(losses[0], losses[1])


class ModelRolloutsTestCase(SimpleTestCase):
    def test_gate_closed(self):
        config = tiny_config(loss_threshold=0.1)
        env_buffer, model_buffer = filled_env_buffer(20), ReplayBuffer(100, 'model')
        for data_loss in (None, 0.1, 0.5):
            self.assertEqual(model_rollouts(PendulumParams().lagrangian(), quiet_policy(), env_buffer, model_buffer,
                                            config, data_loss, rng=0), (0, 0))
        self.assertEqual(len(model_buffer), 0)

    def test_counting(self):
        config = tiny_config(rollout_horizon=1, model_rounds=1, rollout_batch=5)
        model_buffer = ReplayBuffer(100, 'model')
        added, _ = model_rollouts(PendulumParams().lagrangian(), quiet_policy(), filled_env_buffer(20), model_buffer,
                                  config, 0.0, rng=0)
        self.assertLessEqual(added, 5)
        self.assertEqual(len(model_buffer), added)

    def test_stored_transitions(self):
        config = tiny_config()
        model_buffer = ReplayBuffer(100, 'model')
        added, blowups = model_rollouts(PendulumParams().lagrangian(), PolicyNet.initialize(TINY_AGENT),
                                        filled_env_buffer(20), model_buffer, config, 0.0, rng=1)
        self.assertEqual((added, blowups), (2 * 4 * 3, 0))
        batch = model_buffer.contents()
        self.assertFalse(np.any(batch.done))
        self.assertTrue(np.all((batch.s_next.q >= -np.pi) & (batch.s_next.q < np.pi)))
        np.testing.assert_array_equal(batch.r, reward(batch.s, batch.a))

    def test_analytic_model_matches_environment(self):
        params = PendulumParams()
        config = tiny_config(rollout_horizon=1, model_rounds=4, rollout_batch=25, pendulum=params)
        model_buffer = ReplayBuffer(200, 'model')
        model_rollouts(params.lagrangian(), quiet_policy(), filled_env_buffer(50, seed=5), model_buffer, config,
                       0.0, rng=5)
        batch = model_buffer.contents()
        self.assertEqual(len(batch), 100)
        env_next, _, _, _ = env_step(params, batch.s, batch.a)
        self.assertLess(np.max(np.abs(wrap_angle(batch.s_next.q - env_next.q))), 2e-2)
        self.assertLess(np.max(np.abs(batch.s_next.qdot - env_next.qdot)), 2e-2)

    def test_blowups_are_counted(self):
        config = tiny_config(model_rounds=2, rollout_batch=3)
        model_buffer = ReplayBuffer(100, 'model')
        with self.assertLogs('lagdyna.integrate.rk', 'WARNING'):
            added, blowups = model_rollouts(HarmonicLagrangian(1.0, 1e9), quiet_policy(), filled_env_buffer(10, q=1.0),
                                            model_buffer, config, 0.0, rng=0)
        self.assertEqual((added, blowups), (0, 6))
        self.assertEqual(len(model_buffer), 0)


class PhysicalLossUpdateTestCase(SimpleTestCase):
    def setUp(self):
        self.model = ScalarNetwork.initialize(NetworkArch((2, 6, 1)), seed=2)
        self.env_buffer = filled_env_buffer(20)
        self.pair = (GeneralizedState([[0.3]], [[0.5]]), Force([[0.4]]), GeneralizedState([[0.33]], [[0.6]]))
        self.model_buffer = ReplayBuffer(100, 'model')
        s, a, s_next = self.pair
        repeated = Transition(GeneralizedState(np.repeat(s.q, 12, 0), np.repeat(s.qdot, 12, 0)),
                              Force(np.repeat(a.a, 12, 0)),
                              GeneralizedState(np.repeat(s_next.q, 12, 0), np.repeat(s_next.qdot, 12, 0)),
                              np.zeros(12), np.zeros(12, dtype=bool))
        self.model_buffer.add(repeated, 'model')

    def config(self, **overrides):
        values = dict(physical_loss=True, physical_weight=0.5, env_threshold=10, model_threshold=10, physical_batch=4)
        values.update(overrides)
        return tiny_config(**values)

    def test_disabled_by_default(self):
        model, stepped = physical_loss_update(self.model, self.env_buffer, self.model_buffer, DynaConfig())
        self.assertIs(model, self.model)
        self.assertFalse(stepped)

    def test_zero_weight(self):
        model, stepped = physical_loss_update(self.model, self.env_buffer, self.model_buffer,
                                              self.config(physical_weight=0.0))
        self.assertIs(model, self.model)
        self.assertFalse(stepped)

    def test_gate(self):
        model, stepped = physical_loss_update(self.model, self.env_buffer, self.model_buffer,
                                              self.config(model_threshold=12))
        self.assertIs(model, self.model)

    def test_one_scaled_step(self):
        config = self.config()
        model, stepped = physical_loss_update(self.model, self.env_buffer, self.model_buffer, config)
        self.assertTrue(stepped)
        _, grad = physical_loss(self.model, *self.pair, config.pendulum.dt)
        expected = self.model.weights - config.optimizer.learning_rate * 0.5 * grad
        np.testing.assert_allclose(model.weights, expected, rtol=1e-10, atol=1e-14)

    def test_wrapped_pairs_are_skipped(self):
        crossing = Transition(GeneralizedState(np.full((12, 1), 3.1), np.full((12, 1), 4.0)),
                              Force(np.zeros((12, 1))),
                              GeneralizedState(np.full((12, 1), -3.0), np.full((12, 1), 4.0)), np.zeros(12),
                              np.zeros(12, dtype=bool))
        model_buffer = ReplayBuffer(100, 'model')
        model_buffer.add(crossing, 'model')
        with self.assertLogs('lagdyna.dyna.loop', 'WARNING'):
            model, stepped = physical_loss_update(self.model, self.env_buffer, model_buffer, self.config())
        self.assertIs(model, self.model)
        self.assertFalse(stepped)


class AgentUpdatesTestCase(SimpleTestCase):
    def test_runs_configured_updates(self):
        config = tiny_config()
        policy = PolicyNet.initialize(config.agent_config)
        critic = CriticNet.initialize(config.agent_config)
        policy, critic = agent_updates(policy, critic, filled_env_buffer(30), ReplayBuffer(10, 'model'), config, rng=0)
        self.assertEqual(critic.steps, TINY_AGENT.updates_per_episode)
        self.assertEqual(policy.adam.t, TINY_AGENT.updates_per_episode)


class RunTestCase(SimpleTestCase):
    def test_gates_never_open(self):
        config = tiny_config(episodes=1, steps_per_episode=1, env_threshold=10 ** 6, model_threshold=10 ** 6)
        report = run(config, 'lnn-adam')
        self.assertIsNone(report.error)
        self.assertEqual(report.env_steps, 1)
        self.assertEqual((report.model_updates, report.rollout_transitions, report.physical_updates), (0, 0, 0))
        self.assertEqual([steps for steps, _ in report.curve], [0])

    def test_model_based_run(self):
        report = run(tiny_config(), 'lnn-adam')
        self.assertIsNone(report.error)
        self.assertEqual(report.env_steps, 3 * 50)
        self.assertEqual(report.model_updates, 2)
        self.assertEqual(len(report.model_losses), 2)
        self.assertGreater(report.rollout_transitions + report.blowups, 0)
        self.assertEqual([steps for steps, _ in report.curve], [0, 50, 100, 150])
        self.assertTrue(all(value <= 0 for _, value in report.curve))
        self.assertEqual(sorted(report.networks), ['critic', 'model', 'policy'])

    def test_ekf_run(self):
        report = run(tiny_config(episodes=2, optimizer=OptimizerConfig(name='ekf')), 'lnn-ekf')
        self.assertIsNone(report.error)
        self.assertEqual(report.model_updates, 1)

    def test_model_free_skips_model(self):
        with mock.patch('lagdyna.dyna.loop.model_rollouts') as rollouts, \
                mock.patch('lagdyna.dyna.loop.maybe_train_model') as train:
            report = run(tiny_config(mode='mfrl'), 'mfrl')
        rollouts.assert_not_called()
        train.assert_not_called()
        self.assertEqual(report.rollout_transitions, 0)
        self.assertNotIn('model', report.networks)

    def test_env_steps_total(self):
        report = run(tiny_config(episodes=3, steps_per_episode=7, mode='mfrl', eval_every=10))
        self.assertEqual(report.env_steps, 21)
        self.assertEqual([steps for steps, _ in report.curve], [0, 14, 21])

    def test_reproducible(self):
        first, second = run(tiny_config()), run(tiny_config())
        self.assertEqual(first.curve, second.curve)
        self.assertEqual(first.model_losses, second.model_losses)
        np.testing.assert_array_equal(first.networks['policy'].weights, second.networks['policy'].weights)

    def test_error_gives_partial_report(self):
        with mock.patch('lagdyna.dyna.loop.critic_update', side_effect=TrainingDivergenceError("boom")):
            with self.assertLogs('lagdyna.dyna.loop', 'ERROR'):
                report = run(tiny_config(), 'lnn-adam')
        self.assertEqual(report.error, 'TrainingDivergenceError: boom')
        self.assertEqual(report.env_steps, 50)
        self.assertEqual(report.agent_updates, 0)
        self.assertEqual(len(report.curve), 1)
        self.assertIn('policy', report.networks)

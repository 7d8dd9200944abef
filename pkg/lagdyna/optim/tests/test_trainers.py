# -*- coding: utf-8 -*-
import os
import tempfile

import numpy as np
from django.test import SimpleTestCase

from lagdyna.exceptions import PreconditionError
from lagdyna.lnn.losses import AccelSamples, data_loss
from lagdyna.lnn.operator import accelerations
from lagdyna.nncore.network import NetworkArch, ScalarNetwork
from lagdyna.optim.adam import AdamState
from lagdyna.optim.ekf import GaussianWeightBelief
from lagdyna.optim.trainers import (AdamTrainer, EKFTrainer, OptimizerConfig, adam_train_epochs, ekf_train_epochs,
                                    passes_to_reach, write_loss_trace)


def initial_net(seed, widths=(2, 4, 1)):
    """Glorot initialization with positive output weights, so the velocity Hessian starts positive."""
    net = ScalarNetwork.initialize(NetworkArch(widths), seed=seed)
    weights = np.array(net.weights)
    out, inp = net.arch.layer_shapes[-1]
    weights[-(out * inp + out):-out] = np.abs(weights[-(out * inp + out):-out]) + 0.2
    return net.with_weights(weights)


def harmonic_samples(count, seed=0):
    """Unit oscillator qddot = -q + a."""
    rng = np.random.default_rng(seed)
    q, qdot, a = rng.uniform(-1, 1, size=(3, count, 1))
    return AccelSamples(q, qdot, a, -q + a)


class EKFTrainingTestCase(SimpleTestCase):
    def test_zero_residuals_keep_the_mean(self):
        net = initial_net(0)
        rng = np.random.default_rng(0)
        q, qdot, a = rng.uniform(-1, 1, size=(3, 40, 1))
        samples = AccelSamples(q, qdot, a, accelerations(net, q, qdot, a))
        belief = GaussianWeightBelief.from_weights(net.weights, process_noise=0.0)
        result = ekf_train_epochs(net, samples, belief, passes=2)
        self.assertLess(np.max(np.abs(result.network.weights - net.weights)), 1e-8)
        self.assertEqual(len(result.trace), 2)
        self.assertEqual(result.network.arch, net.arch)

    def test_preconditions(self):
        net = initial_net(0)
        belief = GaussianWeightBelief.from_weights(net.weights)
        with self.assertRaises(PreconditionError):
            ekf_train_epochs(net, harmonic_samples(10), belief, passes=0)
        with self.assertRaises(PreconditionError):
            ekf_train_epochs(net, harmonic_samples(10).subset(np.array([], dtype=int)), belief, passes=1)

    def test_faster_than_adam(self):
        samples = harmonic_samples(200)
        ekf_losses, adam_losses = [], []
        for seed in range(3):
            net = initial_net(seed)
            ekf = ekf_train_epochs(net, samples, GaussianWeightBelief.from_weights(net.weights), 5, seed=seed)
            adam = adam_train_epochs(net, samples, AdamState.zeros(net.arch.parameter_count), 5, seed=seed)
            ekf_losses.append(ekf.trace[-1])
            adam_losses.append(adam.trace[-1])
        self.assertLess(np.median(ekf_losses), np.median(adam_losses))


class AdamTrainingTestCase(SimpleTestCase):
    def test_loss_decreases(self):
        samples = harmonic_samples(128)
        net = initial_net(1)
        result = adam_train_epochs(net, samples, AdamState.zeros(net.arch.parameter_count, eta=1e-2), 20, 32)
        self.assertLess(result.trace[-1], data_loss(net, samples))

    def test_full_batch_takes_one_step_per_epoch(self):
        net = initial_net(2)
        result = adam_train_epochs(net, harmonic_samples(30), AdamState.zeros(net.arch.parameter_count), 3, 64)
        self.assertEqual(result.optimizer_state.t, 3)

    def test_deterministic(self):
        net, samples = initial_net(3), harmonic_samples(50)
        state = AdamState.zeros(net.arch.parameter_count, eta=1e-2)
        first = adam_train_epochs(net, samples, state, 4, 16, seed=9)
        second = adam_train_epochs(net, samples, state, 4, 16, seed=9)
        self.assertEqual(first.trace, second.trace)
        np.testing.assert_array_equal(first.network.weights, second.network.weights)

    def test_preconditions(self):
        net = initial_net(0)
        with self.assertRaises(PreconditionError):
            adam_train_epochs(net, harmonic_samples(10), AdamState.zeros(net.arch.parameter_count), 0)
        with self.assertRaises(PreconditionError):
            adam_train_epochs(net, harmonic_samples(10), AdamState.zeros(net.arch.parameter_count), 1, 0)


class TrainerTestCase(SimpleTestCase):
    def test_config_picks_the_trainer(self):
        self.assertIsInstance(OptimizerConfig('ekf').make_trainer(), EKFTrainer)
        self.assertIsInstance(OptimizerConfig().make_trainer(), AdamTrainer)
        with self.assertRaises(PreconditionError):
            OptimizerConfig('lbfgs')

    def test_adam_state_carries_over(self):
        trainer = OptimizerConfig(batch_size=16, epochs=2).make_trainer(seed=1)
        net, samples = initial_net(4), harmonic_samples(32)
        net = trainer.train(net, samples).network
        trainer.train(net, samples)
        self.assertEqual(trainer.state.t, 8)

    def test_ekf_warm_start(self):
        trainer = OptimizerConfig('ekf').make_trainer()
        net, samples = initial_net(5), harmonic_samples(20)
        first = trainer.train(net, samples)
        moved = first.network.with_weights(first.network.weights + 0.01)
        trainer.train(moved, samples)
        self.assertEqual(trainer.belief.size, net.arch.parameter_count)
        # The covariance keeps shrinking across calls.
        self.assertLess(np.trace(trainer.belief.cov), np.trace(first.optimizer_state.cov))


class TraceTestCase(SimpleTestCase):
    def test_passes_to_reach(self):
        self.assertEqual(passes_to_reach([1.0, 0.2, 0.04, 0.01], 0.05), 3)
        self.assertIsNone(passes_to_reach([1.0, 0.2], 0.05))

    def test_csv(self):
        with tempfile.TemporaryDirectory() as directory:
            path = write_loss_trace(os.path.join(directory, 'trace.csv'), [0.5, 0.25], config_hash='abc')
            with open(path) as fh:
                self.assertEqual(fh.read(), "# config_hash=abc\npass_index,loss\n0,0.500000\n1,0.250000\n")

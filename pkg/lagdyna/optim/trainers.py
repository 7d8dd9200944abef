# -*- coding: utf-8 -*-
"""Training loops for a network-backed Lagrangian model, one per optimizer.

Both loops only replace the weight vector of the network, the architecture never changes.
"""
import logging
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from lagdyna.exceptions import IllConditionedUpdateError, PreconditionError, SingularDynamicsError
from lagdyna.lnn.losses import data_loss, data_loss_grad
from lagdyna.lnn.operator import accelerations_with_jacobian
from lagdyna.optim.adam import AdamState, sgd_or_adam_step
from lagdyna.optim.ekf import GaussianWeightBelief, ekf_predict, ekf_update
from lagdyna.tools import write_csv

logger = logging.getLogger(__name__)

OPTIMIZERS = ('adam', 'ekf')

TrainingResult = namedtuple('TrainingResult', ['network', 'trace', 'optimizer_state'])


def _check_run(samples, count, what):
    if len(samples) == 0:
        raise PreconditionError("cannot train on an empty dataset")
    if count < 1:
        raise PreconditionError("%s must be at least 1, got %d" % (what, count))


def ekf_train_epochs(net, samples, belief, passes, seed=0, shuffle=True):
    """Sequential per-sample predict/update passes over the dataset.

    Every update relinearizes the acceleration operator at the current mean. After each pass the
    data loss on the full dataset is appended to the trace. The final network carries the last
    posterior mean.
    """
    _check_run(samples, passes, 'passes')
    rng = np.random.default_rng(seed)
    trace = []
    for index in range(passes):
        order = rng.permutation(len(samples)) if shuffle else np.arange(len(samples))
        for i in order:
            belief = ekf_predict(belief)
            try:
                y_pred, H = accelerations_with_jacobian(net, samples.q[i:i + 1], samples.qdot[i:i + 1],
                                                        samples.a[i:i + 1])
                belief = ekf_update(belief, H[0], samples.y[i], y_pred[0], sample=int(i))
            except SingularDynamicsError as exc:
                raise SingularDynamicsError(exc.condition, "%s at sample %d" % (exc, i)) from exc
            net = net.with_weights(belief.mean)
        trace.append(data_loss(net, samples))
        logger.debug("EKF pass %d: loss %.6g, trace(P) %.6g", index, trace[-1], np.trace(belief.cov))
    return TrainingResult(net, trace, belief)


def adam_train_epochs(net, samples, state, epochs, batch_size=64, seed=0):
    """Mini-batch epochs, batches drawn without replacement from a seeded shuffle."""
    _check_run(samples, epochs, 'epochs')
    if batch_size < 1:
        raise PreconditionError("batch size must be at least 1, got %d" % batch_size)
    rng = np.random.default_rng(seed)
    trace = []
    for index in range(epochs):
        order = rng.permutation(len(samples))
        for start in range(0, len(samples), batch_size):
            _, grad = data_loss_grad(net, samples.subset(order[start:start + batch_size]))
            state, weights = sgd_or_adam_step(state, net.weights, grad)
            net = net.with_weights(weights)
        trace.append(data_loss(net, samples))
        logger.debug("%s epoch %d: loss %.6g", state.mode, index, trace[-1])
    return TrainingResult(net, trace, state)


def passes_to_reach(trace, level):
    """1-based index of the first trace entry below ``level``, None if it is never reached."""
    for index, loss in enumerate(trace):
        if loss < level:
            return index + 1
    return None


def write_loss_trace(path, trace, config_hash=None):
    return write_csv(path, ['pass_index', 'loss'], [(i, float(loss)) for i, loss in enumerate(trace)], config_hash)


@dataclass(frozen=True)
class OptimizerConfig:
    """Hyperparameters of both model optimizers. Only the fields of ``name`` are used."""
    name: str = 'adam'
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    batch_size: int = 64
    epochs: int = 1
    initial_cov: float = 0.1
    process_noise: float = 1e-6
    meas_noise: float = 0.05
    passes: int = 1

    def __post_init__(self):
        if self.name not in OPTIMIZERS:
            raise PreconditionError("unknown optimizer %r, expected one of %s" % (self.name, OPTIMIZERS))

    def make_trainer(self, seed=0):
        if self.name == 'ekf':
            return EKFTrainer(self, seed)
        return AdamTrainer(self, seed)


class ModelTrainer(object):
    """Trains a model network repeatedly, keeping optimizer state between calls.

    Each call warm-starts from the weights of the network it is given.
    """
    name = None

    def __init__(self, config, seed=0):
        self.config = config
        self.seed = seed
        self.calls = 0

    def _next_seed(self):
        self.calls += 1
        return self.seed + self.calls

    def train(self, net, samples):
        raise NotImplementedError


class AdamTrainer(ModelTrainer):
    name = 'adam'

    def __init__(self, config, seed=0):
        super().__init__(config, seed)
        self.state = None

    def train(self, net, samples):
        if self.state is None or self.state.m.shape != net.weights.shape:
            c = self.config
            self.state = AdamState.zeros(net.arch.parameter_count, eta=c.learning_rate, beta1=c.beta1,
                                         beta2=c.beta2, eps=c.eps)
        result = adam_train_epochs(net, samples, self.state, self.config.epochs, self.config.batch_size,
                                   seed=self._next_seed())
        self.state = result.optimizer_state
        return result


class EKFTrainer(ModelTrainer):
    name = 'ekf'

    def __init__(self, config, seed=0):
        super().__init__(config, seed)
        self.belief = None

    def train(self, net, samples):
        c = self.config
        if self.belief is None or self.belief.size != net.arch.parameter_count:
            self.belief = GaussianWeightBelief.from_weights(net.weights, c.initial_cov, c.process_noise, c.meas_noise)
        else:
            # Keep the posterior covariance, but the network may have moved since the last call.
            self.belief = GaussianWeightBelief(np.array(net.weights), self.belief.cov, c.process_noise, c.meas_noise)
        try:
            result = ekf_train_epochs(net, samples, self.belief, c.passes, seed=self._next_seed())
        except IllConditionedUpdateError:
            logger.warning("EKF update ill-conditioned, covariance is reset on the next call")
            self.belief = None
            raise
        self.belief = result.optimizer_state
        return result

# -*- coding: utf-8 -*-
"""Model-learning losses on top of the acceleration operator.

The data loss compares predicted accelerations with measured ones. The physical loss is the
squared Euler-Lagrange residual along a pair of consecutive states, with the time derivative of
the generalized momentum dL/dqdot taken as a finite difference.
"""
from dataclasses import dataclass

import numpy as np

from lagdyna.exceptions import InputShapeError, PreconditionError, TrainingDivergenceError
from lagdyna.lnn.operator import AccelLinearization, accelerations
from lagdyna.nncore.network import jets_backprop


@dataclass(frozen=True)
class AccelSamples:
    """Supervised samples (q, qdot, a) -> y, every array of shape (N, n).

    y is the measured acceleration in rad/s^2 for the pendulum.
    """
    q: np.ndarray
    qdot: np.ndarray
    a: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in ('q', 'qdot', 'a', 'y'):
            value = np.asarray(getattr(self, name), dtype=float)
            if value.ndim == 1:
                value = value[:, None]
            arrays[name] = value
        shapes = {value.shape for value in arrays.values()}
        if len(shapes) != 1 or arrays['q'].ndim != 2:
            raise InputShapeError("sample arrays differ in shape: %s" % sorted(shapes))
        for name, value in arrays.items():
            object.__setattr__(self, name, value)

    def __len__(self):
        return self.q.shape[0]

    @property
    def dof(self):
        return self.q.shape[1]

    def subset(self, indices):
        return AccelSamples(self.q[indices], self.qdot[indices], self.a[indices], self.y[indices])

    def split(self, fraction, seed=0):
        """Shuffled (train, held-out) split with ``fraction`` of the samples held out."""
        order = np.random.default_rng(seed).permutation(len(self))
        cut = len(self) - int(round(fraction * len(self)))
        return self.subset(order[:cut]), self.subset(order[cut:])

    def target_variance(self):
        """Variance of the targets summed over coordinates, the scale of a normalized loss."""
        return float(np.sum(np.var(self.y, axis=0)))


def _require_samples(samples):
    if len(samples) == 0:
        raise PreconditionError("the loss needs at least one sample")


def data_loss(model, samples):
    """Mean squared acceleration error (1/N) sum_i |y_i - G(q_i, qdot_i, a_i)|^2."""
    _require_samples(samples)
    predicted = accelerations(model, samples.q, samples.qdot, samples.a)
    return float(np.mean(np.sum((samples.y - predicted) ** 2, axis=1)))


def data_loss_grad(net, samples):
    """The data loss of a network-backed model together with its gradient w.r.t. the weights."""
    _require_samples(samples)
    N = len(samples)
    lin = AccelLinearization(net, samples.q, samples.qdot, samples.a)
    error = lin.acc - samples.y
    grad = lin.pullback(2.0 * error / N)
    loss = float(np.mean(np.sum(error ** 2, axis=1)))
    if not (np.isfinite(loss) and np.all(np.isfinite(grad))):
        raise TrainingDivergenceError("data loss or its gradient is not finite")
    return loss, grad


def rmse(model, samples):
    """Root mean squared acceleration error over all samples and coordinates."""
    _require_samples(samples)
    predicted = accelerations(model, samples.q, samples.qdot, samples.a)
    return float(np.sqrt(np.mean((samples.y - predicted) ** 2)))


def _pair_arrays(s, f, s_next, dt):
    if not dt > 0:
        raise PreconditionError("time step must be positive, got %r" % dt)
    q, qdot = np.atleast_2d(s.q), np.atleast_2d(s.qdot)
    q_next, qdot_next = np.atleast_2d(s_next.q), np.atleast_2d(s_next.qdot)
    a = np.atleast_2d(f.a)
    if not (q.shape == q_next.shape == a.shape):
        raise InputShapeError("states %s, next states %s and forces %s differ in shape"
                              % (q.shape, q_next.shape, a.shape))
    if q.shape[0] == 0:
        raise PreconditionError("the residual needs at least one pair of consecutive states")
    return (np.concatenate([q, qdot], axis=1), np.concatenate([q_next, qdot_next], axis=1), a, q.shape[1])


def physical_residual(model, s, f, s_next, dt):
    """Squared Euler-Lagrange residual |(p(s_next) - p(s))/dt - dL/dq(s) - a|^2 with p = dL/dqdot.

    Returns a float for a single pair of states and an array of shape (batch,) for batches.
    """
    x, x_next, a, n = _pair_arrays(s, f, s_next, dt)
    _, g, _ = model.input_jets(x)
    _, g_next, _ = model.input_jets(x_next)
    residual = (g_next[:, n:] - g[:, n:]) / dt - g[:, :n] - a
    squared = np.sum(residual ** 2, axis=1)
    return squared if s.is_batch else float(squared[0])


def physical_loss(net, s, f, s_next, dt):
    """Mean squared residual over a batch of consecutive pairs and its gradient w.r.t. the weights."""
    x, x_next, a, n = _pair_arrays(s, f, s_next, dt)
    B = x.shape[0]
    _, g, _ = net.input_jets(x)
    _, g_next, _ = net.input_jets(x_next)
    residual = (g_next[:, n:] - g[:, n:]) / dt - g[:, :n] - a
    loss = float(np.mean(np.sum(residual ** 2, axis=1)))
    rbar = 2.0 * residual / B
    grad = (jets_backprop(net, x_next, np.concatenate([np.zeros_like(rbar), rbar / dt], axis=1))
            + jets_backprop(net, x, np.concatenate([-rbar, -rbar / dt], axis=1)))
    if not (np.isfinite(loss) and np.all(np.isfinite(grad))):
        raise TrainingDivergenceError("physical loss or its gradient is not finite")
    return loss, grad

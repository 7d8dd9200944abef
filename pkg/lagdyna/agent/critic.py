# -*- coding: utf-8 -*-
"""State-action critic V(s, a) trained on one-step temporal-difference targets.

The network sees (q / pi, qdot / speed_limit, a / torque_limit) and its output is multiplied by
``value_scale``. Bootstrapped targets use a copy of the network refreshed every
``target_every`` updates.
"""
from dataclasses import dataclass, replace

import numpy as np

from lagdyna.exceptions import PreconditionError, TrainingDivergenceError
from lagdyna.nncore.network import NetworkArch, ScalarNetwork, backprop, forward
from lagdyna.optim.adam import AdamState, sgd_or_adam_step


@dataclass(frozen=True, eq=False)
class CriticNet:
    q_net: ScalarNetwork
    target_net: ScalarNetwork
    config: object
    adam: AdamState = None
    steps: int = 0

    @classmethod
    def initialize(cls, config, seed=0, dof=1):
        arch = NetworkArch((3 * dof,) + tuple(config.hidden) + (1,), config.activation)
        net = ScalarNetwork.initialize(arch, seed, output_gain=config.output_gain)
        adam = AdamState.zeros(net.weights.size, eta=config.critic_lr) if config.critic_lr > 0 else None
        return cls(net, net, config, adam)

    @property
    def gamma(self):
        return self.config.gamma

    def inputs(self, s, a):
        q, qdot, a = np.atleast_2d(s.q), np.atleast_2d(s.qdot), np.atleast_2d(a.a)
        return np.concatenate([q / np.pi, qdot / self.config.speed_limit, a / self.config.torque_limit], axis=1)

    def _evaluate(self, net, s, a):
        v = self.config.value_scale * forward(net, self.inputs(s, a))
        return v if s.is_batch else float(v[0])

    def value(self, s, a):
        return self._evaluate(self.q_net, s, a)

    def target_value(self, s, a):
        return self._evaluate(self.target_net, s, a)


def critic_target(r, s_next, policy, critic, done=None):
    """r + gamma * V_target(s_next, deterministic policy action), without bootstrap on done."""
    r = np.asarray(r, dtype=float)
    if critic.gamma == 0:
        return r
    bootstrap = critic.target_value(s_next, policy.deterministic_action(s_next))
    if done is not None:
        bootstrap = np.where(np.asarray(done, dtype=bool), 0.0, bootstrap)
    return r + critic.gamma * bootstrap


def critic_loss_grad(critic, s, a, targets):
    """Mean squared TD error against fixed targets and its gradient w.r.t. the critic weights."""
    x = critic.inputs(s, a)
    scale = critic.config.value_scale
    error = scale * forward(critic.q_net, x) - targets
    grad = backprop(critic.q_net, x, 2.0 * scale * error / error.size)
    return float(np.mean(error ** 2)), grad


def critic_update(critic, batch, policy):
    """One gradient step on the TD loss of a batch. Returns (CriticNet, loss after the step)."""
    if len(batch) == 0:
        raise PreconditionError("critic update needs a nonempty batch")
    targets = np.atleast_1d(critic_target(batch.r, batch.s_next, policy, critic, batch.done))
    loss, grad = critic_loss_grad(critic, batch.s, batch.a, targets)
    if not np.isfinite(loss):
        raise TrainingDivergenceError("critic TD loss is not finite")
    if critic.adam is None:
        return critic, loss
    adam, weights = sgd_or_adam_step(critic.adam, critic.q_net.weights, grad)
    q_net = critic.q_net.with_weights(weights)
    steps = critic.steps + 1
    target_net = q_net if steps % critic.config.target_every == 0 else critic.target_net
    updated = replace(critic, q_net=q_net, target_net=target_net, adam=adam, steps=steps)
    post_loss, _ = critic_loss_grad(updated, batch.s, batch.a, targets)
    return updated, post_loss

# -*- coding: utf-8 -*-
"""Gaussian policy squashed into the torque limits.

The mean network sees (q / pi, qdot / speed_limit). Actions are a = torque_limit * tanh(u) with
u ~ N(mean, exp(log_std)^2), so they never leave the limits.
"""
from dataclasses import dataclass, replace

import numpy as np

from lagdyna.agent.config import AgentConfig
from lagdyna.exceptions import TrainingDivergenceError
from lagdyna.nncore.network import NetworkArch, ScalarNetwork, backprop, forward
from lagdyna.optim.adam import AdamState, sgd_or_adam_step
from lagdyna.state import Force

LOG_2PI = np.log(2 * np.pi)


def scale_state(s, speed_limit):
    q, qdot = np.atleast_2d(s.q), np.atleast_2d(s.qdot)
    return np.concatenate([q / np.pi, qdot / speed_limit], axis=1)


def log_squash_jacobian(u, limit):
    """log |d/du limit * tanh(u)|, stable for large |u|."""
    return np.log(limit) + 2.0 * (np.log(2.0) - u - np.logaddexp(0.0, -2.0 * u))


@dataclass(frozen=True, eq=False)
class PolicyNet:
    mean_net: ScalarNetwork
    log_std: float
    config: AgentConfig
    adam: AdamState = None

    @classmethod
    def initialize(cls, config, seed=0, dof=1):
        arch = NetworkArch((2 * dof,) + tuple(config.hidden) + (1,), config.activation)
        net = ScalarNetwork.initialize(arch, seed, output_gain=config.output_gain)
        adam = AdamState.zeros(net.weights.size + 1, eta=config.actor_lr) if config.actor_lr > 0 else None
        return cls(net, float(config.initial_log_std), config, adam)

    @property
    def std(self):
        return float(np.exp(self.log_std))

    def pre_squash_mean(self, s):
        return forward(self.mean_net, scale_state(s, self.config.speed_limit))

    def deterministic_action(self, s):
        """Squashed mean action as a Force shaped like ``s.q``."""
        a = self.config.torque_limit * np.tanh(self.pre_squash_mean(s))[:, None]
        return Force(a if s.is_batch else a[0])


def act(policy, s, stochastic=True, rng=None):
    """Draw an action for a state or a batch of states. Returns (Force, log-density).

    The log-density is that of the squashed action, i.e. the Gaussian density of u minus the
    log-Jacobian of the squash. In deterministic mode u is the mean.
    """
    mean = policy.pre_squash_mean(s)
    std = policy.std
    if stochastic:
        u = mean + std * np.random.default_rng(rng).standard_normal(mean.shape)
    else:
        u = mean
    limit = policy.config.torque_limit
    gaussian = -0.5 * ((u - mean) / std) ** 2 - policy.log_std - 0.5 * LOG_2PI
    logprob = gaussian - log_squash_jacobian(u, limit)
    a = (limit * np.tanh(u))[:, None]
    if s.is_batch:
        return Force(a), logprob
    return Force(a[0]), float(logprob[0])


def actor_gradient(policy, states, critic, rng=None):
    """Score-function estimate of the gradient of E[V(s, a)] w.r.t. (mean weights, log_std).

    Returns (objective, gradient) where objective is the batch mean of V(s, a) over freshly
    sampled actions.
    """
    x = scale_state(states, policy.config.speed_limit)
    mean = forward(policy.mean_net, x)
    std = policy.std
    noise = np.random.default_rng(rng).standard_normal(mean.shape)
    u = mean + std * noise
    limit = policy.config.torque_limit
    actions = Force((limit * np.tanh(u))[:, None])
    values = np.atleast_1d(critic.value(states, actions))
    weight = values
    if policy.config.baseline:
        weight = values - np.atleast_1d(critic.value(states, policy.deterministic_action(states)))
    B = mean.size
    # d/dmean log N(u; mean, std^2) = noise / std, d/dlog_std = noise^2 - 1
    grad_mean = backprop(policy.mean_net, x, weight * noise / std / B)
    grad_log_std = float(np.mean(weight * (noise ** 2 - 1.0)))
    return float(np.mean(values)), np.concatenate([grad_mean, [grad_log_std]])


def actor_update(policy, states, critic, rng=None):
    """One ascent step on the sampled policy-gradient objective. Returns (PolicyNet, objective)."""
    objective, grad = actor_gradient(policy, states, critic, rng)
    if not np.isfinite(objective):
        raise TrainingDivergenceError("actor objective is not finite")
    if policy.adam is None:
        return policy, objective
    params = np.concatenate([policy.mean_net.weights, [policy.log_std]])
    adam, params = sgd_or_adam_step(policy.adam, params, -grad)
    log_std = float(np.clip(params[-1], policy.config.min_log_std, policy.config.max_log_std))
    return replace(policy, mean_net=policy.mean_net.with_weights(params[:-1]), log_std=log_std, adam=adam), objective

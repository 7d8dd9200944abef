# -*- coding: utf-8 -*-
import numpy as np

from lagdyna.agent.policy import act
from lagdyna.envs.pendulum import PendulumEnv
from lagdyna.exceptions import PreconditionError


def _episode(env, policy, params, initial_state=None):
    s = env.reset(initial_state)
    transitions = []
    for _ in range(params.horizon):
        a, _ = act(policy, s, stochastic=False)
        transitions.append(env.step(a))
        s = transitions[-1].s_next
    return transitions


def evaluate_policy(policy, params, episodes, seed, initial_state=None):
    """Average undiscounted return of the deterministic policy over full-horizon episodes.

    Episodes start from seeded draws of the initial-state distribution, or all from
    ``initial_state`` when one is given.
    """
    if episodes < 1:
        raise PreconditionError("evaluation needs at least one episode")
    env = PendulumEnv(params, seed)
    returns = [sum(tr.r for tr in _episode(env, policy, params, initial_state)) for _ in range(episodes)]
    return float(np.mean(returns))


def evaluation_episode(policy, params, seed, initial_state=None):
    """Transitions of the first episode ``evaluate_policy`` plays with the same seed."""
    return _episode(PendulumEnv(params, seed), policy, params, initial_state)

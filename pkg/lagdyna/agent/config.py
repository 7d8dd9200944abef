# -*- coding: utf-8 -*-
from dataclasses import dataclass

from lagdyna.exceptions import PreconditionError


@dataclass(frozen=True)
class AgentConfig:
    """Sizes and step sizes of the policy and the critic.

    ``torque_limit`` and ``speed_limit`` scale the network inputs and squash the actions, they
    are normally taken from the environment.
    """
    hidden: tuple = (64, 64)
    activation: str = 'tanh'
    actor_lr: float = 1e-4
    critic_lr: float = 1e-3
    gamma: float = 0.99
    target_every: int = 200
    initial_log_std: float = 0.0
    min_log_std: float = -5.0
    max_log_std: float = 2.0
    value_scale: float = 100.0
    output_gain: float = 0.01
    baseline: bool = False
    torque_limit: float = 2.0
    speed_limit: float = 8.0
    updates_per_episode: int = 200
    batch_size: int = 64

    def __post_init__(self):
        if not 0 <= self.gamma < 1:
            raise PreconditionError("discount must lie in [0, 1), got %r" % self.gamma)
        if self.actor_lr < 0 or self.critic_lr < 0:
            raise PreconditionError("learning rates must not be negative")
        if not self.min_log_std <= self.initial_log_std <= self.max_log_std:
            raise PreconditionError("initial log std %r outside [%r, %r]"
                                    % (self.initial_log_std, self.min_log_std, self.max_log_std))
        if self.target_every < 1 or self.batch_size < 1 or self.updates_per_episode < 0:
            raise PreconditionError("target period and batch size must be positive")

# -*- coding: utf-8 -*-
"""Results of one Dyna run and their files on disk."""
import os
from dataclasses import dataclass, field

from lagdyna.envs.pendulum import write_trajectory
from lagdyna.nncore.checkpoint import save_checkpoint
from lagdyna.optim.trainers import write_loss_trace
from lagdyna.tools import write_csv

METRICS_HEADER = ['variant', 'seed', 'env_steps', 'avg_return']
METRICS_FILE = 'metrics.csv'
METADATA_FILE = 'metadata.txt'
MODEL_LOSS_FILE = 'model_loss.csv'
TRAJECTORY_FILE = 'trajectory.csv'


@dataclass
class RunReport:
    """Evaluation curve, counters and final networks of one run.

    ``curve`` holds (env_steps, avg_return) pairs. ``networks`` maps a checkpoint role
    (``model``, ``policy``, ``critic``) to its final ScalarNetwork. ``error`` is set when the
    run was aborted, everything else then describes the work done up to that point. ``trajectory``
    holds the transitions of one deterministic evaluation episode of the final policy.
    """
    variant: str = ''
    seed: int = 0
    curve: list = field(default_factory=list)
    env_steps: int = 0
    model_updates: int = 0
    rollout_transitions: int = 0
    blowups: int = 0
    physical_updates: int = 0
    agent_updates: int = 0
    model_losses: list = field(default_factory=list)
    networks: dict = field(default_factory=dict)
    policy_log_std: float = None
    trajectory: list = field(default_factory=list)
    error: str = None

    @property
    def completed(self):
        return self.error is None

    def metrics_rows(self):
        return [(self.variant, self.seed, steps, float(value)) for steps, value in self.curve]

    def counters(self):
        items = [
            ('run.env_steps', self.env_steps),
            ('run.model_updates', self.model_updates),
            ('run.rollout_transitions', self.rollout_transitions),
            ('run.blowups', self.blowups),
            ('run.physical_updates', self.physical_updates),
            ('run.agent_updates', self.agent_updates),
            ('run.policy_log_std', self.policy_log_std),
            ('run.error', self.error or ''),
        ]
        return items

    def write(self, directory, metadata_items=(), config_hash=None):
        """Write metrics.csv, metadata.txt, trajectory.csv, model_loss.csv and one LNN1 checkpoint per network."""
        os.makedirs(directory, exist_ok=True)
        write_csv(os.path.join(directory, METRICS_FILE), METRICS_HEADER, self.metrics_rows(), config_hash)
        lines = ['config_hash=%s' % (config_hash or '')]
        lines.extend('%s=%s' % (key, value) for key, value in list(metadata_items) + self.counters())
        with open(os.path.join(directory, METADATA_FILE), 'w') as fh:
            fh.write('\n'.join(lines) + '\n')
        if self.trajectory:
            write_trajectory(os.path.join(directory, TRAJECTORY_FILE), self.trajectory, config_hash)
        if self.model_losses:
            write_loss_trace(os.path.join(directory, MODEL_LOSS_FILE), self.model_losses, config_hash)
        for role, net in sorted(self.networks.items()):
            save_checkpoint(os.path.join(directory, '%s.lnn1' % role), net, role)
        return directory

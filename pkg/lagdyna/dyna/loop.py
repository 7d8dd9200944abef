# -*- coding: utf-8 -*-
"""The Dyna loop: real data collection, gated model training, model rollouts, optional
physical-loss steps and actor-critic updates on the union of both replay buffers.

Every gate is strict and logged at INFO with the quantities it compared.
"""
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from lagdyna.agent.config import AgentConfig
from lagdyna.agent.critic import CriticNet, critic_update
from lagdyna.agent.evaluation import evaluate_policy, evaluation_episode
from lagdyna.agent.policy import PolicyNet, act, actor_update
from lagdyna.dyna.buffer import ReplayBuffer, TransitionBatch, sample_union
from lagdyna.dyna.report import RunReport
from lagdyna.envs.pendulum import PendulumEnv, PendulumParams, accel_targets, reward, wrap_angle
from lagdyna.exceptions import LagdynaError, PreconditionError, SingularDynamicsError
from lagdyna.integrate.rk import StepSpec, rollout
from lagdyna.lnn.losses import physical_loss
from lagdyna.lnn.operator import accel
from lagdyna.nncore.network import NetworkArch, ScalarNetwork
from lagdyna.optim.adam import AdamState, sgd_or_adam_step
from lagdyna.optim.trainers import OptimizerConfig
from lagdyna.state import GeneralizedState

logger = logging.getLogger(__name__)

MODES = ('mbrl', 'mfrl')

#: Independent random streams of one run, all derived from the run seed.
SEED_STREAMS = ('env', 'env_buffer', 'model_buffer', 'model', 'policy', 'critic', 'actions', 'trainer',
                'evaluation')


@dataclass(frozen=True)
class DynaConfig:
    """Loop bounds, gates and the configuration of every component of a run.

    ``model_rounds`` rollout rounds of ``rollout_batch`` start states each run for
    ``rollout_horizon`` model steps. ``loss_threshold`` applies to the data loss divided by the
    variance of the acceleration targets. In ``mfrl`` mode every model operation is skipped.
    """
    episodes: int = 300
    steps_per_episode: int = 200
    mode: str = 'mbrl'
    model_rounds: int = 10
    rollout_batch: int = 32
    rollout_horizon: int = 5
    env_threshold: int = 1000
    model_threshold: int = 1000
    loss_threshold: float = 0.1
    model_every: int = 1
    model_batch: int = 1000
    physical_loss: bool = False
    physical_weight: float = 0.1
    physical_batch: int = 64
    eval_every: int = 1000
    eval_episodes: int = 5
    capacity: int = 100000
    seed: int = 0
    lnn_hidden: tuple = (32, 32)
    lnn_activation: str = 'softplus'
    pendulum: PendulumParams = field(default_factory=PendulumParams)
    agent: AgentConfig = field(default_factory=AgentConfig)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)

    def __post_init__(self):
        if self.mode not in MODES:
            raise PreconditionError("unknown mode %r, expected one of %s" % (self.mode, MODES))
        counts = ('episodes', 'steps_per_episode', 'model_rounds', 'rollout_batch', 'rollout_horizon',
                  'model_every', 'model_batch', 'physical_batch', 'eval_every', 'eval_episodes', 'capacity')
        for name in counts:
            if getattr(self, name) < 1:
                raise PreconditionError("%s must be positive, got %r" % (name, getattr(self, name)))
        for name in ('env_threshold', 'model_threshold', 'loss_threshold', 'physical_weight'):
            if getattr(self, name) < 0:
                raise PreconditionError("%s must not be negative, got %r" % (name, getattr(self, name)))

    @property
    def model_based(self):
        return self.mode == 'mbrl'

    @property
    def lnn_arch(self):
        return NetworkArch((2,) + tuple(self.lnn_hidden) + (1,), self.lnn_activation)

    @property
    def agent_config(self):
        """The agent configuration with the limits of the pendulum."""
        return replace(self.agent, torque_limit=self.pendulum.torque_limit, speed_limit=self.pendulum.speed_limit)


def derive_seeds(seed):
    state = np.random.SeedSequence(seed).generate_state(len(SEED_STREAMS))
    return dict(zip(SEED_STREAMS, (int(value) for value in state)))


def collect_real(env, policy, buffer, steps, rng=None):
    """Take ``steps`` environment steps with the stochastic policy and store every transition.

    The environment is reset whenever an episode ends. Returns the number of steps taken.
    """
    rng = np.random.default_rng(rng)
    if env.state is None:
        env.reset()
    for _ in range(steps):
        a, _ = act(policy, env.state, rng=rng)
        transition = env.step(a)
        buffer.add(transition, 'env')
        if transition.done:
            env.reset()
    return steps


def maybe_train_model(env_buffer, model, trainer, config):
    """Train the model on a sample of real transitions once the buffer holds more than
    ``env_threshold`` of them.

    Returns (model, loss) with the post-training data loss divided by the target variance, or
    (model, None) while the gate is closed.
    """
    if len(env_buffer) <= config.env_threshold:
        logger.info("model training gate closed: %d env transitions, threshold %d", len(env_buffer),
                    config.env_threshold)
        return model, None
    batch = env_buffer.sample(config.model_batch, replace=False)
    samples = accel_targets(batch, config.pendulum)
    result = trainer.train(model, samples)
    variance = samples.target_variance() or 1.0
    loss = result.trace[-1] / variance
    logger.info("model trained with %s on %d samples: data loss %.6g, normalized %.6g",
                trainer.name, len(samples), result.trace[-1], loss)
    return result.network, loss


def _model_accel(model):
    def accel_fn(s, f):
        try:
            return accel(model, s, f)
        except SingularDynamicsError as exc:
            logger.warning("model rollout step dropped: %s", exc)
            return np.full(s.q.shape, np.nan)
    return accel_fn


def model_rollouts(model, policy, env_buffer, model_buffer, config, data_loss, rng=None):
    """Roll the model forward from sampled start states and store the transitions in ``model_buffer``.

    Runs only while ``data_loss`` is below ``loss_threshold``. Start states come from both
    buffers, or from the real one while the model buffer is empty. Angles are wrapped before
    storing, rewards are computed from the reward function and no model transition ends an
    episode. Rows that blow up keep the steps they completed. Returns (transitions added, blowups).
    """
    if data_loss is None or not data_loss < config.loss_threshold:
        logger.info("model rollout gate closed: data loss %s, threshold %g", data_loss, config.loss_threshold)
        return 0, 0
    rng = np.random.default_rng(rng)
    spec = StepSpec(config.pendulum.dt)
    accel_fn = _model_accel(model)

    def policy_fn(s):
        return act(policy, s, rng=rng)[0]

    added = blowups = 0
    for _ in range(config.model_rounds):
        starts = sample_union(env_buffer, model_buffer, config.rollout_batch).s
        result = rollout(accel_fn, policy_fn, starts, config.rollout_horizon, spec)
        for s, f, s_next in result.transitions:
            s = GeneralizedState(wrap_angle(s.q), s.qdot)
            s_next = GeneralizedState(wrap_angle(s_next.q), s_next.qdot)
            r = reward(s, f)
            added += model_buffer.add(TransitionBatch(s, f, s_next, r, np.zeros(r.shape, dtype=bool)), 'model')
        blowups += result.blowups
    logger.info("model rollout gate open (data loss %.6g < %g): %d transitions stored, %d blowups",
                data_loss, config.loss_threshold, added, blowups)
    return added, blowups


def physical_loss_update(model, env_buffer, model_buffer, config):
    """One SGD step on ``physical_weight`` times the Euler-Lagrange residual loss over sampled
    model transitions. Pairs that cross the angle wrap are not consecutive and are left out.

    Returns (model, whether a step was taken).
    """
    if not config.physical_loss or config.physical_weight == 0:
        return model, False
    if len(env_buffer) <= config.env_threshold or len(model_buffer) <= config.model_threshold:
        logger.info("physical loss gate closed: %d env and %d model transitions, thresholds %d and %d",
                    len(env_buffer), len(model_buffer), config.env_threshold, config.model_threshold)
        return model, False
    batch = model_buffer.sample(config.physical_batch)
    keep = np.all(np.abs(batch.s_next.q - batch.s.q) < np.pi, axis=1)
    if not keep.any():
        logger.warning("physical loss skipped: none of %d sampled model transitions is a consecutive pair",
                       len(batch))
        return model, False
    pairs = batch.subset(keep)
    loss, grad = physical_loss(model, pairs.s, pairs.a, pairs.s_next, config.pendulum.dt)
    state = AdamState.zeros(grad.size, eta=config.optimizer.learning_rate * config.physical_weight, mode='sgd')
    _, weights = sgd_or_adam_step(state, model.weights, grad)
    logger.info("physical loss gate open: residual %.6g on %d pairs", loss, len(pairs))
    return model.with_weights(weights), True


def agent_updates(policy, critic, env_buffer, model_buffer, config, rng=None):
    """``updates_per_episode`` critic then actor steps on batches drawn from both buffers."""
    rng = np.random.default_rng(rng)
    for _ in range(config.agent.updates_per_episode):
        batch = sample_union(env_buffer, model_buffer, config.agent.batch_size)
        critic, _ = critic_update(critic, batch, policy)
        policy, _ = actor_update(policy, batch.s, critic, rng)
    return policy, critic


def run(config, variant=''):
    """Run the whole loop for ``config.episodes`` episodes and return its RunReport.

    The policy is evaluated before training and whenever another ``eval_every`` env steps have
    passed. A LagdynaError ends the run early, the report then carries the error and everything
    done until then.
    """
    seeds = derive_seeds(config.seed)
    params = config.pendulum
    agent_config = config.agent_config
    report = RunReport(variant=variant, seed=config.seed)
    env = PendulumEnv(params, seeds['env'])
    env_buffer = ReplayBuffer(config.capacity, 'env', seed=seeds['env_buffer'])
    model_buffer = ReplayBuffer(config.capacity, 'model', seed=seeds['model_buffer'])
    policy = PolicyNet.initialize(agent_config, seeds['policy'])
    critic = CriticNet.initialize(agent_config, seeds['critic'])
    model = ScalarNetwork.initialize(config.lnn_arch, seeds['model'])
    trainer = config.optimizer.make_trainer(seeds['trainer'])
    rng = np.random.default_rng(seeds['actions'])
    data_loss = None

    def evaluate():
        value = evaluate_policy(policy, params, config.eval_episodes, seeds['evaluation'])
        report.curve.append((report.env_steps, value))
        logger.info("%d env steps: average return %.3f", report.env_steps, value)

    logger.info("run %s seed %d: %s mode, %d episodes of %d steps, %s model optimizer", variant or '-',
                config.seed, config.mode, config.episodes, config.steps_per_episode, trainer.name)
    try:
        evaluate()
        for episode in range(config.episodes):
            report.env_steps += collect_real(env, policy, env_buffer, config.steps_per_episode, rng)
            if config.model_based:
                if episode % config.model_every == 0:
                    trained, loss = maybe_train_model(env_buffer, model, trainer, config)
                    if loss is not None:
                        model, data_loss = trained, loss
                        report.model_updates += 1
                        report.model_losses.append(loss)
                added, blowups = model_rollouts(model, policy, env_buffer, model_buffer, config, data_loss, rng)
                report.rollout_transitions += added
                report.blowups += blowups
                model, stepped = physical_loss_update(model, env_buffer, model_buffer, config)
                report.physical_updates += int(stepped)
            policy, critic = agent_updates(policy, critic, env_buffer, model_buffer, config, rng)
            report.agent_updates += config.agent.updates_per_episode
            if report.env_steps // config.eval_every > report.curve[-1][0] // config.eval_every:
                evaluate()
        report.trajectory = evaluation_episode(policy, params, seeds['evaluation'])
    except LagdynaError as exc:
        logger.exception("run %s seed %d aborted after %d env steps", variant or '-', config.seed, report.env_steps)
        report.error = "%s: %s" % (type(exc).__name__, exc)
    report.networks = {'policy': policy.mean_net, 'critic': critic.q_net}
    if config.model_based:
        report.networks['model'] = model
    report.policy_log_std = policy.log_std
    return report

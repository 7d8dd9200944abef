# -*- coding: utf-8 -*-
"""Torque-controlled pendulum, a uniform rod pivoting at one end, with q = 0 upright.

The dynamics and constants follow the classic control swing-up task: semi-implicit Euler steps
of qddot = 3g/(2l) sin q + 3/(m l^2) a, with the torque and the angular speed clamped.
"""
import logging
from dataclasses import dataclass

import numpy as np

from lagdyna.exceptions import DomainError, InsufficientDataError, PreconditionError
from lagdyna.lnn.analytic import PendulumLagrangian
from lagdyna.lnn.losses import AccelSamples
from lagdyna.state import Force, GeneralizedState
from lagdyna.tools import write_csv

logger = logging.getLogger(__name__)

TRAJECTORY_HEADER = ['t', 'q', 'qdot', 'a', 'r', 'done']


@dataclass(frozen=True)
class PendulumParams:
    """Physical constants in SI units, the step size dt in seconds and the episode length in steps."""
    mass: float = 1.0
    length: float = 1.0
    gravity: float = 10.0
    dt: float = 0.05
    torque_limit: float = 2.0
    speed_limit: float = 8.0
    horizon: int = 200

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not (np.isfinite(value) and value > 0):
                raise PreconditionError("pendulum parameter %s must be positive, got %r" % (name, value))

    @property
    def inertia(self):
        return self.mass * self.length ** 2 / 3.0

    def lagrangian(self):
        """The analytic Lagrangian of these dynamics."""
        return PendulumLagrangian.rod(self.mass, self.length, self.gravity)


@dataclass(frozen=True)
class Transition:
    """One step (s, a, s_next, r, done). The fields may also hold aligned batches."""
    s: GeneralizedState
    a: Force
    s_next: GeneralizedState
    r: object
    done: object


def wrap_angle(q):
    """Map angles to [-pi, pi). Values already inside are returned unchanged."""
    q = np.asarray(q, dtype=float)
    wrapped = np.mod(q + np.pi, 2 * np.pi) - np.pi
    wrapped = np.where(wrapped >= np.pi, -np.pi, wrapped)
    result = np.where((q >= -np.pi) & (q < np.pi), q, wrapped)
    return float(result) if result.ndim == 0 else result


def reward(s, a):
    """-(q^2 + 0.1 qdot^2 + 0.001 a^2), summed over coordinates. Zero only upright at rest without torque."""
    q, qdot, a = np.asarray(s.q), np.asarray(s.qdot), np.asarray(a.a)
    r = -np.sum(q ** 2 + 0.1 * qdot ** 2 + 0.001 * a ** 2, axis=-1)
    return float(r) if np.ndim(r) == 0 else r


def ground_truth_accel(params, q, a):
    return 1.5 * params.gravity / params.length * np.sin(q) + 3.0 / (params.mass * params.length ** 2) * a


def energy(params, s):
    """Kinetic plus potential energy of the rod, zero potential at the pivot height."""
    half_weight = 0.5 * params.mass * params.gravity * params.length
    return 0.5 * params.inertia * np.sum(np.asarray(s.qdot) ** 2, axis=-1) + half_weight * np.sum(np.cos(s.q), axis=-1)


def reset(params, rng):
    """Initial state q ~ U(-pi, pi), qdot ~ U(-1, 1). ``rng`` is a seed or a numpy Generator."""
    rng = np.random.default_rng(rng)
    return GeneralizedState(rng.uniform(-np.pi, np.pi, 1), rng.uniform(-1.0, 1.0, 1))


def clamp_torque(params, a_raw):
    return np.clip(np.asarray(a_raw, dtype=float), -params.torque_limit, params.torque_limit)


def env_step(params, s, a_raw, t=0):
    """One environment step from s at step index t. Returns (s_next, r, done, applied force)."""
    a = clamp_torque(params, a_raw.a if isinstance(a_raw, Force) else a_raw)
    if not (s.is_finite() and np.all(np.isfinite(a))):
        raise DomainError("pendulum state or torque is not finite: s=%s a=%s" % (s, a))
    force = Force(np.broadcast_to(a, s.q.shape).copy())
    qdot_next = np.clip(s.qdot + ground_truth_accel(params, s.q, force.a) * params.dt,
                        -params.speed_limit, params.speed_limit)
    q_next = wrap_angle(s.q + qdot_next * params.dt)
    r = reward(s, force)
    return GeneralizedState(q_next, qdot_next), r, t + 1 >= params.horizon, force


class PendulumEnv(object):
    """Stateful wrapper that counts steps and ends an episode after ``params.horizon`` steps."""

    def __init__(self, params=None, seed=0):
        self.params = params or PendulumParams()
        self.rng = np.random.default_rng(seed)
        self.state = None
        self.t = 0

    def reset(self, state=None):
        self.state = state if state is not None else reset(self.params, self.rng)
        self.t = 0
        return self.state

    def step(self, a_raw):
        if self.state is None:
            raise PreconditionError("reset the environment before stepping it")
        s_next, r, done, force = env_step(self.params, self.state, a_raw, self.t)
        transition = Transition(self.state, force, s_next, r, done)
        self.state = s_next
        self.t += 1
        return transition


def stack_transitions(transitions):
    """Join a list of single transitions into one batched Transition."""
    if not transitions:
        return None
    return Transition(
        GeneralizedState(np.stack([tr.s.q for tr in transitions]), np.stack([tr.s.qdot for tr in transitions])),
        Force(np.stack([tr.a.a for tr in transitions])),
        GeneralizedState(np.stack([tr.s_next.q for tr in transitions]),
                         np.stack([tr.s_next.qdot for tr in transitions])),
        np.array([tr.r for tr in transitions], dtype=float),
        np.array([tr.done for tr in transitions], dtype=bool),
    )


def accel_targets(transitions, params):
    """Acceleration samples y = (qdot_next - qdot) / dt from consecutive states.

    ``transitions`` is a list of Transition or one batched Transition. Samples whose next
    velocity sits at the speed clamp are dropped, the clamp hides their true acceleration.
    """
    if isinstance(transitions, (list, tuple)):
        transitions = stack_transitions(list(transitions))
    if transitions is None:
        raise InsufficientDataError("no transitions to extract acceleration targets from")
    q = np.atleast_2d(transitions.s.q)
    qdot = np.atleast_2d(transitions.s.qdot)
    qdot_next = np.atleast_2d(transitions.s_next.qdot)
    a = np.atleast_2d(transitions.a.a)
    keep = np.all(np.abs(qdot_next) < params.speed_limit, axis=1)
    if not keep.any():
        raise InsufficientDataError("all %d transitions hit the speed limit" % keep.size)
    if not keep.all():
        logger.debug("dropped %d of %d transitions at the speed limit", np.sum(~keep), keep.size)
    y = (qdot_next[keep] - qdot[keep]) / params.dt
    return AccelSamples(q[keep], qdot[keep], a[keep], y)


def write_trajectory(path, transitions, config_hash=None):
    """Dump one episode as CSV rows (t, q, qdot, a, r, done) of the single-coordinate pendulum."""
    rows = [(t, float(tr.s.q[0]), float(tr.s.qdot[0]), float(tr.a.a[0]), float(tr.r), int(bool(tr.done)))
            for t, tr in enumerate(transitions)]
    return write_csv(path, TRAJECTORY_HEADER, rows, config_hash)

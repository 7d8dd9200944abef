# -*- coding: utf-8 -*-
"""Two-stage Runge-Kutta stepping and rollouts of a second-order system qddot = G(q, qdot, a).

The state (q, qdot) is advanced as a first-order system. With the selection C = [0 I]

    k1 = (qdot, G(s, a))
    k2 = (qdot + c dt k1_qdot, G(s + c dt k1, a))
    s' = s + dt (b1 k1 + b2 k2)

The force a is held constant over a step.
"""
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from lagdyna.exceptions import IntegrationBlowupError, PreconditionError
from lagdyna.state import Force, GeneralizedState

logger = logging.getLogger(__name__)

#: Any state component beyond this magnitude counts as a blowup.
BLOWUP_LIMIT = 1e6


@dataclass(frozen=True)
class RKCoefficients:
    """Node c and weights b1, b2 of an explicit two-stage method."""
    c: float = 2.0 / 3.0
    b1: float = 0.25
    b2: float = 0.75

    def satisfies_order_conditions(self, tol=1e-12):
        """True when b1 + b2 = 1 and b2 c = 1/2, i.e. the method is second order."""
        return abs(self.b1 + self.b2 - 1.0) <= tol and abs(self.b2 * self.c - 0.5) <= tol


@dataclass(frozen=True)
class StepSpec:
    dt: float
    coeffs: RKCoefficients = field(default_factory=RKCoefficients)

    def __post_init__(self):
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise PreconditionError("step size must be finite and positive, got %r" % self.dt)

    def halved(self):
        return replace(self, dt=self.dt / 2.0)


def _bad_rows(*arrays):
    bad = np.zeros(arrays[0].shape[0], dtype=bool)
    for array in arrays:
        bad |= ~np.all(np.isfinite(array) & (np.abs(array) <= BLOWUP_LIMIT), axis=1)
    return bad


def _rk2_arrays(accel_fn, q, qdot, a, spec):
    """One step on (batch, n) arrays. Returns the new arrays, a mask of blown rows and the stage
    where the first blowup was seen. Blown rows are reset to their start state between stages so
    accel_fn only ever sees finite input."""
    c, b1, b2 = spec.coeffs.c, spec.coeffs.b1, spec.coeffs.b2
    dt = spec.dt
    stage = None

    acc1 = np.asarray(accel_fn(GeneralizedState(q, qdot), Force(a)), dtype=float).reshape(q.shape)
    q_mid = q + c * dt * qdot
    qdot_mid = qdot + c * dt * acc1
    bad = _bad_rows(acc1, q_mid, qdot_mid)
    if bad.any():
        stage = 'k1'
        q_mid = np.where(bad[:, None], q, q_mid)
        qdot_mid = np.where(bad[:, None], qdot, qdot_mid)

    acc2 = np.asarray(accel_fn(GeneralizedState(q_mid, qdot_mid), Force(a)), dtype=float).reshape(q.shape)
    k2_bad = _bad_rows(acc2) & ~bad
    if k2_bad.any() and stage is None:
        stage = 'k2'
    bad |= k2_bad

    q_next = q + dt * (b1 * qdot + b2 * qdot_mid)
    qdot_next = qdot + dt * (b1 * acc1 + b2 * acc2)
    update_bad = _bad_rows(q_next, qdot_next) & ~bad
    if update_bad.any() and stage is None:
        stage = 'update'
    bad |= update_bad
    return q_next, qdot_next, bad, stage


def rk2_step(accel_fn, s, f, spec):
    """Advance a state (or a batch of states) by one step of size ``spec.dt``.

    ``accel_fn(state, force)`` is always called with batch states of shape (batch, n) and returns
    qddot of the same shape. Raises IntegrationBlowupError naming the stage when any component
    turns non-finite or exceeds BLOWUP_LIMIT.
    """
    q, qdot = np.atleast_2d(s.q), np.atleast_2d(s.qdot)
    a = np.broadcast_to(np.atleast_2d(f.a), q.shape)
    if _bad_rows(q, qdot).any():
        raise IntegrationBlowupError('start')
    q_next, qdot_next, bad, stage = _rk2_arrays(accel_fn, q, qdot, a, spec)
    if bad.any():
        raise IntegrationBlowupError(stage)
    if s.is_batch:
        return GeneralizedState(q_next, qdot_next)
    return GeneralizedState(q_next[0], qdot_next[0])


@dataclass
class RolloutResult:
    """Transitions (s, f, s_next) per step over the rows that were still alive at that step.

    ``rows[k]`` holds the indices into the start batch of the rows in ``transitions[k]``. Rows
    that blow up are dropped, ``error`` keeps the first blowup.
    """
    transitions: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    blowups: int = 0
    error: IntegrationBlowupError = None

    def __len__(self):
        return len(self.transitions)

    @property
    def truncated(self):
        return self.error is not None


def _first_row(item):
    if isinstance(item, Force):
        return Force(item.a[0])
    return GeneralizedState(item.q[0], item.qdot[0])


def rollout(accel_fn, policy_fn, s0, steps, spec):
    """Integrate ``steps`` steps from s0, asking ``policy_fn(state)`` for the force once per step.

    For a batch s0 each row evolves independently and a row that blows up ends its own
    trajectory. For a single state the rollout stops at the first blowup.
    """
    if steps < 1:
        raise PreconditionError("a rollout needs at least one step, got %d" % steps)
    single = not s0.is_batch
    q, qdot = np.atleast_2d(s0.q), np.atleast_2d(s0.qdot)
    rows = np.arange(q.shape[0])
    result = RolloutResult()
    for step in range(steps):
        if rows.size == 0:
            break
        state = GeneralizedState(q, qdot)
        force = policy_fn(state if not single else GeneralizedState(q[0], qdot[0]))
        a = np.broadcast_to(np.atleast_2d(force.a), q.shape).astype(float)
        q_next, qdot_next, bad, stage = _rk2_arrays(accel_fn, q, qdot, a, spec)
        if bad.any():
            result.blowups += int(bad.sum())
            if result.error is None:
                result.error = IntegrationBlowupError(stage, "rollout blew up at step %d, stage %s" % (step, stage))
            logger.warning("rollout step %d: %d of %d rows blew up at stage %s", step, bad.sum(), rows.size, stage)
        keep = ~bad
        if keep.any():
            transition = (GeneralizedState(q[keep], qdot[keep]), Force(a[keep]),
                          GeneralizedState(q_next[keep], qdot_next[keep]))
            if single:
                transition = tuple(_first_row(item) for item in transition)
            result.transitions.append(transition)
            result.rows.append(rows[keep])
        q, qdot, rows = q_next[keep], qdot_next[keep], rows[keep]
    return result


def endpoint_error(accel_fn, s0, exact, duration, spec):
    """Max-norm distance between the unforced numerical solution after ``duration`` and ``exact``."""
    steps = int(round(duration / spec.dt))
    s = s0
    for _ in range(steps):
        s = rk2_step(accel_fn, s, Force(np.zeros_like(s.q)), spec)
    return float(max(np.max(np.abs(s.q - exact.q)), np.max(np.abs(s.qdot - exact.qdot))))


def empirical_order(accel_fn, s0, exact, duration, spec):
    """log2 of the error ratio between step sizes dt and dt/2. Close to 2 for a second-order method."""
    coarse = endpoint_error(accel_fn, s0, exact, duration, spec)
    fine = endpoint_error(accel_fn, s0, exact, duration, spec.halved())
    return float(np.log2(coarse / fine))

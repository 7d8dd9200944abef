# -*- coding: utf-8 -*-
"""Generalized coordinates shared by the model, the integrator and the environment."""
from dataclasses import dataclass

import numpy as np

from lagdyna.exceptions import InputShapeError


@dataclass(frozen=True)
class GeneralizedState:
    """Position q and velocity qdot of a mechanical system.

    Both arrays have the shape ``(n,)`` for a single state or ``(batch, n)`` for a batch of
    states. For the pendulum n is 1, q is the angle in radians (0 is upright) and qdot is the
    angular velocity in rad/s.
    """
    q: np.ndarray
    qdot: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        qdot = np.asarray(self.qdot, dtype=float)
        if q.ndim == 0:
            q = q.reshape(1)
        if qdot.ndim == 0:
            qdot = qdot.reshape(1)
        if q.shape != qdot.shape:
            raise InputShapeError("q has shape %s but qdot has shape %s" % (q.shape, qdot.shape))
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'qdot', qdot)

    @property
    def dof(self):
        """Number of degrees of freedom n."""
        return self.q.shape[-1]

    @property
    def is_batch(self):
        return self.q.ndim == 2

    def as_vector(self):
        """The network input (q, qdot), concatenated along the last axis."""
        return np.concatenate([self.q, self.qdot], axis=-1)

    def is_finite(self):
        return bool(np.all(np.isfinite(self.q)) and np.all(np.isfinite(self.qdot)))


@dataclass(frozen=True)
class Force:
    """Generalized external force (torque for the pendulum, N m), shape ``(n,)`` or ``(batch, n)``."""
    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if a.ndim == 0:
            a = a.reshape(1)
        object.__setattr__(self, 'a', a)

    @classmethod
    def zero_like(cls, state):
        return cls(np.zeros_like(state.q))

# -*- coding: utf-8 -*-
"""Closed-form Lagrangians. They serve as oracles for the learned model and as ground truth."""
import numpy as np


class AnalyticLagrangian(object):
    """Base class. Subclasses implement ``input_jets`` on a batch of (q, qdot) rows."""

    def input_jets(self, x):
        raise NotImplementedError

    def _single(self, x, index):
        x = np.asarray(x, dtype=float)
        value = self.input_jets(np.atleast_2d(x))[index]
        return value[0] if x.ndim == 1 else value

    def forward(self, x):
        value = self._single(x, 0)
        return float(value) if np.ndim(value) == 0 else value

    def grad_x(self, x):
        return self._single(x, 1)

    def hess_x(self, x):
        return self._single(x, 2)


class HarmonicLagrangian(AnalyticLagrangian):
    """L = m/2 |qdot|^2 - k/2 |q|^2 in any number of dimensions."""

    def __init__(self, mass=1.0, stiffness=1.0):
        self.mass = mass
        self.stiffness = stiffness

    def input_jets(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        B, d = x.shape
        n = d // 2
        q, qdot = x[:, :n], x[:, n:]
        f = 0.5 * self.mass * np.sum(qdot ** 2, axis=1) - 0.5 * self.stiffness * np.sum(q ** 2, axis=1)
        g = np.concatenate([-self.stiffness * q, self.mass * qdot], axis=1)
        diag = np.concatenate([np.full(n, -self.stiffness), np.full(n, self.mass)])
        H = np.broadcast_to(np.diag(diag), (B, d, d)).copy()
        return f, g, H


class PendulumLagrangian(AnalyticLagrangian):
    """L = I/2 qdot^2 - V cos q for a one-degree-of-freedom pendulum with q = 0 upright.

    The Euler-Lagrange acceleration is qddot = (a + V sin q) / I.
    """

    def __init__(self, inertia, potential):
        self.inertia = inertia
        self.potential = potential

    @classmethod
    def point_mass(cls, mass=1.0, length=1.0, gravity=10.0):
        return cls(mass * length ** 2, mass * gravity * length)

    @classmethod
    def rod(cls, mass=1.0, length=1.0, gravity=10.0):
        """Uniform rod pivoting at one end, the ground truth of the pendulum environment."""
        return cls(mass * length ** 2 / 3.0, mass * gravity * length / 2.0)

    def acceleration(self, q, a):
        return (a + self.potential * np.sin(q)) / self.inertia

    def input_jets(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        q, qdot = x[:, 0], x[:, 1]
        f = 0.5 * self.inertia * qdot ** 2 - self.potential * np.cos(q)
        g = np.stack([self.potential * np.sin(q), self.inertia * qdot], axis=1)
        H = np.zeros((x.shape[0], 2, 2))
        H[:, 0, 0] = self.potential * np.cos(q)
        H[:, 1, 1] = self.inertia
        return f, g, H

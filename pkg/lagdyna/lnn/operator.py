# -*- coding: utf-8 -*-
"""The Euler-Lagrange acceleration operator with external forcing.

For a Lagrangian L(q, qdot) and a generalized force a the acceleration is

    qddot = M^-1 (a + dL/dq - d2L/(dqdot dq) qdot),   M = d2L/dqdot2

where every derivative comes from the gradient and Hessian of L on the concatenated input
(q, qdot). The system is solved in Tikhonov form, (M^T M + eps^2 I) qddot = M^T rhs, so it stays
defined while a learned velocity Hessian is still close to singular.
"""
from typing import Protocol

import numpy as np

from lagdyna.exceptions import DomainError, InputShapeError, PreconditionError, SingularDynamicsError
from lagdyna.nncore.network import ScalarNetwork, jets_backprop

#: Tikhonov damping eps: the regularizer eps I on the velocity Hessian.
DAMPING = 1e-6
#: Largest condition number of the regularized velocity Hessian that is still solved.
MAX_CONDITION = 1e12


class LagrangianModel(Protocol):
    def input_jets(self, x):
        """Value, gradient and Hessian of L on a batch of (q, qdot) rows."""


def _batch_arrays(q, qdot, a):
    q = np.atleast_2d(np.asarray(q, dtype=float))
    qdot = np.atleast_2d(np.asarray(qdot, dtype=float))
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if not (q.shape == qdot.shape == a.shape):
        raise InputShapeError("q %s, qdot %s and force %s shapes differ" % (q.shape, qdot.shape, a.shape))
    if not (np.all(np.isfinite(q)) and np.all(np.isfinite(qdot)) and np.all(np.isfinite(a))):
        raise DomainError("state or force contains non-finite values")
    return q, qdot, a


def _velocity_system(g, H, qdot, a, damping):
    """Tikhonov-regularized velocity system N x = M^T rhs with N = M^T M + damping^2 I.

    The singular values of the regularized Hessian are sqrt(s^2 + damping^2), so its condition
    number is the square root of the condition number of N.
    """
    n = qdot.shape[1]
    M = H[:, n:, n:]
    rhs = a + g[:, :n] - np.einsum('bij,bj->bi', H[:, n:, :n], qdot)
    N = np.swapaxes(M, 1, 2) @ M + damping ** 2 * np.eye(n)
    condition = np.sqrt(np.linalg.cond(N))
    worst = np.max(np.where(np.isnan(condition), np.inf, condition))
    if worst > MAX_CONDITION:
        raise SingularDynamicsError(float(worst))
    return M, N, rhs


def _solve(M, N, rhs):
    return np.linalg.solve(N, np.einsum('bji,bj->bi', M, rhs)[..., None])[..., 0]


def accelerations(model, q, qdot, a, damping=DAMPING):
    """Batched operator: arrays of shape (batch, n) in, accelerations of shape (batch, n) out."""
    q, qdot, a = _batch_arrays(q, qdot, a)
    _, g, H = model.input_jets(np.concatenate([q, qdot], axis=1))
    return _solve(*_velocity_system(g, H, qdot, a, damping))


def accel(model, s, f, damping=DAMPING):
    """Acceleration qddot of a GeneralizedState under a Force, in rad/s^2 for the pendulum."""
    result = accelerations(model, s.q, s.qdot, f.a, damping)
    return result if s.is_batch else result[0]


class AccelLinearization(object):
    """The operator at a batch of inputs of a network, ready to pull cotangents back to the weights.

    ``acc`` holds the accelerations of shape (batch, n).
    """

    def __init__(self, net, q, qdot, a, damping=DAMPING):
        if not isinstance(net, ScalarNetwork):
            raise PreconditionError("weight derivatives need a model backed by a ScalarNetwork")
        q, qdot, a = _batch_arrays(q, qdot, a)
        self.net = net
        self.qdot = qdot
        self.x = np.concatenate([q, qdot], axis=1)
        _, g, H = net.input_jets(self.x)
        self.M, self.N, self.rhs = _velocity_system(g, H, qdot, a, damping)
        self.acc = _solve(self.M, self.N, self.rhs)
        self.residual = self.rhs - np.einsum('bij,bj->bi', self.M, self.acc)

    def pullback(self, out_grad, per_sample=False):
        """Weight gradient of sum_b <out_grad[b], acc[b]>.

        From N d acc = dM^T (rhs - M acc) + M^T (d rhs - dM acc), with lam = N^-1 out_grad and
        mu = M lam the cotangents land on dL/dq and on two blocks of the Hessian of L.
        """
        out_grad = np.asarray(out_grad, dtype=float)
        if out_grad.shape != self.acc.shape:
            raise InputShapeError("cotangent shape %s differs from accelerations %s"
                                  % (out_grad.shape, self.acc.shape))
        B, n = self.acc.shape
        lam = np.linalg.solve(self.N, out_grad[..., None])[..., 0]
        mu = np.einsum('bij,bj->bi', self.M, lam)
        grad_cot = np.zeros((B, 2 * n))
        grad_cot[:, :n] = mu
        hess_cot = np.zeros((B, 2 * n, 2 * n))
        hess_cot[:, n:, n:] = self.residual[:, :, None] * lam[:, None, :] - mu[:, :, None] * self.acc[:, None, :]
        hess_cot[:, n:, :n] = -mu[:, :, None] * self.qdot[:, None, :]
        return jets_backprop(self.net, self.x, grad_cot, hess_cot, per_sample=per_sample)


def accelerations_with_jacobian(net, q, qdot, a, damping=DAMPING):
    """Accelerations (batch, n) and their Jacobians w.r.t. the network weights (batch, n, P).

    One reverse pass per coordinate.
    """
    lin = AccelLinearization(net, q, qdot, a, damping)
    B, n = lin.acc.shape
    rows = [lin.pullback(np.broadcast_to(np.eye(n)[i], (B, n)), per_sample=True) for i in range(n)]
    return lin.acc, np.stack(rows, axis=1)


def accel_jac_weights(net, s, f, damping=DAMPING):
    """Jacobian of accel w.r.t. the flat weight vector: (n, P), or (batch, n, P) for a batch."""
    _, jac = accelerations_with_jacobian(net, s.q, s.qdot, f.a, damping)
    return jac if s.is_batch else jac[0]

# -*- coding: utf-8 -*-
"""Extended Kalman filter over network weights.

The weights follow a random walk w_k = w_{k-1} + mu with mu ~ N(0, Q) and every sample is a
measurement y = h(w) + nu with nu ~ N(0, R). The covariance P is dense.
"""
from dataclasses import dataclass, replace

import numpy as np
from scipy import linalg

from lagdyna.exceptions import CovarianceError, IllConditionedUpdateError, InputShapeError

#: Largest condition number of the innovation covariance that is still inverted.
MAX_CONDITION = 1e12
#: Most negative eigenvalue a covariance may show before it counts as indefinite.
EIGENVALUE_FLOOR = -1e-8


def symmetrize(P):
    return 0.5 * (P + P.T)


@dataclass(frozen=True, eq=False)
class GaussianWeightBelief:
    """Mean and covariance of the weights, together with the process noise Q and measurement
    noise R. Q and R are matrices or scalars meaning scalar * I."""
    mean: np.ndarray
    cov: np.ndarray
    process_noise: object = 1e-6
    meas_noise: object = 0.05

    @classmethod
    def from_weights(cls, weights, initial_cov=0.1, process_noise=1e-6, meas_noise=0.05):
        weights = np.array(weights, dtype=float)
        return cls(weights, initial_cov * np.eye(weights.size), process_noise, meas_noise)

    @property
    def size(self):
        return self.mean.size

    def process_matrix(self):
        Q = np.asarray(self.process_noise, dtype=float)
        return Q * np.eye(self.size) if Q.ndim == 0 else Q

    def meas_matrix(self, n):
        R = np.asarray(self.meas_noise, dtype=float)
        return R * np.eye(n) if R.ndim == 0 else R


def _check_psd(name, M, tol):
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise CovarianceError("%s must be a square matrix, got shape %s" % (name, M.shape))
    if not np.all(np.isfinite(M)):
        raise CovarianceError("%s contains non-finite values" % name)
    if np.max(np.abs(M - M.T), initial=0.0) > tol * max(1.0, np.max(np.abs(M), initial=0.0)):
        raise CovarianceError("%s is not symmetric" % name)
    smallest = np.min(np.linalg.eigvalsh(symmetrize(M)), initial=0.0)
    if smallest < EIGENVALUE_FLOOR:
        raise CovarianceError("%s is not positive semidefinite (smallest eigenvalue %.3e)" % (name, smallest))


def validate_belief(b, tol=1e-10):
    """Raise CovarianceError unless P, Q and R are symmetric positive semidefinite."""
    if b.cov.shape != (b.size, b.size):
        raise InputShapeError("covariance has shape %s for %d weights" % (b.cov.shape, b.size))
    _check_psd('P', b.cov, tol)
    _check_psd('Q', b.process_matrix(), tol)
    R = np.asarray(b.meas_noise, dtype=float)
    if R.ndim == 0:
        if R < 0:
            raise CovarianceError("R must be non-negative, got %r" % float(R))
    else:
        _check_psd('R', R, tol)
    return b


def ekf_predict(b):
    """Random-walk prediction: the mean stays, the covariance grows by Q."""
    return replace(b, cov=symmetrize(b.cov + b.process_matrix()))


def ekf_update(b, H, y, y_pred, sample=None):
    """Measurement update with Jacobian H (n x P), measurement y and prediction y_pred = h(mean).

    K = P H^T (H P H^T + R)^-1, mean += K (y - y_pred), P = (I - K H) P symmetrized.
    """
    H = np.atleast_2d(np.asarray(H, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    y_pred = np.atleast_1d(np.asarray(y_pred, dtype=float))
    n = H.shape[0]
    if H.shape[1] != b.size or y.shape != (n,) or y_pred.shape != (n,):
        raise InputShapeError("Jacobian %s, measurement %s and prediction %s do not fit %d weights"
                              % (H.shape, y.shape, y_pred.shape, b.size))
    HP = H @ b.cov
    S = symmetrize(HP @ H.T + b.meas_matrix(n))
    condition = np.linalg.cond(S)
    if not condition <= MAX_CONDITION:
        raise IllConditionedUpdateError(float(condition), sample)
    # S K^T = H P, since P and S are symmetric
    K = linalg.solve(S, HP, assume_a='pos').T
    mean = b.mean + K @ (y - y_pred)
    cov = symmetrize(b.cov - K @ HP)
    return replace(b, mean=mean, cov=cov)

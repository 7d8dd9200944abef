# -*- coding: utf-8 -*-
"""Plain SGD and Adam steps on a flat weight vector."""
from dataclasses import dataclass, replace

import numpy as np

from lagdyna.exceptions import InputShapeError, PreconditionError, TrainingDivergenceError

MODES = ('adam', 'sgd')


@dataclass(frozen=True, eq=False)
class AdamState:
    """First and second moment estimates, step counter and hyperparameters.

    In ``sgd`` mode the moments are carried along unused.
    """
    m: np.ndarray
    v: np.ndarray
    t: int = 0
    eta: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    mode: str = 'adam'

    def __post_init__(self):
        if self.mode not in MODES:
            raise PreconditionError("unknown optimizer mode %r, expected one of %s" % (self.mode, MODES))
        if not self.eta > 0:
            raise PreconditionError("learning rate must be positive, got %r" % self.eta)
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise PreconditionError("moment decay rates must lie in [0, 1)")
        if self.t < 0:
            raise PreconditionError("step counter must be non-negative")
        if np.shape(self.m) != np.shape(self.v):
            raise InputShapeError("moment vectors differ in shape")

    @classmethod
    def zeros(cls, size, **kwargs):
        return cls(np.zeros(size), np.zeros(size), **kwargs)


def sgd_or_adam_step(state, w, grad):
    """One descent step. Returns the new state and the new weights, the inputs stay untouched."""
    w = np.asarray(w, dtype=float)
    grad = np.asarray(grad, dtype=float)
    if w.shape != grad.shape or w.shape != np.shape(state.m):
        raise InputShapeError("weights %s, gradient %s and moments %s differ in shape"
                              % (w.shape, grad.shape, np.shape(state.m)))
    if not np.all(np.isfinite(grad)):
        raise TrainingDivergenceError("gradient contains non-finite values")
    t = state.t + 1
    if state.mode == 'sgd':
        return replace(state, t=t), w - state.eta * grad
    m = state.beta1 * state.m + (1.0 - state.beta1) * grad
    v = state.beta2 * state.v + (1.0 - state.beta2) * grad ** 2
    m_hat = m / (1.0 - state.beta1 ** t)
    v_hat = v / (1.0 - state.beta2 ** t)
    return replace(state, m=m, v=v, t=t), w - state.eta * m_hat / (np.sqrt(v_hat) + state.eps)

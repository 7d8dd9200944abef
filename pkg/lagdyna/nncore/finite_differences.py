# -*- coding: utf-8 -*-
"""Central finite differences, the oracle every exact derivative in lagdyna is checked against."""
import numpy as np


def _steps(x, rel_step):
    return rel_step * (1.0 + np.abs(x))


def central_jacobian(f, x, rel_step=1e-5):
    """Jacobian of a vector (or scalar) function f at x, shape (len(f(x)), len(x))."""
    x = np.asarray(x, dtype=float)
    steps = _steps(x, rel_step)
    columns = []
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = steps[i]
        columns.append((np.atleast_1d(f(x + e)) - np.atleast_1d(f(x - e))) / (2.0 * steps[i]))
    return np.stack(columns, axis=-1)


def central_gradient(f, x, rel_step=1e-5):
    """Gradient of a scalar function f at x."""
    return central_jacobian(f, x, rel_step)[0]


def central_hessian(f, x, rel_step=1e-3):
    """Hessian of a scalar function f at x from the four-point second-order central formula."""
    x = np.asarray(x, dtype=float)
    steps = _steps(x, rel_step)
    n = x.size
    H = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = steps[i]
            ej[j] = steps[j]
            H[i, j] = H[j, i] = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) \
                / (4.0 * steps[i] * steps[j])
    return H


def relative_error(actual, expected):
    """Largest absolute deviation divided by the largest magnitude of the expected values."""
    actual = np.asarray(actual, dtype=float)
    expected = np.asarray(expected, dtype=float)
    scale = max(np.max(np.abs(expected)), 1e-12)
    return float(np.max(np.abs(actual - expected)) / scale)

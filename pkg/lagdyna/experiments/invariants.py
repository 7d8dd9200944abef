# -*- coding: utf-8 -*-
"""The fast invariant suite behind ``invariantcheck``.

Each check returns a CheckResult. Checks take the object under test as a parameter, so a test
can hand in a broken variant and watch the check fail.
"""
import logging
from collections import namedtuple

import numpy as np

from lagdyna.envs.pendulum import PendulumParams, ground_truth_accel
from lagdyna.exceptions import LagdynaError
from lagdyna.integrate.rk import RKCoefficients, StepSpec, empirical_order, rk2_step
from lagdyna.lnn.operator import accel_jac_weights, accelerations
from lagdyna.nncore.finite_differences import central_gradient, central_hessian, central_jacobian, relative_error
from lagdyna.nncore.network import NetworkArch, ScalarNetwork, forward, grad_w, grad_x, hess_x
from lagdyna.optim.ekf import GaussianWeightBelief, ekf_predict, ekf_update, validate_belief
from lagdyna.state import Force, GeneralizedState

logger = logging.getLogger(__name__)

CheckResult = namedtuple('CheckResult', ['name', 'passed', 'detail'])


def _result(name, passed, detail):
    (logger.info if passed else logger.warning)("%s: %s (%s)", name, 'pass' if passed else 'FAIL', detail)
    return CheckResult(name, bool(passed), detail)


def _random_net(seed, widths=(2, 8, 8, 1), activation='softplus'):
    arch = NetworkArch(widths, activation)
    return ScalarNetwork(arch, np.random.default_rng(seed).normal(size=arch.parameter_count))


def _well_posed_net(seed):
    """Positive output weights over softplus units keep the velocity curvature positive."""
    net = _random_net(seed, widths=(2, 8, 1))
    weights = 0.7 * np.array(net.weights)
    weights[-9:-1] = np.abs(weights[-9:-1]) + 0.5
    return net.with_weights(weights)


def check_network_derivatives(seeds=range(10)):
    """Input gradient, input Hessian and weight gradient against central differences."""
    worst = [0.0, 0.0, 0.0]
    for seed in seeds:
        net = _random_net(seed)
        x = np.random.default_rng(1000 + seed).normal(size=2)
        worst[0] = max(worst[0], relative_error(grad_x(net, x), central_gradient(lambda v: forward(net, v), x)))
        worst[1] = max(worst[1], relative_error(hess_x(net, x), central_hessian(lambda v: forward(net, v), x)))
        expected = central_gradient(lambda w: forward(net.with_weights(w), x), net.weights)
        worst[2] = max(worst[2], relative_error(grad_w(net, x), expected))
    passed = worst[0] < 1e-5 and worst[1] < 1e-4 and worst[2] < 1e-5
    return _result('network derivatives', passed, "relative errors grad_x %.2e, hess_x %.2e, grad_w %.2e"
                   % tuple(worst))


def check_operator_jacobian(seeds=range(10)):
    """Weight Jacobian of the acceleration operator against central differences."""
    worst = 0.0
    for seed in seeds:
        net = _well_posed_net(seed)
        rng = np.random.default_rng(2000 + seed)
        s = GeneralizedState(rng.uniform(-np.pi, np.pi, 1), rng.uniform(-2, 2, 1))
        f = Force(rng.uniform(-2, 2, 1))
        jac = accel_jac_weights(net, s, f)

        def acceleration(w):
            return accelerations(net.with_weights(w), s.q, s.qdot, f.a)[0]

        worst = max(worst, relative_error(jac, central_jacobian(acceleration, net.weights)))
    return _result('operator jacobian', worst < 1e-3, "relative error %.2e" % worst)


def check_euler_lagrange(params=None, model=None):
    """The operator on the analytic pendulum Lagrangian reproduces the pendulum dynamics."""
    params = params or PendulumParams()
    model = model or params.lagrangian()
    q, a = np.meshgrid(np.linspace(-np.pi, np.pi, 10), np.linspace(-params.torque_limit, params.torque_limit, 10))
    q, a = q.reshape(-1, 1), a.reshape(-1, 1)
    qdot = np.linspace(-params.speed_limit, params.speed_limit, q.size).reshape(-1, 1)
    error = np.max(np.abs(accelerations(model, q, qdot, a) - ground_truth_accel(params, q, a)))
    return _result('euler-lagrange oracle', error < 1e-6, "max error %.2e on %d points" % (error, q.size))


def _spring(s, f):
    return -s.q + f.a


def check_rk_order(coeffs=None):
    """Order conditions, exactness under constant acceleration and the measured order on a spring."""
    coeffs = coeffs or RKCoefficients()
    spec = StepSpec(2 * np.pi / 64, coeffs)
    start = GeneralizedState(1.0, 0.0)
    order = empirical_order(_spring, start, start, 2 * np.pi, spec)
    s = rk2_step(lambda s, f: np.full_like(s.q, 2.0), GeneralizedState(0.5, -1.0), Force(0.0), StepSpec(0.1, coeffs))
    constant_error = max(abs(s.q[0] - (0.5 - 0.1 + 0.01)), abs(s.qdot[0] - (-1.0 + 0.2)))
    passed = coeffs.satisfies_order_conditions() and 1.9 <= order <= 2.1 and constant_error <= 1e-12
    return _result('rk2 order', passed, "order %.3f, constant-acceleration error %.2e" % (order, constant_error))


def check_kalman_equivalence(steps=50, seed=0):
    """Predict/update on a linear-Gaussian model equals the closed-form Kalman filter."""
    rng = np.random.default_rng(seed)
    Q, R = 0.01 * np.eye(3), np.diag([0.1, 0.3])
    mean, P = np.zeros(3), np.eye(3)
    belief = GaussianWeightBelief(mean, P, Q, R)
    for _ in range(steps):
        A, y = rng.normal(size=(2, 3)), rng.normal(size=2)
        belief = ekf_update(ekf_predict(belief), A, y, A @ belief.mean)
        P = P + Q
        K = P @ A.T @ np.linalg.inv(A @ P @ A.T + R)
        mean = mean + K @ (y - A @ mean)
        P = (np.eye(3) - K @ A) @ P
    error = max(np.max(np.abs(belief.mean - mean)), np.max(np.abs(belief.cov - P)))
    return _result('kalman equivalence', error < 1e-8, "max deviation %.2e after %d steps" % (error, steps))


def check_covariance(initial_cov=None, steps=100, seed=0):
    """The covariance stays symmetric positive semidefinite through predict/update cycles."""
    rng = np.random.default_rng(seed)
    cov = np.eye(4) if initial_cov is None else np.asarray(initial_cov, dtype=float)
    belief = GaussianWeightBelief(np.zeros(cov.shape[0]), cov, 1e-4, 1e-2)
    try:
        validate_belief(belief)
        for _ in range(steps):
            A = rng.normal(size=(1, belief.size))
            belief = validate_belief(ekf_update(ekf_predict(belief), A, rng.normal(size=1), A @ belief.mean))
    except LagdynaError as err:
        return _result('covariance psd', False, str(err))
    return _result('covariance psd', True, "%d updates" % steps)


CHECKS = (
    check_network_derivatives,
    check_operator_jacobian,
    check_euler_lagrange,
    check_rk_order,
    check_kalman_equivalence,
    check_covariance,
)


def run_checks(checks=CHECKS):
    return [check() for check in checks]

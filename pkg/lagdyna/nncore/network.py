# -*- coding: utf-8 -*-
"""Scalar-output feed-forward networks with exact derivatives.

A network maps an input vector x to a single real number. Hidden layers apply a smooth
activation, the output layer is affine. Every operation accepts a single input of shape
``(d,)`` or a batch of shape ``(batch, d)`` and returns results with the matching leading axis.

Flat weight order: layer-major, and inside a layer the weight matrix (shape out x in, row-major)
comes before the bias vector. Covariance indices of the Kalman trainer rely on this order.
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from lagdyna.exceptions import DomainError, InputShapeError, PreconditionError


class Activation(object):
    """Hidden-layer nonlinearity with its first three derivatives."""
    name = None

    def value(self, z):
        raise NotImplementedError

    def derivatives(self, z):
        """Return the first, second and third derivative at z."""
        raise NotImplementedError

    def first(self, z):
        return self.derivatives(z)[0]


class Softplus(Activation):
    name = 'softplus'

    def value(self, z):
        return np.logaddexp(0.0, z)

    def derivatives(self, z):
        s = expit(z)
        d2 = s * (1.0 - s)
        return s, d2, d2 * (1.0 - 2.0 * s)

    def first(self, z):
        return expit(z)


class Tanh(Activation):
    name = 'tanh'

    def value(self, z):
        return np.tanh(z)

    def derivatives(self, z):
        t = np.tanh(z)
        d1 = 1.0 - t * t
        return d1, -2.0 * t * d1, d1 * (6.0 * t * t - 2.0)

    def first(self, z):
        t = np.tanh(z)
        return 1.0 - t * t


class Identity(Activation):
    name = 'identity'

    def value(self, z):
        return z

    def derivatives(self, z):
        return np.ones_like(z), np.zeros_like(z), np.zeros_like(z)

    def first(self, z):
        return np.ones_like(z)


ACTIVATIONS = {cls.name: cls() for cls in (Softplus, Tanh, Identity)}


@dataclass(frozen=True)
class NetworkArch:
    """Layer widths from input to output plus the hidden activation name."""
    layer_widths: tuple
    activation: str = 'softplus'

    def __post_init__(self):
        widths = tuple(int(w) for w in self.layer_widths)
        if len(widths) < 2:
            raise PreconditionError("a network needs an input and an output width, got %s" % (widths,))
        if any(w <= 0 for w in widths):
            raise PreconditionError("layer widths must be positive, got %s" % (widths,))
        if widths[-1] != 1:
            raise PreconditionError("the output width must be 1, got %d" % widths[-1])
        if self.activation not in ACTIVATIONS:
            raise PreconditionError("unknown activation %r, choose from %s" % (self.activation, sorted(ACTIVATIONS)))
        object.__setattr__(self, 'layer_widths', widths)

    @property
    def input_width(self):
        return self.layer_widths[0]

    @property
    def layer_shapes(self):
        """Weight matrix shapes (out, in) of every layer."""
        return [(out, inp) for inp, out in zip(self.layer_widths[:-1], self.layer_widths[1:])]

    @property
    def parameter_count(self):
        return sum(out * inp + out for out, inp in self.layer_shapes)

    @property
    def activation_function(self):
        return ACTIVATIONS[self.activation]


@dataclass(frozen=True, eq=False)
class ScalarNetwork:
    """An architecture together with its flat weight vector. The weights are read-only."""
    arch: NetworkArch
    weights: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float).reshape(-1)
        if weights.shape != (self.arch.parameter_count,):
            raise InputShapeError("architecture %s needs %d weights, got %d"
                                  % (self.arch.layer_widths, self.arch.parameter_count, weights.size))
        if not np.all(np.isfinite(weights)):
            raise DomainError("network weights contain non-finite values")
        weights.setflags(write=False)
        object.__setattr__(self, 'weights', weights)

    @classmethod
    def initialize(cls, arch, seed=0, output_gain=1.0):
        """Glorot-uniform weights and zero biases. ``output_gain`` scales the output layer."""
        rng = np.random.default_rng(seed)
        parts = []
        shapes = arch.layer_shapes
        for k, (out, inp) in enumerate(shapes):
            limit = np.sqrt(6.0 / (inp + out))
            W = rng.uniform(-limit, limit, size=(out, inp))
            if k == len(shapes) - 1:
                W = W * output_gain
            parts.extend([W.reshape(-1), np.zeros(out)])
        return cls(arch, np.concatenate(parts))

    def with_weights(self, weights):
        return ScalarNetwork(self.arch, weights)

    def layers(self):
        """List of (W, b) views into the flat weight vector."""
        result = []
        offset = 0
        for out, inp in self.arch.layer_shapes:
            W = self.weights[offset:offset + out * inp].reshape(out, inp)
            offset += out * inp
            b = self.weights[offset:offset + out]
            offset += out
            result.append((W, b))
        return result

    # A ScalarNetwork can stand in for any Lagrangian model.
    def forward(self, x):
        return forward(self, x)

    def grad_x(self, x):
        return grad_x(self, x)

    def hess_x(self, x):
        return hess_x(self, x)

    def input_jets(self, x):
        return input_jets(self, x)


def _as_batch(net, x):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    batch = np.atleast_2d(x)
    if batch.ndim != 2 or batch.shape[1] != net.arch.input_width:
        raise InputShapeError("network expects inputs of width %d, got shape %s" % (net.arch.input_width, x.shape))
    if not np.all(np.isfinite(batch)):
        raise DomainError("network input contains non-finite values")
    return batch, single


def _symmetrize(H):
    return 0.5 * (H + np.swapaxes(H, -1, -2))


def _trace(net, batch):
    """Forward pass keeping the input of every layer and the hidden pre-activations."""
    act = net.arch.activation_function
    layers = net.layers()
    inputs, pre = [], []
    h = batch
    for k, (W, b) in enumerate(layers):
        inputs.append(h)
        z = h @ W.T + b
        if k < len(layers) - 1:
            pre.append(z)
            h = act.value(z)
        else:
            h = z
    return h[:, 0], inputs, pre


def forward(net, x):
    """Evaluate the network. Returns a float for a single input, an array for a batch."""
    batch, single = _as_batch(net, x)
    out, _, _ = _trace(net, batch)
    return float(out[0]) if single else out


def _backward(net, inputs, pre, delta):
    """Reverse pass from output cotangents ``delta`` (B, 1). Yields per-layer (delta, layer input)."""
    act = net.arch.activation_function
    layers = net.layers()
    for k in reversed(range(len(layers))):
        W, _ = layers[k]
        yield k, delta, inputs[k]
        if k > 0:
            delta = (delta @ W) * act.first(pre[k - 1])


def grad_x(net, x):
    """Exact gradient of the output w.r.t. the input."""
    batch, single = _as_batch(net, x)
    _, inputs, pre = _trace(net, batch)
    W0 = net.layers()[0][0]
    deltas = [delta for _, delta, _ in _backward(net, inputs, pre, np.ones((batch.shape[0], 1)))]
    g = deltas[-1] @ W0
    return g[0] if single else g


def grad_w(net, x):
    """Exact gradient of the output w.r.t. the flat weight vector, one row per input."""
    batch, single = _as_batch(net, x)
    B = batch.shape[0]
    _, inputs, pre = _trace(net, batch)
    blocks = [None] * len(inputs)
    for k, delta, h in _backward(net, inputs, pre, np.ones((B, 1))):
        gW = delta[:, :, None] * h[:, None, :]
        blocks[k] = np.concatenate([gW.reshape(B, -1), delta], axis=1)
    g = np.concatenate(blocks, axis=1)
    return g[0] if single else g


def backprop(net, x, out_grad):
    """Gradient w.r.t. the weights of ``sum_b out_grad[b] * f(x_b)`` over a batch of inputs."""
    batch, _ = _as_batch(net, x)
    out_grad = np.asarray(out_grad, dtype=float).reshape(-1, 1)
    if out_grad.shape[0] != batch.shape[0]:
        raise InputShapeError("got %d output cotangents for %d inputs" % (out_grad.shape[0], batch.shape[0]))
    _, inputs, pre = _trace(net, batch)
    blocks = [None] * len(inputs)
    for k, delta, h in _backward(net, inputs, pre, out_grad):
        blocks[k] = np.concatenate([(delta.T @ h).reshape(-1), delta.sum(axis=0)])
    return np.concatenate(blocks)



def _jet_trace(net, batch):
    """Forward propagation of the value, input Jacobian and input second derivatives.

    Returns the output (value, gradient, symmetrized Hessian) and a tape with one entry
    (h, J, T, z, Jz, Tz) per layer: the layer input with its derivatives and the layer output
    before activation with its derivatives.
    """
    B, d = batch.shape
    act = net.arch.activation_function
    layers = net.layers()
    h = batch
    J = np.broadcast_to(np.eye(d), (B, d, d))
    T = np.zeros((B, d, d, d))
    tape = []
    for k, (W, b) in enumerate(layers):
        z = h @ W.T + b
        Jz = np.einsum('ij,bja->bia', W, J)
        Tz = np.einsum('ij,bjac->biac', W, T, optimize=True)
        tape.append((h, J, T, z, Jz, Tz))
        if k == len(layers) - 1:
            return (z[:, 0], Jz[:, 0, :], _symmetrize(Tz[:, 0])), tape
        d1, d2, _ = act.derivatives(z)
        h = act.value(z)
        J = d1[:, :, None] * Jz
        T = d2[:, :, None, None] * Jz[:, :, :, None] * Jz[:, :, None, :] + d1[:, :, None, None] * Tz


def input_jets(net, x):
    """Value, input gradient and symmetrized input Hessian of a batch, by forward propagation."""
    batch, _ = _as_batch(net, x)
    jets, _ = _jet_trace(net, batch)
    return jets


def hess_x(net, x):
    """Exact Hessian of the output w.r.t. the input, symmetrized as (H + H^T) / 2."""
    x = np.asarray(x, dtype=float)
    _, _, H = input_jets(net, x)
    return H[0] if x.ndim == 1 else H


def jets_backprop(net, x, grad_cotangent, hess_cotangent=None, per_sample=False):
    """Reverse pass through :func:`input_jets`.

    Returns the gradient w.r.t. the flat weight vector of

        sum_b <grad_cotangent[b], grad_x f(x_b)> + <hess_cotangent[b], hess_x f(x_b)>

    as a vector of shape (P,), or with ``per_sample`` one row per input, shape (batch, P).
    The cost is a small multiple of one :func:`input_jets` call.
    """
    batch, _ = _as_batch(net, x)
    B, d = batch.shape
    gbar = np.asarray(grad_cotangent, dtype=float)
    if gbar.shape != (B, d):
        raise InputShapeError("gradient cotangent must have shape %s, got %s" % ((B, d), gbar.shape))
    if hess_cotangent is None:
        Hbar = np.zeros((B, d, d))
    else:
        Hbar = np.asarray(hess_cotangent, dtype=float)
        if Hbar.shape != (B, d, d):
            raise InputShapeError("Hessian cotangent must have shape %s, got %s" % ((B, d, d), Hbar.shape))
        Hbar = _symmetrize(Hbar)

    act = net.arch.activation_function
    layers = net.layers()
    _, tape = _jet_trace(net, batch)
    zbar = np.zeros((B, 1))
    Jzbar = gbar[:, None, :]
    Tzbar = Hbar[:, None]
    blocks = [None] * len(layers)
    for k in reversed(range(len(layers))):
        W, _ = layers[k]
        h, J, T, _, _, _ = tape[k]
        if per_sample:
            gW = (zbar[:, :, None] * h[:, None, :] + np.einsum('bia,bja->bij', Jzbar, J)
                  + np.einsum('biac,bjac->bij', Tzbar, T, optimize=True))
            blocks[k] = np.concatenate([gW.reshape(B, -1), zbar], axis=1)
        else:
            gW = zbar.T @ h + np.einsum('bia,bja->ij', Jzbar, J) + np.einsum('biac,bjac->ij', Tzbar, T, optimize=True)
            blocks[k] = np.concatenate([gW.reshape(-1), zbar.sum(axis=0)])
        if k == 0:
            break
        hbar = zbar @ W
        Jbar = np.einsum('ij,bia->bja', W, Jzbar)
        Tbar = np.einsum('ij,biac->bjac', W, Tzbar, optimize=True)
        # Pull back through h = act(z), J = act'(z) Jz and T = act''(z) Jz Jz^T + act'(z) Tz.
        _, _, _, z, Jz, Tz = tape[k - 1]
        d1, d2, d3 = act.derivatives(z)
        zbar = (d1 * hbar + d2 * np.einsum('bia,bia->bi', Jbar, Jz)
                + d3 * np.einsum('biac,bia,bic->bi', Tbar, Jz, Jz, optimize=True)
                + d2 * np.einsum('biac,biac->bi', Tbar, Tz))
        Tsym = Tbar + np.swapaxes(Tbar, -1, -2)
        Jzbar = d1[:, :, None] * Jbar + d2[:, :, None] * np.einsum('biac,bic->bia', Tsym, Jz)
        Tzbar = d1[:, :, None, None] * Tbar
    return np.concatenate(blocks, axis=-1)

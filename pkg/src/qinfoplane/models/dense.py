"""Fully connected network with ReLU hidden layers and inverted dropout."""
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidArgumentError, InvalidStateError, ShapeError

_ACTIVATIONS = ("sigmoid", "identity", "relu")


@dataclass
class DenseNet:
    layer_dims: list
    weights: list
    biases: list
    dropout_rate: float = 0.0
    output_activation: str = "sigmoid"
    version: int = field(default=0, compare=False)

    def __post_init__(self):
        dims = list(self.layer_dims)
        if len(dims) < 2:
            raise InvalidArgumentError("need at least input and output widths")
        if len(self.weights) != len(dims) - 1 or len(self.biases) != len(dims) - 1:
            raise ShapeError("one weight matrix and bias per layer")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (dims[i], dims[i + 1]) or b.shape != (dims[i + 1],):
                raise ShapeError(f"layer {i}: expected {(dims[i], dims[i + 1])}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise InvalidArgumentError("dropout_rate must lie in [0, 1)")
        if self.output_activation not in _ACTIVATIONS:
            raise InvalidArgumentError(f"unknown activation {self.output_activation!r}")

    @classmethod
    def init(cls, layer_dims, rng, dropout_rate=0.0, output_activation="sigmoid"):
        """Glorot-uniform weights and zero biases."""
        ws, bs = [], []
        for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:]):
            lim = np.sqrt(6.0 / (fan_in + fan_out))
            ws.append(rng.uniform(-lim, lim, (fan_in, fan_out)))
            bs.append(np.zeros(fan_out))
        return cls(list(layer_dims), ws, bs, dropout_rate, output_activation)

    @property
    def n_params(self):
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def get_flat(self):
        return np.concatenate([a.ravel() for wb in zip(self.weights, self.biases) for a in wb])

    def set_flat(self, vec):
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (self.n_params,):
            raise ShapeError(f"expected {self.n_params} parameters")
        k = 0
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            self.weights[i] = vec[k : k + w.size].reshape(w.shape).copy()
            k += w.size
            self.biases[i] = vec[k : k + b.size].copy()
            k += b.size
        self.version += 1


@dataclass
class DenseCache:
    version: int
    inputs: list
    pre: list
    masks: list
    output: np.ndarray


@dataclass
class DenseGrads:
    weights: list
    biases: list
    inputs: np.ndarray

    def flat(self):
        return np.concatenate([a.ravel() for wb in zip(self.weights, self.biases) for a in wb])


def _activate(z, kind):
    if kind == "sigmoid":
        return 0.5 * (1.0 + np.tanh(0.5 * z))
    if kind == "relu":
        return np.maximum(z, 0.0)
    return z


def dense_forward(net, inputs, training=False, rng=None):
    """Output (B, out) and the cache needed by :func:`dense_backward`."""
    a = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    if a.shape[1] != net.layer_dims[0]:
        raise ShapeError(f"expected input width {net.layer_dims[0]}, got {a.shape[1]}")
    use_dropout = training and net.dropout_rate > 0.0
    if use_dropout and rng is None:
        raise InvalidArgumentError("dropout during training needs an rng")
    keep = 1.0 - net.dropout_rate
    ins, pre, masks = [], [], []
    last = len(net.weights) - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        ins.append(a)
        z = a @ w + b
        pre.append(z)
        if i == last:
            a = _activate(z, net.output_activation)
            masks.append(None)
        else:
            a = np.maximum(z, 0.0)
            if use_dropout:
                m = (rng.random(a.shape) < keep) / keep
                a = a * m
                masks.append(m)
            else:
                masks.append(None)
    return a, DenseCache(net.version, ins, pre, masks, a)


def dense_backward(net, cache, output_gradient):
    """Gradients of sum(output * output_gradient) under the cached dropout masks."""
    if cache.version != net.version:
        raise InvalidStateError("cache was produced before the last parameter update")
    g = np.asarray(output_gradient, dtype=np.float64).reshape(cache.output.shape)
    n = len(net.weights)
    gw, gb = [None] * n, [None] * n
    for i in range(n - 1, -1, -1):
        z = cache.pre[i]
        if i == n - 1:
            kind = net.output_activation
            if kind == "sigmoid":
                g = g * cache.output * (1.0 - cache.output)
            elif kind == "relu":
                g = g * (z > 0)
        else:
            if cache.masks[i] is not None:
                g = g * cache.masks[i]
            g = g * (z > 0)
        gw[i] = cache.inputs[i].T @ g
        gb[i] = g.sum(axis=0)
        g = g @ net.weights[i].T
    return DenseGrads(gw, gb, g)

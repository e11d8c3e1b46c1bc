"""Coordinate-based sine network mapping pixel positions to a complex image.

The network is a fixed gaussian Fourier-feature encoding followed by sine
layers and a linear two-channel (real, imaginary) output. Gradients of the
weighted, normalized data-consistency loss are computed analytically by
backpropagation through the masked Fourier operator and the network.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BadConfig, DegenerateDenominator, NonFinite, ShapeMismatch
from .forward import apply_adjoint, kspace, make_rng

RESIDUAL_GUARD = 1e-14


@dataclass(frozen=True)
class InrConfig:
    hidden_layers: int = 4
    hidden_width: int = 128
    fourier_features: int = 64
    fourier_scale: float = 10.0
    activation: str = "SINE"
    omega0: float = 30.0
    out_channels: int = 2

    def __post_init__(self):
        if self.hidden_layers < 1 or self.hidden_width < 1 or self.fourier_features < 1:
            raise BadConfig("layer counts and widths must be positive")
        if not self.fourier_scale > 0 or not self.omega0 > 0:
            raise BadConfig("fourier_scale and omega0 must be positive")
        if self.activation.upper() != "SINE":
            raise BadConfig(f"unsupported activation {self.activation!r}")
        if self.out_channels != 2:
            raise BadConfig("out_channels is fixed at 2 (real, imaginary)")

    @classmethod
    def paper(cls, **overrides):
        """8 hidden layers of 256 units, as used for the in-vivo experiments."""
        return cls(**{"hidden_layers": 8, "hidden_width": 256, **overrides})

    def layer_shapes(self):
        """``(out, in)`` of every affine map, input layer first, output last."""
        w = self.hidden_width
        shapes = [(w, 2 * self.fourier_features)]
        shapes += [(w, w)] * self.hidden_layers
        shapes.append((self.out_channels, w))
        return shapes


def parameter_count(config):
    return sum(o * i + o for o, i in config.layer_shapes())


@dataclass
class GeneratorParams:
    """Fixed Fourier matrix plus all trainable weights in one flat vector.

    ``theta`` is laid out layer by layer as ``W.ravel()`` then ``b``.
    """

    config: InrConfig
    fourier_matrix: np.ndarray
    theta: np.ndarray
    _offsets: list = field(init=False, repr=False)

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=np.float64)
        offsets, pos = [], 0
        for o, i in self.config.layer_shapes():
            offsets.append((pos, pos + o * i, pos + o * i + o, o, i))
            pos += o * i + o
        if self.theta.shape != (pos,):
            raise ShapeMismatch(f"theta has {self.theta.size} entries, expected {pos}")
        if self.fourier_matrix.shape != (self.config.fourier_features, 2):
            raise ShapeMismatch("fourier_matrix must be (fourier_features, 2)")
        self._offsets = offsets

    @property
    def total_count(self):
        return self.theta.size

    @property
    def n_layers(self):
        return len(self._offsets)

    def weight(self, k):
        a, b, _, o, i = self._offsets[k]
        return self.theta[a:b].reshape(o, i)

    def bias(self, k):
        _, b, c, _, _ = self._offsets[k]
        return self.theta[b:c]

    def layers(self):
        return [(self.weight(k), self.bias(k)) for k in range(self.n_layers)]

    def with_theta(self, theta):
        return GeneratorParams(self.config, self.fourier_matrix, np.array(theta, dtype=np.float64))

    def copy(self):
        return self.with_theta(self.theta.copy())


@dataclass(frozen=True)
class CoordinateGrid:
    """Pixel-centre coordinates in ``[-1, 1]^2``, row-major (u = row, v = col)."""

    height: int
    width: int

    @property
    def coords(self):
        u = (2.0 * np.arange(self.height) + 1.0) / self.height - 1.0
        v = (2.0 * np.arange(self.width) + 1.0) / self.width - 1.0
        uu, vv = np.meshgrid(u, v, indexing="ij")
        return np.stack((uu.ravel(), vv.ravel()), axis=1)


def init_inr(config, seed):
    rng = make_rng(seed, stream=2)
    fmat = rng.normal(0.0, config.fourier_scale, size=(config.fourier_features, 2))
    chunks = []
    for k, (o, i) in enumerate(config.layer_shapes()):
        bound = 1.0 / i if k == 0 else np.sqrt(6.0 / i) / config.omega0
        chunks.append(rng.uniform(-bound, bound, size=o * i))
        bb = 1.0 / np.sqrt(i)
        chunks.append(rng.uniform(-bb, bb, size=o))
    return GeneratorParams(config, fmat, np.concatenate(chunks))


def fourier_encoding(fourier_matrix, coords):
    proj = 2.0 * np.pi * (coords @ fourier_matrix.T)
    return np.concatenate((np.sin(proj), np.cos(proj)), axis=1)


def _forward(params, coords, features=None):
    h = fourier_encoding(params.fourier_matrix, coords) if features is None else features
    omega = params.config.omega0
    cache = []
    layers = params.layers()
    for w, b in layers[:-1]:
        z = h @ w.T + b
        nxt, dact = kernels.sine_activation(z, omega)
        cache.append((h, dact))
        h = nxt
    w, b = layers[-1]
    cache.append((h, None))
    return h @ w.T + b, cache


def _as_image(out, height, width):
    img = (out[:, 0] + 1j * out[:, 1]).reshape(height, width)
    if not np.all(np.isfinite(img)):
        raise NonFinite("generator output is not finite")
    return img


def inr_forward(params, grid):
    out, _ = _forward(params, grid.coords)
    return _as_image(out, grid.height, grid.width)


def _backward(params, cache, d_out):
    grad = np.empty_like(params.theta)
    layers = params.layers()
    delta = d_out
    for k in range(len(layers) - 1, -1, -1):
        h_in, _ = cache[k]
        a, b, c, o, i = params._offsets[k]
        grad[a:b] = (delta.T @ h_in).ravel()
        grad[b:c] = delta.sum(axis=0)
        if k > 0:
            delta = (delta @ layers[k][0]) * cache[k - 1][1]
    return grad


def _weights_of(v):
    return np.asarray(getattr(v, "v", v), dtype=np.float64)


def evaluate(params, grid, mask, y, v, features=None):
    """Loss, gradient, generated image and predicted measurements in one pass.

    ``features`` may carry the precomputed Fourier encoding of ``grid``; it
    is constant over a run since the Fourier matrix is not trained.
    """
    weights = _weights_of(v)
    if weights.shape != y.values.shape:
        raise ShapeMismatch("weight vector not aligned with measurements")
    denom = np.linalg.norm(weights * y.values)
    if not denom > 0:
        raise DegenerateDenominator("||v * y|| is zero")
    out, cache = _forward(params, grid.coords, features)
    img = _as_image(out, grid.height, grid.width)
    pred = kspace(img).ravel()[mask.index]
    res = pred - y.values
    num = np.linalg.norm(weights * res)
    loss = num / denom
    if num < RESIDUAL_GUARD:
        return loss, np.zeros_like(params.theta), img, pred
    g_img = apply_adjoint(mask, weights**2 * res) / (num * denom)
    d_out = np.stack((g_img.real.ravel(), g_img.imag.ravel()), axis=1)
    return loss, _backward(params, cache, d_out), img, pred


def loss_and_gradient(params, grid, mask, y, v):
    """``||v*(A f(z) - y)|| / ||v*y||`` and its exact gradient w.r.t. ``theta``."""
    loss, grad, _, _ = evaluate(params, grid, mask, y, v)
    return loss, grad

"""Analytic test images standing in for in-vivo data."""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import BadDims
from .forward import make_rng

# (intensity, semi-axis a, semi-axis b, x0, y0, rotation in degrees)
SHEPP_LOGAN_ELLIPSES = (
    (1.0, 0.69, 0.92, 0.0, 0.0, 0.0),
    (-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0),
    (-0.2, 0.11, 0.31, 0.22, 0.0, -18.0),
    (-0.2, 0.16, 0.41, -0.22, 0.0, 18.0),
    (0.1, 0.21, 0.25, 0.0, 0.35, 0.0),
    (0.1, 0.046, 0.046, 0.0, 0.1, 0.0),
    (0.1, 0.046, 0.046, 0.0, -0.1, 0.0),
    (0.1, 0.046, 0.023, -0.08, -0.605, 0.0),
    (0.1, 0.023, 0.023, 0.0, -0.606, 0.0),
    (0.1, 0.023, 0.046, 0.06, -0.605, 0.0),
)


class PhantomKind(str, enum.Enum):
    SHEPP_LOGAN = "SHEPP_LOGAN"
    ELLIPSE_SUITE = "ELLIPSE_SUITE"
    CHECKER_SMOOTH = "CHECKER_SMOOTH"


class PhaseMode(str, enum.Enum):
    ZERO = "ZERO"
    SMOOTH_RANDOM = "SMOOTH_RANDOM"


@dataclass(frozen=True)
class PhantomSpec:
    kind: PhantomKind = PhantomKind.SHEPP_LOGAN
    height: int = 64
    width: int = 64
    phase_mode: PhaseMode = PhaseMode.ZERO
    seed: int = 0


def pixel_centres(height, width):
    """``(x, y)`` planes with x to the right and y upwards, both in [-1, 1]."""
    x = (2.0 * np.arange(width) + 1.0) / width - 1.0
    y = 1.0 - (2.0 * np.arange(height) + 1.0) / height
    return np.meshgrid(x, y, indexing="xy")


def inside_ellipse(x, y, a, b, x0, y0, phi_deg):
    phi = np.deg2rad(phi_deg)
    c, s = np.cos(phi), np.sin(phi)
    dx, dy = x - x0, y - y0
    return ((dx * c + dy * s) / a) ** 2 + ((-dx * s + dy * c) / b) ** 2 <= 1.0


def _ellipse_sum(x, y, ellipses):
    img = np.zeros(x.shape)
    for amp, a, b, x0, y0, phi in ellipses:
        img[inside_ellipse(x, y, a, b, x0, y0, phi)] += amp
    return img


def _random_ellipses(rng, n=12):
    out = [(0.6, 0.8, 0.9, 0.0, 0.0, 0.0)]
    for _ in range(n):
        a, b = rng.uniform(0.05, 0.3, size=2)
        x0, y0 = rng.uniform(-0.45, 0.45, size=2)
        out.append((rng.uniform(-0.25, 0.35), a, b, x0, y0, rng.uniform(0, 180)))
    return out


def gen_phantom(spec):
    kind = PhantomKind(spec.kind)
    h, w = int(spec.height), int(spec.width)
    if h < 1 or w < 1:
        raise BadDims(f"bad phantom dimensions {h}x{w}")
    x, y = pixel_centres(h, w)
    rng = make_rng(spec.seed, stream=3)
    if kind is PhantomKind.SHEPP_LOGAN:
        mag = _ellipse_sum(x, y, SHEPP_LOGAN_ELLIPSES)
    elif kind is PhantomKind.ELLIPSE_SUITE:
        mag = _ellipse_sum(x, y, _random_ellipses(rng))
    else:
        mag = 0.5 + 0.5 * np.sin(2 * np.pi * x) * np.sin(2 * np.pi * y)
    mag = np.clip(mag, 0.0, None)
    peak = mag.max()
    if peak > 0:
        mag = mag / peak
    if PhaseMode(spec.phase_mode) is PhaseMode.ZERO:
        return mag.astype(np.complex128)
    c = rng.uniform(-np.pi / 2, np.pi / 2, size=6)
    phase = c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y
    return mag * np.exp(1j * phase)

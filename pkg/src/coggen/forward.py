"""Cartesian undersampling masks and the measurement operator ``A = M F``.

k-space is handled in centred (fftshifted) layout: DC sits at
``(H // 2, W // 2)`` of the stored grid, so a variable-density mask and the
radial distances used by the teacher weights read naturally on the stored
array. Measurements are ordered by a row-major scan of selected positions.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .core_math import as_grid, fft2, ifft2
from .errors import BadConfig, BadDims, BudgetInfeasible, NonFinite, ShapeMismatch


class Pattern(str, enum.Enum):
    VD2D = "VD2D"
    VD1D_PE = "VD1D_PE"
    FULL = "FULL"


def make_rng(seed, stream=0):
    """Counter-based generator; ``stream`` separates independent uses of a seed."""
    return np.random.Generator(np.random.Philox(key=[int(seed), int(stream)]))


@dataclass(frozen=True)
class SamplingMask:
    selected: np.ndarray
    pattern: Pattern = Pattern.FULL
    acceleration_factor: float = 1.0
    center_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        sel = np.ascontiguousarray(self.selected, dtype=bool)
        if sel.ndim != 2:
            raise BadDims("mask must be 2D")
        if not sel.any():
            raise BudgetInfeasible("mask selects no samples")
        sel.setflags(write=False)
        object.__setattr__(self, "selected", sel)
        object.__setattr__(self, "pattern", Pattern(self.pattern))

    @property
    def shape(self):
        return self.selected.shape

    @property
    def height(self):
        return self.selected.shape[0]

    @property
    def width(self):
        return self.selected.shape[1]

    @property
    def count(self):
        return int(self.selected.sum())

    @property
    def achieved_af(self):
        return self.selected.size / self.count

    @property
    def index(self):
        """Flat row-major indices of the acquired positions."""
        return np.flatnonzero(self.selected)

    @classmethod
    def full(cls, height, width):
        return cls(np.ones((height, width), dtype=bool), Pattern.FULL, 1.0, 1.0, 0)


@dataclass
class MeasurementSet:
    mask: SamplingMask
    values: np.ndarray
    noise_sigma: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.mask.count,):
            raise ShapeMismatch(
                f"{self.values.shape[0] if self.values.ndim else 0} values for "
                f"{self.mask.count} acquired samples"
            )
        if not np.all(np.isfinite(self.values)):
            raise NonFinite("measurement values contain NaN or Inf")

    def __len__(self):
        return self.values.shape[0]


@dataclass
class RadialDistanceMap:
    distances: np.ndarray
    max_distance: float = field(init=False)

    def __post_init__(self):
        self.distances = np.asarray(self.distances, dtype=np.float64)
        self.max_distance = float(self.distances.max()) if self.distances.size else 0.0


def center_point(height, width):
    return height // 2, width // 2


def distance_grid(height, width):
    cy, cx = center_point(height, width)
    rr, cc = np.meshgrid(np.arange(height) - cy, np.arange(width) - cx, indexing="ij")
    return np.hypot(rr, cc)


def _lowest_region(dist, fraction):
    """Positions whose distance is within the ``fraction`` lowest (ties kept)."""
    n_center = int(np.ceil(fraction * dist.size - 1e-9))
    if n_center <= 0:
        return np.zeros(dist.shape, dtype=bool)
    radius = np.sort(dist, axis=None)[n_center - 1]
    return dist <= radius + 1e-12


def _density_scale(dist, budget):
    """Bisection for the gaussian width whose expected count equals ``budget``."""
    lo, hi = 1e-6, 1e6
    for _ in range(200):
        mid = np.sqrt(lo * hi)
        expected = np.exp(-0.5 * (dist / mid) ** 2).sum()
        if expected < budget:
            lo = mid
        else:
            hi = mid
    return np.sqrt(lo * hi)


def _weighted_pick(rng, weights, k):
    """``k`` draws without replacement with probability proportional to weights."""
    if k <= 0:
        return np.zeros(0, dtype=np.int64)
    u = rng.random(weights.shape[0])
    keys = np.log(u) / np.maximum(weights, 1e-300)
    return np.argsort(-keys, kind="stable")[:k]


def gen_vd_mask(height, width, pattern, acceleration_factor, center_fraction, seed):
    """Generate a variable-density Cartesian mask.

    ``VD2D`` samples individual k-space points with a gaussian radial
    density; ``VD1D_PE`` samples whole columns with a gaussian density over
    the column offset. A centred region holding ``center_fraction`` of the
    grid (or of the columns) is always acquired. The sample count is
    ``round(N / acceleration_factor)`` exactly, barring ties in the centre.
    """
    pattern = Pattern(pattern)
    if height < 1 or width < 1:
        raise BadDims(f"bad mask dimensions {height}x{width}")
    af = float(acceleration_factor)
    cf = float(center_fraction)
    if not af >= 1.0:
        raise BudgetInfeasible("acceleration_factor must be >= 1")
    if not 0.0 <= cf <= 1.0:
        raise BudgetInfeasible("center_fraction must lie in [0, 1]")
    if pattern is Pattern.FULL or af == 1.0:
        sel = np.ones((height, width), dtype=bool)
        return SamplingMask(sel, pattern, 1.0 if pattern is Pattern.FULL else af, cf, seed)
    if cf > 1.0 / af:
        raise BudgetInfeasible(f"center_fraction {cf} exceeds the 1/AF budget {1 / af:.4f}")
    rng = make_rng(seed)

    if pattern is Pattern.VD2D:
        dist = distance_grid(height, width).ravel()
        budget = int(round(dist.size / af))
        center = _lowest_region(dist, cf)
    else:
        dist = np.abs(np.arange(width) - width // 2).astype(np.float64)
        budget = int(round(width / af))
        center = _lowest_region(dist, cf)
    n_center = int(center.sum())
    if n_center > budget:
        raise BudgetInfeasible(f"centre region ({n_center}) exceeds budget ({budget})")
    budget = max(budget, 1)

    free = np.flatnonzero(~center)
    chosen = center.copy()
    remaining = budget - n_center
    if remaining > 0:
        scale = _density_scale(dist[free], remaining)
        weights = np.exp(-0.5 * (dist[free] / scale) ** 2)
        chosen[free[_weighted_pick(rng, weights, remaining)]] = True

    if pattern is Pattern.VD2D:
        sel = chosen.reshape(height, width)
    else:
        sel = np.broadcast_to(chosen[None, :], (height, width)).copy()
    return SamplingMask(sel, pattern, af, cf, seed)


def kspace(x):
    """Centred unitary k-space of an image."""
    return np.fft.fftshift(fft2(x))


def image_from_kspace(k):
    return ifft2(np.fft.ifftshift(k))


def apply_forward(mask, x):
    """``A x``: centred k-space sampled at the mask, noise-free."""
    x = as_grid(x)
    if x.shape != mask.shape:
        raise ShapeMismatch(f"image {x.shape} vs mask {mask.shape}")
    return MeasurementSet(mask, kspace(x).ravel()[mask.index], 0.0)


def scatter(mask, values):
    """Place per-sample values on a zero k-space grid."""
    k = np.zeros(mask.selected.size, dtype=np.complex128)
    k[mask.index] = values
    return k.reshape(mask.shape)


def apply_adjoint(mask, y):
    """``A^H y``: zero-filled inverse transform."""
    values = y.values if isinstance(y, MeasurementSet) else np.asarray(y)
    if isinstance(y, MeasurementSet) and y.mask.shape != mask.shape:
        raise ShapeMismatch("measurement set belongs to a different mask")
    if values.shape != (mask.count,):
        raise ShapeMismatch(f"{values.shape} values for {mask.count} samples")
    return image_from_kspace(scatter(mask, values))


def add_awgn(y, sigma, seed):
    """Add complex white gaussian noise, ``sigma`` per real/imag component."""
    sigma = float(sigma)
    if sigma < 0:
        raise BadConfig("sigma must be non-negative")
    if sigma == 0.0:
        return MeasurementSet(y.mask, y.values.copy(), 0.0)
    rng = make_rng(seed, stream=1)
    n = len(y)
    noise = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return MeasurementSet(y.mask, y.values + sigma * noise, sigma)


def radial_distances(mask):
    """Euclidean distance of every acquired sample from the k-space centre."""
    return RadialDistanceMap(distance_grid(*mask.shape).ravel()[mask.index])

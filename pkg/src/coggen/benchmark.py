"""The synthetic noisy phantom benchmark used by the ablation suites."""

from dataclasses import dataclass

import numpy as np

from .forward import Pattern, add_awgn, apply_forward, gen_vd_mask
from .optimizer import Benchmark
from .phantom import PhantomKind, PhantomSpec, PhaseMode, gen_phantom


@dataclass(frozen=True)
class BenchmarkSpec:
    size: int = 64
    kind: PhantomKind = PhantomKind.SHEPP_LOGAN
    phase_mode: PhaseMode = PhaseMode.ZERO
    pattern: Pattern = Pattern.VD2D
    acceleration_factor: float = 8.0
    center_fraction: float = 0.04
    mask_seed: int = 7
    noise_fraction: float = 0.05


def make_benchmark(spec=BenchmarkSpec(), seed=0):
    """Phantom, mask and noisy measurements; the noise realization follows ``seed``.

    Noise is complex AWGN whose per-component standard deviation is
    ``noise_fraction`` times the largest measurement magnitude.
    """
    truth = gen_phantom(PhantomSpec(spec.kind, spec.size, spec.size, spec.phase_mode, seed))
    mask = gen_vd_mask(
        spec.size, spec.size, spec.pattern, spec.acceleration_factor, spec.center_fraction, spec.mask_seed
    )
    clean = apply_forward(mask, truth)
    sigma = spec.noise_fraction * float(np.abs(clean.values).max())
    return Benchmark(truth, mask, add_awgn(clean, sigma, seed))

"""Curriculum-scheduled, untrained-generator reconstruction of undersampled MRI.

Set ``COGGEN_DISABLE_JIT=1`` before import to run the pure-numpy kernels.
"""

from ._accel import backend_name
from .errors import CogGenError, ConfigError, FormatError, NumericalError
from .forward import MeasurementSet, Pattern, SamplingMask, apply_adjoint, apply_forward, gen_vd_mask
from .generator import CoordinateGrid, GeneratorParams, InrConfig, init_inr, inr_forward
from .metrics import psnr_roi, rlne_roi
from .optimizer import CurriculumConfig, ReconResult, RunConfig, reconstruct

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "CogGenError",
    "ConfigError",
    "FormatError",
    "NumericalError",
    "MeasurementSet",
    "Pattern",
    "SamplingMask",
    "apply_adjoint",
    "apply_forward",
    "gen_vd_mask",
    "CoordinateGrid",
    "GeneratorParams",
    "InrConfig",
    "init_inr",
    "inr_forward",
    "psnr_roi",
    "rlne_roi",
    "CurriculumConfig",
    "ReconResult",
    "RunConfig",
    "reconstruct",
]

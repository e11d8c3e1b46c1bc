"""Dual-mode (student + teacher) k-space sample weighting and its staging.

Student weights follow the model: a measurement whose normalized residual is
below the threshold ``lam`` counts as mastered and gets ``w1``, otherwise
``1 - w1``. Teacher weights follow k-space geometry: samples closer than
``r`` to the centre get ``w2``, the rest ``1 - w2``. The final per-sample
weight is the product. Ties go to the hard / peripheral branch.
"""

import enum
from dataclasses import dataclass, replace

import numpy as np

from .errors import AllZeroMeasurements, BadW, ConfigError, FinalStage, LengthMismatch

RESIDUAL_FLOOR = 1e-8


class Growth(str, enum.Enum):
    ADDITIVE = "ADDITIVE"
    GEOMETRIC = "GEOMETRIC"


def _check_w(w, name):
    if not 0.5 < w <= 1.0:
        raise BadW(f"{name}={w} outside (0.5, 1]")


def _values(m):
    return np.asarray(getattr(m, "values", m))


def normalized_residuals(pred, y):
    """``|pred_i - y_i| / max(|y_i|, 1e-8 * max|y|)``."""
    p, yv = _values(pred), _values(y)
    if p.shape != yv.shape:
        raise LengthMismatch(f"{p.shape} predictions vs {yv.shape} measurements")
    mag = np.abs(yv)
    peak = mag.max() if mag.size else 0.0
    if peak == 0.0:
        raise AllZeroMeasurements("every measurement is zero")
    return np.abs(p - yv) / np.maximum(mag, RESIDUAL_FLOOR * peak)


def student_weights(residuals, lam, w1):
    _check_w(w1, "w1")
    if not lam > 0:
        raise ConfigError("lambda must be positive")
    return np.where(np.asarray(residuals) < lam, w1, 1.0 - w1)


def teacher_weights(distances, r, w2):
    _check_w(w2, "w2")
    if not r > 0:
        raise ConfigError("r must be positive")
    d = np.asarray(getattr(distances, "distances", distances))
    return np.where(d < r, w2, 1.0 - w2)


@dataclass(frozen=True)
class WeightVector:
    s: np.ndarray
    t: np.ndarray
    v: np.ndarray

    def __len__(self):
        return self.v.shape[0]

    def level_counts(self):
        """Number of samples at each distinct weight value."""
        levels, counts = np.unique(self.v, return_counts=True)
        return {float(lv): int(c) for lv, c in zip(levels, counts)}


def combine_weights(s, t):
    s = np.asarray(s, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if s.shape != t.shape:
        raise LengthMismatch(f"student {s.shape} vs teacher {t.shape}")
    return WeightVector(s, t, s * t)


def uniform_weights(n):
    one = np.ones(n)
    return WeightVector(one, one, one.copy())


@dataclass(frozen=True)
class CurriculumState:
    stage: int
    lam: float
    r: float
    w1: float
    w2: float
    K1: int
    K2: tuple
    lambda_mode: Growth = Growth.GEOMETRIC
    lambda_step: float = 2.0
    r_mode: Growth = Growth.GEOMETRIC
    r_step: float = 2.0
    max_distance: float = 0.0

    def __post_init__(self):
        _check_w(self.w1, "w1")
        _check_w(self.w2, "w2")
        if self.K1 < 1 or len(self.K2) != self.K1 or any(k < 1 for k in self.K2):
            raise ConfigError("K2 must hold K1 positive iteration counts")
        if not 1 <= self.stage <= self.K1:
            raise ConfigError(f"stage {self.stage} outside [1, {self.K1}]")
        if not (self.lam > 0 and self.r > 0):
            raise ConfigError("thresholds must be positive")
        for mode, step in ((self.lambda_mode, self.lambda_step), (self.r_mode, self.r_step)):
            if Growth(mode) is Growth.GEOMETRIC and not step > 1:
                raise ConfigError("geometric growth factor must exceed 1")
            if Growth(mode) is Growth.ADDITIVE and not step > 0:
                raise ConfigError("additive increment must be positive")
        if self.stage == self.K1 and self.r < self.max_distance:
            object.__setattr__(self, "r", float(self.max_distance) * 1.05)

    @property
    def total_iterations(self):
        return int(sum(self.K2))

    @property
    def final(self):
        return self.stage == self.K1


def _grow(value, mode, step):
    return value + step if Growth(mode) is Growth.ADDITIVE else value * step


def _solve_step(start, target, stages, mode):
    if stages < 1:
        return 2.0 if Growth(mode) is Growth.GEOMETRIC else 1.0
    target = max(target, 2.0 * start)
    if Growth(mode) is Growth.GEOMETRIC:
        return (target / start) ** (1.0 / stages)
    return (target - start) / stages


def advance_stage(state):
    """Move to the next stage, growing both thresholds."""
    if state.final:
        raise FinalStage(f"already at the final stage {state.K1}")
    return replace(
        state,
        stage=state.stage + 1,
        lam=_grow(state.lam, state.lambda_mode, state.lambda_step),
        r=_grow(state.r, state.r_mode, state.r_step),
    )


def initial_state(
    residuals,
    distances,
    K2,
    w1=0.9,
    w2=0.9,
    lambda0=None,
    r0=None,
    lambda_mode=Growth.GEOMETRIC,
    r_mode=Growth.GEOMETRIC,
    lambda_step=None,
    r_step=None,
    lambda0_percentile=20.0,
    r0_fraction=0.15,
):
    """Stage-1 curriculum state from iteration-0 residuals and the mask geometry.

    Unset thresholds start at the given residual percentile and at
    ``r0_fraction`` of the largest k-space radius; unset growth steps are
    solved so the last stage reaches twice the largest initial residual and
    ``1.05`` times the largest radius.
    """
    residuals = np.asarray(residuals, dtype=np.float64)
    d = np.asarray(getattr(distances, "distances", distances), dtype=np.float64)
    max_d = float(d.max()) if d.size else 0.0
    K2 = tuple(int(k) for k in K2)
    K1 = len(K2)
    if lambda0 is None:
        lambda0 = float(np.percentile(residuals, lambda0_percentile))
        lambda0 = lambda0 if lambda0 > 0 else 1e-6
    if r0 is None:
        r0 = r0_fraction * max_d if max_d > 0 else 1.0
    if lambda_step is None:
        lambda_step = _solve_step(lambda0, 2.0 * float(residuals.max()), K1 - 1, lambda_mode)
    if r_step is None:
        r_step = _solve_step(r0, 1.05 * max_d, K1 - 1, r_mode)
    return CurriculumState(
        stage=1,
        lam=float(lambda0),
        r=float(r0),
        w1=float(w1),
        w2=float(w2),
        K1=K1,
        K2=K2,
        lambda_mode=Growth(lambda_mode),
        lambda_step=float(lambda_step),
        r_mode=Growth(r_mode),
        r_step=float(r_step),
        max_distance=max_d,
    )


def split_budget(total, K1):
    """Split ``total`` iterations over ``K1`` stages.

    The last stage takes 10/16 of the budget and earlier stages share the
    rest in proportions 1, 1, 2, 2, 3, 3, ... (1000/1000/2000/2000/10000 for
    five stages of 16000).
    """
    total, K1 = int(total), int(K1)
    if K1 < 1 or total < K1:
        raise ConfigError("need at least one iteration per stage")
    if K1 == 1:
        return (total,)
    last = int(round(total * 10 / 16))
    shares = np.array([(k + 1) // 2 for k in range(1, K1)], dtype=np.float64)
    rest = total - last
    early = np.floor(rest * shares / shares.sum()).astype(int)
    early = np.maximum(early, 1)
    last = total - int(early.sum())
    return tuple(int(k) for k in early) + (last,)

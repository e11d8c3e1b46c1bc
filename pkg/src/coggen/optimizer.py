"""Staged reconstruction driver and the ablation suites built on it."""

import enum
import logging
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BadConfig, NonFinite, NonFiniteLoss
from .forward import kspace, radial_distances
from .generator import CoordinateGrid, InrConfig, evaluate, fourier_encoding, init_inr, inr_forward
from .metrics import default_roi, psnr_roi, rlne_roi
from .scheduler import (
    Growth,
    advance_stage,
    combine_weights,
    initial_state,
    normalized_residuals,
    split_budget,
    student_weights,
    teacher_weights,
    uniform_weights,
)

log = logging.getLogger(__name__)

DIVERGENCE_FACTOR = 1e3


class OptimizerKind(str, enum.Enum):
    ADAM = "ADAM"
    GD = "GD"


@dataclass(frozen=True)
class CurriculumConfig:
    K2: tuple = (250, 250, 500, 500, 2500)
    w1: float = 0.9
    w2: float = 0.9
    lambda0: float = None
    r0: float = None
    lambda_mode: Growth = Growth.GEOMETRIC
    r_mode: Growth = Growth.GEOMETRIC
    lambda_step: float = None
    r_step: float = None
    lambda0_percentile: float = 20.0
    r0_fraction: float = 0.15
    use_student: bool = True
    use_teacher: bool = True

    @property
    def K1(self):
        return len(self.K2)


@dataclass(frozen=True)
class RunConfig:
    curriculum: CurriculumConfig = field(default_factory=CurriculumConfig)
    inr: InrConfig = field(default_factory=InrConfig)
    optimizer_kind: OptimizerKind = OptimizerKind.ADAM
    learning_rate: float = 1e-4
    adam_betas: tuple = (0.9, 0.999)
    adam_eps: float = 1e-8
    seed: int = 0
    log_every: int = 50
    vanilla_mode: bool = False

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise BadConfig("learning_rate must be positive")
        if self.log_every < 1 or sum(self.curriculum.K2) < 1:
            raise BadConfig("log_every and the iteration budget must be positive")


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0


def optimizer_step(
    params, grad, opt_state, kind=OptimizerKind.ADAM, lr=1e-4, betas=(0.9, 0.999), eps=1e-8
):
    """One GD or Adam update. ``params`` is a flat array or a GeneratorParams."""
    theta = getattr(params, "theta", params)
    grad = np.asarray(grad, dtype=np.float64)
    if not np.all(np.isfinite(grad)):
        raise NonFinite("non-finite gradient")
    if OptimizerKind(kind) is OptimizerKind.GD:
        new = theta - lr * grad
    else:
        if opt_state is None:
            opt_state = AdamState(np.zeros_like(theta), np.zeros_like(theta))
        b1, b2 = betas
        t = opt_state.t + 1
        m = b1 * opt_state.m + (1.0 - b1) * grad
        v = b2 * opt_state.v + (1.0 - b2) * grad * grad
        mhat = m / (1.0 - b1**t)
        vhat = v / (1.0 - b2**t)
        new = theta - lr * mhat / (np.sqrt(vhat) + eps)
        opt_state = AdamState(m, v, t)
    if params is theta:
        return new, opt_state
    return params.with_theta(new), opt_state


@dataclass
class ReconResult:
    image: np.ndarray
    curve: list
    final_params: object
    weights_per_stage: list
    thresholds: list
    stage_wall_time: list
    iterations: int = 0

    def curve_array(self):
        """Curve as a float array with columns iteration, stage, loss, rlne, psnr."""
        return np.array(self.curve, dtype=np.float64).reshape(-1, 5)

    @property
    def final_rlne(self):
        return self.curve[-1][3] if self.curve else float("nan")

    @property
    def final_psnr(self):
        return self.curve[-1][4] if self.curve else float("nan")

    def best(self):
        """``(best rlne, first iteration reaching it)`` over the logged curve."""
        arr = self.curve_array()
        if not len(arr):
            return float("nan"), -1
        k = int(np.nanargmin(arr[:, 3]))
        return float(arr[k, 3]), int(arr[k, 0])

    def first_reaching(self, level):
        """First logged iteration whose RLNE is at or below ``level`` (or -1)."""
        arr = self.curve_array()
        hit = np.flatnonzero(arr[:, 3] <= level)
        return int(arr[hit[0], 0]) if hit.size else -1


def _stage_weights(cfg, state, pred, y, distances):
    n = len(y)
    if not cfg.use_student and not cfg.use_teacher:
        return uniform_weights(n)
    s = student_weights(normalized_residuals(pred, y), state.lam, state.w1) if cfg.use_student else np.ones(n)
    t = teacher_weights(distances, state.r, state.w2) if cfg.use_teacher else np.ones(n)
    return combine_weights(s, t)


def reconstruct(config, mask, y, ground_truth=None, roi=None, params=None, on_step=None):
    """Fit the generator to ``y`` under the staged sample weighting.

    For every stage: recompute student and teacher weights from the current
    network output, run ``K2[stage]`` optimizer steps on the weighted
    normalized loss, then grow both thresholds. ``vanilla_mode`` replaces all
    of this with uniform weights over a single stage of the same total
    length. Raises :class:`NonFiniteLoss` (with the partial result attached)
    if the loss diverges. ``on_step(iteration, params)`` is called after
    every parameter update.
    """
    grid = CoordinateGrid(*mask.shape)
    params = init_inr(config.inr, config.seed) if params is None else params
    features = fourier_encoding(params.fourier_matrix, grid.coords)
    distances = radial_distances(mask)
    if ground_truth is not None and roi is None:
        roi = default_roi(ground_truth)
    cur = config.curriculum

    if config.vanilla_mode:
        budgets = (int(sum(cur.K2)),)
        state = None
    else:
        budgets = tuple(int(k) for k in cur.K2)
        pred0 = kspace(inr_forward(params, grid)).ravel()[mask.index]
        state = initial_state(
            normalized_residuals(pred0, y),
            distances,
            budgets,
            w1=cur.w1,
            w2=cur.w2,
            lambda0=cur.lambda0,
            r0=cur.r0,
            lambda_mode=cur.lambda_mode,
            r_mode=cur.r_mode,
            lambda_step=cur.lambda_step,
            r_step=cur.r_step,
            lambda0_percentile=cur.lambda0_percentile,
            r0_fraction=cur.r0_fraction,
        )

    curve, weights_log, thresholds, walls = [], [], [], []
    opt_state = None
    initial_loss = None
    it = 0

    def record(stage, loss, img):
        if ground_truth is None:
            curve.append((it, stage, float(loss), float("nan"), float("nan")))
        else:
            curve.append(
                (it, stage, float(loss), rlne_roi(ground_truth, img, roi), psnr_roi(ground_truth, img, roi))
            )

    def partial(img):
        return ReconResult(img, curve, params, weights_log, thresholds, walls, it)

    for k, budget in enumerate(budgets):
        stage = k + 1
        t0 = time.perf_counter()
        if state is None:
            wv = uniform_weights(len(y))
            thresholds.append((float("inf"), float("inf")))
        else:
            pred = kspace(inr_forward(params, grid)).ravel()[mask.index]
            wv = _stage_weights(cur, state, pred, y, distances)
            thresholds.append((state.lam, state.r))
        weights_log.append(wv)
        for _ in range(budget):
            loss, grad, img, _ = evaluate(params, grid, mask, y, wv, features)
            if initial_loss is None:
                initial_loss = loss
            if not np.isfinite(loss) or loss > DIVERGENCE_FACTOR * max(initial_loss, 1e-300):
                record(stage, loss, img)
                raise NonFiniteLoss(f"loss diverged at iteration {it}: {loss}", partial(img))
            if it % config.log_every == 0:
                record(stage, loss, img)
            params, opt_state = optimizer_step(
                params,
                grad,
                opt_state,
                config.optimizer_kind,
                config.learning_rate,
                config.adam_betas,
                config.adam_eps,
            )
            it += 1
            if on_step is not None:
                on_step(it, params)
        walls.append(time.perf_counter() - t0)
        log.debug("stage %d done: %d iterations, %.2fs", stage, budget, walls[-1])
        if state is not None and not state.final:
            state = advance_stage(state)

    loss, _, img, _ = evaluate(params, grid, mask, y, weights_log[-1], features)
    record(len(budgets), loss, img)
    return ReconResult(img, curve, params, weights_log, thresholds, walls, it)


# --------------------------------------------------------------------------
# ablations
# --------------------------------------------------------------------------


class Suite(str, enum.Enum):
    BACKBONE_GAIN = "BACKBONE_GAIN"
    CURRICULUM_SIZE = "CURRICULUM_SIZE"
    MODE_WEIGHTING = "MODE_WEIGHTING"


CURRICULUM_SIZES = (1, 2, 3, 4, 5, 6, 8)


@dataclass
class Benchmark:
    truth: np.ndarray
    mask: object
    y: object
    roi: np.ndarray = None

    def __post_init__(self):
        if self.roi is None:
            self.roi = default_roi(self.truth)


def suite_arms(suite, base):
    """``(name, RunConfig)`` pairs for one ablation suite."""
    suite = Suite(suite)
    cur = base.curriculum
    total = int(sum(cur.K2))
    if suite is Suite.BACKBONE_GAIN:
        return [
            ("vanilla", replace(base, vanilla_mode=True)),
            ("coggen", replace(base, vanilla_mode=False)),
        ]
    if suite is Suite.CURRICULUM_SIZE:
        return [
            (f"K1={k}", replace(base, vanilla_mode=False, curriculum=replace(cur, K2=split_budget(total, k))))
            for k in CURRICULUM_SIZES
        ]
    arms = (
        ("uniform", False, False),
        ("teacher-only", False, True),
        ("student-only", True, False),
        ("dual", True, True),
    )
    return [
        (name, replace(base, vanilla_mode=False, curriculum=replace(cur, use_student=s, use_teacher=t)))
        for name, s, t in arms
    ]


@dataclass
class AblationRow:
    suite: str
    arm: str
    seed: int
    final_rlne: float
    final_psnr: float
    best_rlne: float
    best_iteration: int
    iterations: int
    wall_time: float


@dataclass
class AblationReport:
    suite: str
    rows: list
    curves: dict

    def arms(self):
        return list(dict.fromkeys(r.arm for r in self.rows))

    def seeds(self):
        return list(dict.fromkeys(r.seed for r in self.rows))

    def row(self, arm, seed):
        return next(r for r in self.rows if r.arm == arm and r.seed == seed)

    def mean_final_rlne(self):
        return {a: float(np.mean([r.final_rlne for r in self.rows if r.arm == a])) for a in self.arms()}

    def mean_final_psnr(self):
        return {a: float(np.mean([r.final_psnr for r in self.rows if r.arm == a])) for a in self.arms()}


def run_ablation(suite, base_config, data, seeds=(0,), on_result=None):
    """Run every arm of ``suite`` for every seed.

    ``data`` is a :class:`Benchmark` or a callable ``seed -> Benchmark`` (so
    the noise realization can follow the seed). Each arm uses
    ``base_config`` with its seed replaced.
    """
    suite = Suite(suite)
    rows, curves = [], {}
    for seed in seeds:
        bench = data(seed) if callable(data) else data
        for name, cfg in suite_arms(suite, replace(base_config, seed=int(seed))):
            t0 = time.perf_counter()
            res = reconstruct(cfg, bench.mask, bench.y, bench.truth, bench.roi)
            best, best_it = res.best()
            row = AblationRow(
                suite.value,
                name,
                int(seed),
                res.final_rlne,
                res.final_psnr,
                best,
                best_it,
                res.iterations,
                time.perf_counter() - t0,
            )
            rows.append(row)
            curves[(name, int(seed))] = res.curve_array()
            if on_result is not None:
                on_result(row, res)
    return AblationReport(suite.value, rows, curves)

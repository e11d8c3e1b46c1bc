"""JSON experiment configuration.

One document with sections ``phantom``, ``mask``, ``noise``, ``inr``,
``curriculum``, ``optimizer`` and ``output``; every section is optional and
falls back to the desk-scale benchmark defaults.
"""

import json
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .errors import ConfigError
from .forward import Pattern, add_awgn, apply_forward, gen_vd_mask
from .generator import InrConfig
from .optimizer import Benchmark, CurriculumConfig, OptimizerKind, RunConfig
from .phantom import PhantomKind, PhantomSpec, PhaseMode, gen_phantom
from .scheduler import Growth

FORMAT_TAG = "coggen-report/1"


@dataclass(frozen=True)
class MaskSpec:
    pattern: Pattern = Pattern.VD2D
    acceleration_factor: float = 8.0
    center_fraction: float = 0.04
    seed: int = 7


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float = None
    sigma_fraction: float = 0.05
    seed: int = 0


@dataclass(frozen=True)
class OutputSpec:
    write_pgm: bool = True
    checkpoint: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    phantom: PhantomSpec = field(default_factory=PhantomSpec)
    mask: MaskSpec = field(default_factory=MaskSpec)
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    run: RunConfig = field(default_factory=RunConfig)
    output: OutputSpec = field(default_factory=OutputSpec)

    def with_seed(self, seed):
        """Same experiment with the run seed and noise seed set to ``seed``."""
        from dataclasses import replace

        return replace(self, run=replace(self.run, seed=int(seed)), noise=replace(self.noise, seed=int(seed)))


# config key -> CurriculumConfig attribute
_CURRICULUM_KEYS = {
    "K2": "K2",
    "w1": "w1",
    "w2": "w2",
    "lambda": "lambda0",
    "r": "r0",
    "delta_lambda_mode": "lambda_mode",
    "delta_r_mode": "r_mode",
    "lambda0_percentile": "lambda0_percentile",
    "r0_fraction": "r0_fraction",
    "use_student": "use_student",
    "use_teacher": "use_teacher",
}
_STEP_KEYS = {"delta_lambda", "growth_lambda", "delta_r", "growth_r"}
_OPTIMIZER_KEYS = {
    "optimizer_kind",
    "learning_rate",
    "adam_betas",
    "adam_eps",
    "seed",
    "log_every",
    "vanilla_mode",
}


def _plain(section, cls, name, enums=None):
    section = dict(section or {})
    allowed = {f.name for f in fields(cls)}
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in [{name}]: {sorted(unknown)}")
    for key, enum_cls in (enums or {}).items():
        if key in section:
            try:
                section[key] = enum_cls(str(section[key]).upper())
            except ValueError as exc:
                raise ConfigError(f"[{name}] {key}: {exc}") from None
    try:
        return cls(**section)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{name}]: {exc}") from None


def _curriculum(section):
    section = dict(section or {})
    unknown = set(section) - set(_CURRICULUM_KEYS) - _STEP_KEYS - {"K1"}
    if unknown:
        raise ConfigError(f"unknown keys in [curriculum]: {sorted(unknown)}")
    kw = {_CURRICULUM_KEYS[k]: v for k, v in section.items() if k in _CURRICULUM_KEYS}
    if "K2" in kw:
        kw["K2"] = tuple(int(k) for k in kw["K2"])
        if "K1" in section and int(section["K1"]) != len(kw["K2"]):
            raise ConfigError("K1 must equal the length of K2")
    for key in ("lambda_mode", "r_mode"):
        if key in kw:
            kw[key] = Growth(str(kw[key]).upper())
    lam_mode = kw.get("lambda_mode", Growth.GEOMETRIC)
    r_mode = kw.get("r_mode", Growth.GEOMETRIC)
    lam_key = "delta_lambda" if lam_mode is Growth.ADDITIVE else "growth_lambda"
    r_key = "delta_r" if r_mode is Growth.ADDITIVE else "growth_r"
    for given in _STEP_KEYS & set(section):
        if given not in (lam_key, r_key):
            raise ConfigError(f"[curriculum] {given} does not match the configured growth mode")
    if section.get(lam_key) is not None:
        kw["lambda_step"] = float(section[lam_key])
    if section.get(r_key) is not None:
        kw["r_step"] = float(section[r_key])
    try:
        cfg = CurriculumConfig(**kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[curriculum]: {exc}") from None
    if not cfg.K2 or any(k < 1 for k in cfg.K2):
        raise ConfigError("[curriculum] K2 must list positive iteration counts")
    for w in (cfg.w1, cfg.w2):
        if not 0.5 < w <= 1.0:
            raise ConfigError("[curriculum] w1, w2 must lie in (0.5, 1]")
    return cfg


def parse_config(doc):
    """Build an :class:`ExperimentConfig` from a parsed JSON document."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    known = {"phantom", "mask", "noise", "inr", "curriculum", "optimizer", "output"}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    phantom = _plain(
        doc.get("phantom"), PhantomSpec, "phantom", {"kind": PhantomKind, "phase_mode": PhaseMode}
    )
    mask = _plain(doc.get("mask"), MaskSpec, "mask", {"pattern": Pattern})
    noise = _plain(doc.get("noise"), NoiseSpec, "noise")
    inr_section = dict(doc.get("inr") or {})
    inr = _plain(inr_section, InrConfig, "inr")
    opt = dict(doc.get("optimizer") or {})
    unknown = set(opt) - _OPTIMIZER_KEYS
    if unknown:
        raise ConfigError(f"unknown keys in [optimizer]: {sorted(unknown)}")
    if "optimizer_kind" in opt:
        opt["optimizer_kind"] = OptimizerKind(str(opt["optimizer_kind"]).upper())
    if "adam_betas" in opt:
        opt["adam_betas"] = tuple(float(b) for b in opt["adam_betas"])
    try:
        run = RunConfig(curriculum=_curriculum(doc.get("curriculum")), inr=inr, **opt)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[optimizer]: {exc}") from None
    output = _plain(doc.get("output"), OutputSpec, "output")
    return ExperimentConfig(phantom, mask, noise, run, output)


def load_config(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return parse_config(doc)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "value") and not isinstance(obj, (int, float)):
        return obj.value
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def config_to_dict(cfg):
    """Inverse of :func:`parse_config` (round-trips through JSON)."""
    cur = cfg.run.curriculum
    curriculum = {
        "K1": cur.K1,
        "K2": list(cur.K2),
        "w1": cur.w1,
        "w2": cur.w2,
        "lambda": cur.lambda0,
        "r": cur.r0,
        "delta_lambda_mode": cur.lambda_mode,
        "delta_r_mode": cur.r_mode,
        "lambda0_percentile": cur.lambda0_percentile,
        "r0_fraction": cur.r0_fraction,
        "use_student": cur.use_student,
        "use_teacher": cur.use_teacher,
    }
    if cur.lambda_step is not None:
        key = "delta_lambda" if Growth(cur.lambda_mode) is Growth.ADDITIVE else "growth_lambda"
        curriculum[key] = cur.lambda_step
    if cur.r_step is not None:
        key = "delta_r" if Growth(cur.r_mode) is Growth.ADDITIVE else "growth_r"
        curriculum[key] = cur.r_step
    run = cfg.run
    return _jsonable(
        {
            "phantom": asdict(cfg.phantom),
            "mask": asdict(cfg.mask),
            "noise": asdict(cfg.noise),
            "inr": asdict(run.inr),
            "curriculum": curriculum,
            "optimizer": {
                "optimizer_kind": run.optimizer_kind,
                "learning_rate": run.learning_rate,
                "adam_betas": list(run.adam_betas),
                "adam_eps": run.adam_eps,
                "seed": run.seed,
                "log_every": run.log_every,
                "vanilla_mode": run.vanilla_mode,
            },
            "output": asdict(cfg.output),
        }
    )


def build_data(cfg):
    """Phantom, mask and noisy measurements described by ``cfg``."""
    truth = gen_phantom(cfg.phantom)
    m = cfg.mask
    mask = gen_vd_mask(
        cfg.phantom.height, cfg.phantom.width, m.pattern, m.acceleration_factor, m.center_fraction, m.seed
    )
    clean = apply_forward(mask, truth)
    n = cfg.noise
    sigma = n.sigma if n.sigma is not None else n.sigma_fraction * float(np.abs(clean.values).max())
    return Benchmark(truth, mask, add_awgn(clean, sigma, n.seed))

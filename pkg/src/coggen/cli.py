"""Command-line entry point: ``coggen <subcommand> ...``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.
"""

import argparse
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io
from .config import build_data, config_to_dict, load_config
from .errors import ConfigError, FormatError, NumericalError
from .forward import gen_vd_mask, radial_distances
from .optimizer import Suite, reconstruct, suite_arms
from .phantom import gen_phantom
from .theory import SECTIONS, run_verification

log = logging.getLogger("coggen")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

_SUITES = {
    "backbone": Suite.BACKBONE_GAIN,
    "curriculum-size": Suite.CURRICULUM_SIZE,
    "mode-weighting": Suite.MODE_WEIGHTING,
}


def worker_count(jobs):
    """Worker threads allowed by ``COGGEN_THREADS`` (default 1)."""
    raw = os.environ.get("COGGEN_THREADS", "1")
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigError(f"COGGEN_THREADS must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ConfigError("COGGEN_THREADS must be >= 1")
    return max(1, min(cap, jobs))


def _finite_or_none(x):
    return None if x is None or not math.isfinite(x) else float(x)


def _stage_summary(result):
    out = []
    for k, (wv, (lam, r)) in enumerate(zip(result.weights_per_stage, result.thresholds)):
        out.append(
            {
                "stage": k + 1,
                "lambda": _finite_or_none(lam),
                "r": _finite_or_none(r),
                "weight_levels": {f"{lv:.6g}": c for lv, c in wv.level_counts().items()},
                "wall_time_s": result.stage_wall_time[k] if k < len(result.stage_wall_time) else None,
            }
        )
    return out


def _theory_flags(result, distances_max):
    lam = [t[0] for t in result.thresholds]
    r = [t[1] for t in result.thresholds]
    final_v = result.weights_per_stage[-1].t if result.weights_per_stage else np.ones(0)
    return {
        "thresholds_nondecreasing": bool(np.all(np.diff(lam) >= 0) and np.all(np.diff(r) >= 0)),
        "final_stage_teacher_admits_all": bool(np.all(final_v == final_v.max())) if final_v.size else True,
        "final_r_covers_kspace": bool(r[-1] >= distances_max) if r else True,
    }


def run_reconstruction(cfg, out_dir, vanilla=False):
    """Reconstruct once and write image, curve, mask and report into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if vanilla:
        cfg = replace(cfg, run=replace(cfg.run, vanilla_mode=True))
    data = build_data(cfg)
    result = reconstruct(cfg.run, data.mask, data.y, data.truth, data.roi)
    io.write_grid(out / "recon.cgim", result.image)
    io.write_grid(out / "truth.cgim", data.truth)
    io.write_mask(out / "mask.cgim", data.mask)
    io.write_curve_csv(out / "curve.csv", result.curve)
    if cfg.output.write_pgm:
        io.write_pgm(out / "recon.pgm", result.image)
    if cfg.output.checkpoint:
        io.save_params(out / "params.npz", result.final_params)
    best, best_it = result.best()
    report = io.RunReport(
        config=config_to_dict(cfg),
        final_rlne_roi=float(result.final_rlne),
        final_psnr_db=float(result.final_psnr),
        best_rlne_roi=best,
        best_iteration=best_it,
        iterations=result.iterations,
        stages=_stage_summary(result),
        curve_path="curve.csv",
        theory_flags=_theory_flags(result, radial_distances(data.mask).max_distance),
    )
    io.write_json(out / "report.json", report.to_dict())
    return report


def cmd_gen_phantom(args):
    cfg = load_config(args.spec)
    io.write_grid(args.out, gen_phantom(cfg.phantom))
    return EXIT_OK


def cmd_gen_mask(args):
    cfg = load_config(args.spec)
    m = cfg.mask
    mask = gen_vd_mask(
        cfg.phantom.height, cfg.phantom.width, m.pattern, m.acceleration_factor, m.center_fraction, m.seed
    )
    io.write_mask(args.out, mask)
    return EXIT_OK


def _load(args):
    cfg = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def cmd_reconstruct(args):
    rep = run_reconstruction(_load(args), args.out_dir, vanilla=args.vanilla)
    print(f"final RLNE_ROI {rep.final_rlne_roi:.6g}  PSNR {rep.final_psnr_db:.4g} dB  ({rep.iterations} iterations)")
    return EXIT_OK


def cmd_ablate(args):
    base = _load(args)
    if args.seeds < 1:
        raise ConfigError("--seeds must be >= 1")
    first = base.run.seed
    jobs = []
    for seed in range(first, first + args.seeds):
        seeded = base.with_seed(seed)
        for name, run in suite_arms(_SUITES[args.suite], seeded.run):
            jobs.append((name, seed, replace(seeded, run=run)))
    root = Path(args.out_dir)

    def work(job):
        name, seed, cfg = job
        return name, seed, run_reconstruction(cfg, root / name / f"seed{seed}")

    workers = worker_count(len(jobs))
    if workers == 1:
        done = [work(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(work, jobs))
    rows = [
        {
            "arm": name,
            "seed": seed,
            "final_rlne_roi": rep.final_rlne_roi,
            "final_psnr_db": rep.final_psnr_db,
            "best_rlne_roi": rep.best_rlne_roi,
            "best_iteration": rep.best_iteration,
        }
        for name, seed, rep in done
    ]
    arms = list(dict.fromkeys(r["arm"] for r in rows))
    means = {a: float(np.mean([r["final_rlne_roi"] for r in rows if r["arm"] == a])) for a in arms}
    io.write_json(
        root / "ablation.json",
        {"format": io.REPORT_FORMAT, "suite": _SUITES[args.suite].value, "rows": rows, "mean_final_rlne_roi": means},
    )
    for a in arms:
        print(f"{a:>14s}  mean final RLNE_ROI {means[a]:.6g}")
    return EXIT_OK


def cmd_verify_theory(args):
    report = run_verification(args.section, seed=args.seed or 0)
    ok = all(v["passed"] for v in report.values())
    io.write_json(args.out, {"format": io.REPORT_FORMAT, "passed": ok, "sections": report})
    for name, v in report.items():
        print(f"{name:>14s}  {'PASS' if v['passed'] else 'FAIL'}")
    return EXIT_OK if ok else EXIT_NUMERIC


def build_parser():
    p = argparse.ArgumentParser(prog="coggen", description="Curriculum-scheduled generator fitting for undersampled MRI.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen-phantom", help="render the configured phantom to a CGIM grid")
    s.add_argument("--spec", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gen_phantom)

    s = sub.add_parser("gen-mask", help="draw the configured sampling mask to a CGIM mask")
    s.add_argument("--spec", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gen_mask)

    s = sub.add_parser("reconstruct", help="run one reconstruction")
    s.add_argument("--config", required=True)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--vanilla", action="store_true", help="uniform weights, single stage")
    s.add_argument("--seed", type=int, default=None, help="override the run and noise seed")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("ablate", help="run an ablation suite over several seeds")
    s.add_argument("--suite", required=True, choices=sorted(_SUITES))
    s.add_argument("--config", required=True)
    s.add_argument("--seeds", type=int, default=1)
    s.add_argument("--seed", type=int, default=None, help="first seed (default: config seed)")
    s.add_argument("--out-dir", required=True)
    s.set_defaults(func=cmd_ablate)

    s = sub.add_parser("verify-theory", help="numerical checks of the convergence and noise analysis")
    s.add_argument("--section", choices=SECTIONS + ("all",), default="all")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_verify_theory)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FormatError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

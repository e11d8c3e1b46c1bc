"""Numba kernels against their pure-numpy fallbacks.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat N] [--skip-iteration]

Kernel timings call both flavours in-process. The per-iteration timing runs
one short reconstruction in two subprocesses, one with ``COGGEN_DISABLE_JIT=1``,
so the whole pipeline is measured under each import-time binding.
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from coggen import kernels

ITERATION_SNIPPET = r"""
import json, time
from coggen import kernels
from coggen.config import build_data, load_config
from coggen.optimizer import CurriculumConfig, reconstruct
from dataclasses import replace
cfg = load_config({path!r})
data = build_data(cfg)
run = replace(cfg.run, log_every=10**9, curriculum=replace(cfg.run.curriculum, K2=(2, 2, 2, 2, 2)))
reconstruct(run, data.mask, data.y)  # warm-up (and JIT compile)
run = replace(run, curriculum=replace(run.curriculum, K2=({n}, {n}, {n}, {n}, {n})))
t0 = time.perf_counter()
reconstruct(run, data.mask, data.y)
print(json.dumps({{"backend": kernels.fft_rows.__name__, "ms_per_iter": 1e3 * (time.perf_counter() - t0) / (5 * {n})}}))
"""


def best_of(fn, repeat):
    fn()
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_table(repeat):
    rng = np.random.default_rng(0)
    a = rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))
    z = rng.standard_normal((4096, 64)) * 0.1
    m = rng.standard_normal((24, 16))
    g = m.T @ m
    cases = {
        "fft_rows 64x64": (lambda: kernels.fft_rows_numba(a), lambda: kernels.fft_rows_numpy(a)),
        "sine 4096x64": (
            lambda: kernels.sine_activation_numba(z, 30.0),
            lambda: kernels.sine_activation_numpy(z, 30.0),
        ),
        "jacobi 16x16": (
            lambda: kernels.jacobi_sweeps_numba(g.copy(), np.eye(16), 1e-15, 60),
            lambda: kernels.jacobi_sweeps_numpy(g.copy(), np.eye(16), 1e-15, 60),
        ),
    }
    rows = []
    for name, (fast, slow) in cases.items():
        t_nb, t_np = best_of(fast, repeat), best_of(slow, repeat)
        rows.append({"kernel": name, "numba_ms": 1e3 * t_nb, "numpy_ms": 1e3 * t_np, "speedup": t_np / t_nb})
    return rows


def iteration_timing(config, n):
    out = {}
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, COGGEN_DISABLE_JIT=flag)
        code = ITERATION_SNIPPET.format(path=config, n=n)
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        out[label] = json.loads(res.stdout.strip().splitlines()[-1])
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--config", default=os.path.join(os.path.dirname(__file__), "..", "configs", "benchmark.json"))
    ap.add_argument("--iterations", type=int, default=10, help="iterations per stage in the pipeline timing")
    ap.add_argument("--skip-iteration", action="store_true")
    args = ap.parse_args(argv)

    print(f"{'kernel':<16}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for r in kernel_table(args.repeat):
        print(f"{r['kernel']:<16}{r['numba_ms']:>12.4f}{r['numpy_ms']:>12.4f}{r['speedup']:>10.2f}")
    if not args.skip_iteration:
        it = iteration_timing(os.path.abspath(args.config), args.iterations)
        for label, r in it.items():
            print(f"reconstruction iteration ({label}, {r['backend']}): {r['ms_per_iter']:.2f} ms")


if __name__ == "__main__":
    main()

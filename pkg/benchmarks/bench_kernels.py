"""Benchmark the compiled kernels against the NumPy fallback.

Runs each kernel on identical inputs with both backends and prints a
small table of timings and speedups.  The fallback is loaded from
``autoviz._kernels_py`` directly, so one process can time both; set
``AUTOVIZ_FORCE_PY_KERNELS=1`` before launching to confirm the package
itself also runs on the fallback.

Usage:
    python3 benchmarks/bench_kernels.py [--rows N] [--repeat K]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from autoviz import _kernels_py, kernels


def time_call(fn, *args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=100_000)
    parser.add_argument("--grid", type=int, default=256)
    parser.add_argument("--dims", type=int, default=8)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(7)
    values = rng.normal(size=args.rows)
    grid = np.linspace(values.min(), values.max(), args.grid)
    h = 0.2
    x = rng.normal(size=(args.rows, args.dims))
    present = rng.random((args.rows, args.dims)) < 0.8

    if kernels.BACKEND != "compiled":
        print("warning: compiled backend unavailable; comparing the "
              "fallback against itself")

    cases = [
        ("kde_gaussian", (values, grid, h)),
        ("masked_distances", (x, present, 0)),
    ]
    print(f"rows={args.rows} grid={args.grid} dims={args.dims} "
          f"repeat={args.repeat} (best-of timings)")
    print(f"{'kernel':<18} {'compiled':>12} {'python':>12} {'speedup':>9}")
    for name, call_args in cases:
        compiled = time_call(getattr(kernels, name), *call_args,
                             repeat=args.repeat)
        python = time_call(getattr(_kernels_py, name), *call_args,
                           repeat=args.repeat)
        print(f"{name:<18} {compiled * 1000:>10.2f}ms {python * 1000:>10.2f}ms "
              f"{python / compiled:>8.1f}x")

        a = getattr(kernels, name)(*call_args)
        b = getattr(_kernels_py, name)(*call_args)
        finite = np.isfinite(a) & np.isfinite(b)
        assert np.array_equal(np.isfinite(a), np.isfinite(b))
        assert np.allclose(a[finite], b[finite], atol=1e-12), name


if __name__ == "__main__":
    main()

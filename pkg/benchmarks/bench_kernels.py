#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Times the three hot kernels (potential rasterization, Gaussian max map,
batched Weiszfeld) on representative sizes and prints a comparison table.
Runs fine with only the fallback built, in which case it reports a single
column.
"""

import argparse
import time

import numpy as np

from softfocus._kernels import numpy_impl

try:
    from softfocus._kernels import _native as native
except ImportError:
    native = None


def _time(fn, *args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    gen = np.random.default_rng(0)
    cases = []

    for size, n in ((128, 4), (512, 4), (512, 6)):
        pts = gen.uniform(0, size - 1, (n, 2))
        cases.append(
            (f"rasterize_potential {size}x{size}, {n} pts",
             (pts, size, size), "rasterize_potential_grid")
        )
    for size, n in ((128, 4), (512, 6)):
        ctr = gen.uniform(0, size - 1, (n, 2))
        cases.append(
            (f"gaussian_max {size}x{size}, {n} centers",
             (ctr, 10.0, size, size), "gaussian_max_grid")
        )
    for batch in (1000, 10000):
        sets = gen.uniform(0, 512, (batch, 4, 2))
        cases.append(
            (f"weiszfeld_batch {batch}x4 pts, tol 1e-3",
             (sets, 1e-3, 5000), "weiszfeld_batch")
        )

    name_w = max(len(label) for label, _, _ in cases)
    if native is None:
        print("compiled kernels not built; timing the numpy fallback only\n")
        print(f"{'kernel':<{name_w}}  {'numpy':>10}")
        for label, call_args, attr in cases:
            t = _time(getattr(numpy_impl, attr), *call_args, repeat=args.repeat)
            print(f"{label:<{name_w}}  {t * 1e3:>8.2f}ms")
        return

    print(f"{'kernel':<{name_w}}  {'numpy':>10}  {'native':>10}  {'speedup':>8}")
    for label, call_args, attr in cases:
        t_np = _time(getattr(numpy_impl, attr), *call_args, repeat=args.repeat)
        t_nat = _time(getattr(native, attr), *call_args, repeat=args.repeat)
        print(
            f"{label:<{name_w}}  {t_np * 1e3:>8.2f}ms  {t_nat * 1e3:>8.2f}ms"
            f"  {t_np / t_nat:>7.1f}x"
        )


if __name__ == "__main__":
    main()

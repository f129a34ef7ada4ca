#!/usr/bin/env python3
"""Timing comparison of the compiled and pure-numpy kernel backends.

Runs each hot kernel on workloads shaped like the Monte Carlo harness
(subsample order statistics, limit-law draws, bootstrap bias sums) and
prints a table of per-call times and speedups.

Usage: python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from tailquant._kernels import _pykernels

try:
    from tailquant._kernels import _ckernels
except ImportError:
    _ckernels = None


def timeit(fn, *args, repeat=7):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def contig(a):
    return np.ascontiguousarray(a)


def main():
    rng = np.random.default_rng(0)
    cases = []

    # subsample order statistics at coverage-experiment scale
    values = rng.normal(size=(1000, 204))
    ranks = np.array([20, 2, 0], dtype=np.int64)
    cases.append(("order stats (1000 x 204, 3 ranks)", "descending_order_stats", (contig(values), ranks)))

    values_big = rng.normal(size=(1000, 3162))
    ranks_big = np.array([66, 66, 74], dtype=np.int64)
    cases.append(("order stats (1000 x 3162, 3 ranks)", "descending_order_stats", (contig(values_big), ranks_big)))

    # limit-law transform at critical-value scale
    exps = rng.standard_exponential((1_000_000, 3))
    cases.append(("limit ratio (1e6 draws, q=2)", "limit_ratio_from_exponentials", (contig(exps), 0.25, 2, 2, 2.0)))

    # bootstrap bias sums at jw scale
    vals = rng.normal(size=(1000, 2000))
    sig = rng.random((1000, 2000))
    centers = rng.normal(size=1000)
    cases.append(("gaussian bias sums (1000 x 2000)", "gaussian_kernel_bias_sums", (contig(vals), contig(sig), centers, 0.3)))

    header = f"{'kernel':<38} {'numpy':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, fn_name, args in cases:
        t_py = timeit(getattr(_pykernels, fn_name), *args)
        if _ckernels is None:
            print(f"{name:<38} {t_py * 1e3:>8.2f}ms {'n/a':>10} {'n/a':>8}")
            continue
        t_c = timeit(getattr(_ckernels, fn_name), *args)
        print(f"{name:<38} {t_py * 1e3:>8.2f}ms {t_c * 1e3:>8.2f}ms {t_py / t_c:>7.1f}x")

    if _ckernels is None:
        print("\ncompiled backend not built; showing numpy fallback only")


if __name__ == "__main__":
    main()

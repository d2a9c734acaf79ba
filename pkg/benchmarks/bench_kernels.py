#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Runs the two hot loops (window counting and online network training) on
synthetic data of adjustable size and prints a timing table:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --tokens 2000000 --side-length 25
"""

import argparse
import time

import numpy as np

from wordgroups._kernels import pykernels

try:
    from wordgroups._kernels import _speedups
except ImportError:
    _speedups = None


def time_call(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_count(args):
    rng = np.random.default_rng(0)
    target_rows = rng.integers(-1, args.n_targets,
                               size=args.tokens).astype(np.int32)
    context_cols = rng.integers(-1, args.n_contexts,
                                size=args.tokens).astype(np.int32)
    call = (target_rows, context_cols, args.n_targets, args.n_contexts,
            args.side_length, 0)
    t_py, slow = time_call(pykernels.count_windows, *call)
    row = {"kernel": "count_windows", "python": t_py, "c": None}
    if _speedups is not None:
        t_c, fast = time_call(_speedups.count_windows, *call)
        assert np.array_equal(slow[0], fast[0])
        row["c"] = t_c
    return row


def bench_train(args):
    rng = np.random.default_rng(1)
    nnz_per = 5
    n = args.occurrences
    indices = np.concatenate([
        rng.choice(args.dim, size=nnz_per, replace=False).astype(np.int32)
        for _ in range(n)])
    indptr = np.arange(0, (n + 1) * nnz_per, nnz_per, dtype=np.int64)
    data = rng.random(n * nnz_per)
    start = rng.random((args.units, args.dim))
    call_tail = (indptr, indices, data, 0.3, 0.01, 0.1, 0, 3 * n)
    t_py, _ = time_call(pykernels.train_stream, start.copy(), *call_tail,
                        repeat=1)
    row = {"kernel": "train_stream", "python": t_py, "c": None}
    if _speedups is not None:
        t_c, _ = time_call(_speedups.train_stream, start.copy(), *call_tail)
        row["c"] = t_c
    return row


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tokens", type=int, default=500_000)
    parser.add_argument("--n-targets", type=int, default=1000)
    parser.add_argument("--n-contexts", type=int, default=1000)
    parser.add_argument("--side-length", type=int, default=5)
    parser.add_argument("--occurrences", type=int, default=100_000)
    parser.add_argument("--dim", type=int, default=2000)
    parser.add_argument("--units", type=int, default=10)
    args = parser.parse_args()

    if _speedups is None:
        print("compiled extension not available; timing the fallback only")
    rows = [bench_count(args), bench_train(args)]
    print(f"{'kernel':<16}{'python (s)':>12}{'c (s)':>10}{'speedup':>9}")
    for row in rows:
        c_txt = f"{row['c']:.3f}" if row["c"] is not None else "-"
        speedup = (f"{row['python'] / row['c']:.1f}x"
                   if row["c"] else "-")
        print(f"{row['kernel']:<16}{row['python']:>12.3f}{c_txt:>10}"
              f"{speedup:>9}")


if __name__ == "__main__":
    main()

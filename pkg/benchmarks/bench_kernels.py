#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the three hot kernels at a few function-space sizes, plus one law
suite end to end under each backend.  The first numba call pays JIT
compilation; a warmup pass runs before timing so the table shows steady
state.  Run:  python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from agt import _kernels
from agt.laws import ScaleCaps, run_suite


def make_case(rng, k, n, m):
    tables = rng.integers(0, m, size=(k, n))
    dist = np.abs(np.arange(m)[:, None] - np.arange(m)[None, :]).astype(np.int64)
    adj = rng.random((k, k)) < 0.1
    tab = rng.random((k, n)) < 0.3
    f0 = rng.integers(0, n, size=n)
    f1 = rng.integers(0, m, size=(n, m))
    powers = (m ** np.arange(n - 1, -1, -1)).astype(np.int64)
    return tables, dist, adj, tab, f0, f1, powers


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels(repeats):
    rng = np.random.default_rng(0)
    cases = [(64, 3, 4), (256, 4, 4), (1024, 5, 4), (4096, 6, 4)]
    rows = []
    for k, n, m in cases:
        tables, dist, adj, tab, f0, f1, powers = make_case(rng, k, n, m)
        timings = {}
        for backend in ("numpy", "numba"):
            _kernels.set_backend(backend)
            # warmup (includes JIT compilation for numba)
            _kernels.pairwise_sup(tables, dist)
            _kernels.reach(adj, tab)
            _kernels.pull_ranks(tables, f0, f1, powers)
            timings[backend] = (
                time_call(lambda: _kernels.pairwise_sup(tables, dist), repeats),
                time_call(lambda: _kernels.reach(adj, tab), repeats),
                time_call(lambda: _kernels.pull_ranks(tables, f0, f1, powers), repeats),
            )
        rows.append((k, timings))
    print(f"{'K':>6} {'kernel':>14} {'numpy':>12} {'numba':>12} {'speedup':>8}")
    names = ("pairwise_sup", "reach", "pull_ranks")
    for k, timings in rows:
        for i, name in enumerate(names):
            np_t, nb_t = timings["numpy"][i], timings["numba"][i]
            print(
                f"{k:>6} {name:>14} {np_t * 1e6:>10.1f}us {nb_t * 1e6:>10.1f}us "
                f"{np_t / nb_t:>7.1f}x"
            )


def bench_suite(suite, repeats):
    print(f"\nend-to-end law suite: {suite}")
    for backend in ("numpy", "numba"):
        _kernels.set_backend(backend)
        run_suite(suite, ScaleCaps(n_random=20))  # warmup
        best = min(
            run_suite(suite, ScaleCaps(n_random=20))[0].elapsed
            for _ in range(repeats)
        )
        print(f"  {backend:>6}: {best:.3f}s")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--suite", default="seq-approx")
    args = parser.parse_args()
    bench_kernels(args.repeats)
    bench_suite(args.suite, max(1, args.repeats // 2))


if __name__ == "__main__":
    main()

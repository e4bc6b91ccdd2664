#!/usr/bin/env python3
"""Benchmark the hot kernels: numba @njit vs the pure-numpy fallback.

The cosine top-k scan dominates a real pipeline run (every record against
every noun synset), so that's what gets measured, plus the COO mass
accumulation. Run with --full for a dictionary-scale load.

    python benchmarks/bench_kernels.py [--full] [--repeat N]
"""

import argparse
import time

import numpy as np

from nomtax import kernels
from nomtax.backend import BACKEND


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_topk(nq, nc, dim, k, min_score, repeat):
    rng = np.random.default_rng(0)
    Q = rng.normal(size=(nq, dim))
    C = rng.normal(size=(nc, dim))
    qn = np.linalg.norm(Q, axis=1)
    cn = np.linalg.norm(C, axis=1)

    def run(kernel):
        idx = np.full((nq, k), -1, dtype=np.int64)
        score = np.zeros((nq, k))
        n = np.zeros(nq, dtype=np.int64)
        kernel(Q, C, qn, cn, k, min_score, idx, score, n)
        return idx

    results = {}
    results["numpy"] = time_call(lambda: run(kernels._topk_numpy), repeat)
    if BACKEND == "numba":
        run(kernels._topk_numba)  # compile outside the timer
        results["numba"] = time_call(lambda: run(kernels._topk_numba), repeat)
    return results


def bench_accumulate(n_triples, shape, repeat):
    rng = np.random.default_rng(1)
    rows = rng.integers(0, shape[0], size=n_triples)
    cols = rng.integers(0, shape[1], size=n_triples)
    vals = rng.normal(size=n_triples)

    results = {}

    def run_numpy():
        out = np.zeros(shape)
        np.add.at(out, (rows, cols), vals)

    results["numpy"] = time_call(run_numpy, repeat)
    if BACKEND == "numba":
        out = np.zeros(shape)
        kernels._accumulate_numba(rows, cols, vals, out)  # compile

        def run_numba():
            out = np.zeros(shape)
            kernels._accumulate_numba(rows, cols, vals, out)

        results["numba"] = time_call(run_numba, repeat)
    return results


def report(label, results):
    base = results["numpy"]
    line = f"{label:<42} numpy {base * 1e3:9.2f} ms"
    if "numba" in results:
        line += f"   numba {results['numba'] * 1e3:9.2f} ms   ({base / results['numba']:.2f}x)"
    print(line)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--full", action="store_true", help="dictionary-scale sizes (slow)")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if BACKEND != "numba":
        print("note: numba backend unavailable or disabled; timing numpy only")

    cases = [(200, 2_000, 64), (500, 10_000, 128)]
    if args.full:
        cases.append((6_341, 82_115, 384))
    print(f"cosine top-k scan (k=10, min_score=0.5), best of {args.repeat}")
    for nq, nc, dim in cases:
        report(f"  {nq} x {nc} @ dim {dim}", bench_topk(nq, nc, dim, 10, 0.5, args.repeat))

    print(f"COO mass accumulation, best of {args.repeat}")
    for n_triples in (100_000, 1_000_000):
        report(f"  {n_triples:,} triples into 9x5000", bench_accumulate(n_triples, (9, 5000), args.repeat))


if __name__ == "__main__":
    main()

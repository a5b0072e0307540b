"""Benchmark the numba-compiled kernels against the pure-numpy fallbacks.

Runs the cyclic Jacobi eigensolver and the Gram-Schmidt kernel through both
backends on the same inputs, checks that the results agree, and prints a
timing table.  Usage:

    python benchmarks/bench_kernels.py [--sizes 8,16,32,64] [--repeat 5]
"""

import argparse
import time

import numpy as np

from qrel._kernels import (
    jacobi_sweeps_loops,
    jacobi_sweeps_numpy,
    mgs_rows_loops,
    mgs_rows_numpy,
)

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False
    print("numba not installed: timing the loop kernels uncompiled")


def make_hermitian(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (g + g.conj().T) / 2


def time_call(func, *args, repeat=5):
    best = np.inf
    for _ in range(repeat):
        started = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - started)
    return best


def bench_jacobi(fast, rng, sizes, repeat):
    rows = []
    for n in sizes:
        h = make_hermitian(rng, n)
        tol = 1e-14 * np.linalg.norm(h)

        def run_fast():
            a = h.copy()
            v = np.eye(n, dtype=complex)
            assert fast(a, v, tol, 64) >= 0
            return a, v

        def run_numpy():
            a = h.copy()
            v = np.eye(n, dtype=complex)
            assert jacobi_sweeps_numpy(a, v, tol, 64) >= 0
            return a, v

        a1, _ = run_fast()
        a2, _ = run_numpy()
        assert np.allclose(np.sort(np.diagonal(a1).real), np.sort(np.diagonal(a2).real), atol=1e-10)
        rows.append((f"jacobi {n}x{n}", time_call(run_fast, repeat=repeat), time_call(run_numpy, repeat=repeat)))
    return rows


def bench_mgs(fast, rng, sizes, repeat):
    rows = []
    for n in sizes:
        gens = rng.normal(size=(n, n * n)) + 1j * rng.normal(size=(n, n * n))

        def run_fast():
            out = np.empty_like(gens)
            return fast(gens, out, 1e-9)

        def run_numpy():
            out = np.empty_like(gens)
            return mgs_rows_numpy(gens, out, 1e-9)

        assert run_fast() == run_numpy()
        rows.append((f"mgs {n}x{n * n}", time_call(run_fast, repeat=repeat), time_call(run_numpy, repeat=repeat)))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="8,16,32,64")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(0)

    jacobi_fast = njit(cache=True)(jacobi_sweeps_loops) if HAS_NUMBA else jacobi_sweeps_loops
    mgs_fast = njit(cache=True)(mgs_rows_loops) if HAS_NUMBA else mgs_rows_loops

    # trigger compilation outside the timed region
    warm = make_hermitian(rng, 4)
    jacobi_fast(warm.copy(), np.eye(4, dtype=complex), 1e-14, 64)
    mgs_fast(warm.reshape(2, 8), np.empty((2, 8), complex), 1e-9)

    label = "numba" if HAS_NUMBA else "python"
    rows = bench_jacobi(jacobi_fast, rng, sizes, args.repeat)
    rows += bench_mgs(mgs_fast, rng, sizes, args.repeat)

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {label:>10}  {'numpy':>10}  {'speedup':>8}")
    for name, fast_t, numpy_t in rows:
        print(f"{name:<{width}}  {fast_t * 1e3:>8.2f}ms  {numpy_t * 1e3:>8.2f}ms  {numpy_t / fast_t:>7.1f}x")


if __name__ == "__main__":
    main()

"""Compare the compiled kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--reps N]
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from casdec.kernels import _pykernels

try:
    from casdec.kernels import _ckernels
except ImportError:
    _ckernels = None


def time_fn(fn, reps):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def bench_topk(mod, rows, k, reps):
    return time_fn(lambda: [mod.topk_indices(r, k) for r in rows], reps)


def bench_lcs(mod, pairs, reps):
    return time_fn(lambda: [mod.lcs_length(a, b) for a, b in pairs], reps)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=7)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    rows = [rng.random(512) for _ in range(200)]
    pairs = [
        (list(rng.integers(0, 30, size=80)), list(rng.integers(0, 30, size=80)))
        for _ in range(100)
    ]

    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("cython backend unavailable; benchmarking fallback only")

    print(f"{'kernel':<14}{'backend':<10}{'median s':<12}speedup")
    baselines = {}
    for kernel, bench in (("topk_indices", lambda m: bench_topk(m, rows, 10, args.reps)),
                          ("lcs_length", lambda m: bench_lcs(m, pairs, args.reps))):
        for name, mod in backends:
            t = bench(mod)
            if name == "python":
                baselines[kernel] = t
                speed = "1.00x"
            else:
                speed = f"{baselines[kernel] / t:.2f}x"
            print(f"{kernel:<14}{name:<10}{t:<12.5f}{speed}")

    # backends must agree before speed matters
    if _ckernels is not None:
        for r in rows[:20]:
            assert list(_ckernels.topk_indices(r, 10)) == \
                list(_pykernels.topk_indices(r, 10))
        for a, b in pairs[:20]:
            assert _ckernels.lcs_length(a, b) == _pykernels.lcs_length(a, b)
        print("agreement check: ok")


if __name__ == "__main__":
    main()

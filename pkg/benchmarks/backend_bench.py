"""Benchmark the numba kernels against the pure-numpy fallbacks.

Run:  python benchmarks/backend_bench.py [--sizes 100000,1000000]

Both implementations are imported directly (the TAILTEST_NUMBA env flag
only picks which one the library binds by default), so a single run times
both paths. The numba variants are warmed once before timing so JIT
compilation does not pollute the numbers.
"""

import argparse
import time

import numpy as np

from tailtest import backend
from tailtest.kernels import IMPLS


def _time(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def run(sizes):
    rng = np.random.default_rng(7)
    names = list(IMPLS)
    if "numba" not in IMPLS:
        print("numba backend unavailable; timing numpy only")
    print(f"active backend: {backend.ACTIVE}\n")
    header = f"{'kernel':<16}{'size':>10}" + "".join(f"{n:>14}" for n in names)
    print(header + ("   speedup" if len(names) == 2 else ""))
    print("-" * len(header))

    for size in sizes:
        z = (rng.uniform(0.05, 2.0, size)
             + 1j * rng.uniform(-2000.0, 2000.0, size))
        u = rng.random(size)
        w = np.ones(size)
        n_cols = 10
        u2 = rng.random((size // n_cols or 1, n_cols))
        cases = [
            ("lgamma_arr", (z,)),
            ("digamma_arr", (z,)),
            ("stat_sum", (u, w, 2.5)),
            ("mc_transform", (u2, 2.0, n_cols)),
        ]
        for kernel, args in cases:
            times = []
            for name in names:
                fn = IMPLS[name][kernel]
                fn(*args)  # warm (JIT compile on first numba call)
                times.append(_time(fn, *args))
            row = f"{kernel:<16}{size:>10}" + "".join(
                f"{t * 1e3:>12.2f}ms" for t in times)
            if len(times) == 2:
                row += f"{times[0] / times[1]:>9.2f}x"
            print(row)
        print()


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="100000,1000000",
                    help="comma-separated array sizes")
    args = ap.parse_args()
    run([int(s) for s in args.sizes.split(",")])

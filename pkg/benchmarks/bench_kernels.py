"""Time the compiled kernels against their numpy counterparts.

    python benchmarks/bench_kernels.py [--n 16384] [--repeat 5]

Reports the best-of-``repeat`` wall time per call, after one warm-up call
that also triggers numba compilation.
"""

import argparse
import time

import numpy as np

from lrdkit import _kernels
from lrdkit._accel import HAVE_NUMBA
from lrdkit.mfdfa import MfdfaConfig


def best_time(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_windows(n, repeat):
    prof = np.cumsum(np.random.default_rng(0).standard_normal(n))
    scales = MfdfaConfig().scales(n)
    bases = {int(s): _kernels.poly_basis(int(s), 1) for s in scales}

    def run(kernel):
        return lambda: [kernel(prof, s, b) for s, b in bases.items()]

    rows = [("window_f2 numpy", best_time(run(_kernels.window_f2_numpy), repeat))]
    if HAVE_NUMBA:
        rows.append(("window_f2 numba", best_time(run(_kernels.window_f2_jit), repeat)))
    return rows


def bench_ar1(n, repeat):
    e = np.random.default_rng(1).standard_normal(n)
    rows = [("ar1 numpy (lfilter)", best_time(lambda: _kernels.ar1_numpy(0.9, e), repeat))]
    if HAVE_NUMBA:
        rows.append(("ar1 numba", best_time(lambda: _kernels.ar1_jit(0.9, e, 0.0), repeat)))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=2**14)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not HAVE_NUMBA:
        print("numba unavailable or disabled; timing numpy kernels only")
    for title, rows in (
        (f"window fluctuations, 40 scales, T={args.n}", bench_windows(args.n, args.repeat)),
        (f"AR(1) recursion, n={100 * args.n}", bench_ar1(100 * args.n, args.repeat)),
    ):
        print(title)
        base = rows[0][1]
        for name, t in rows:
            print(f"  {name:<22} {1e3 * t:9.3f} ms   x{base / t:5.2f}")


if __name__ == "__main__":
    main()

"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row reports the best-of-``repeat`` wall time per call for both
backends after one warm-up call (which also triggers JIT compilation).
"""
import argparse
import math
import time

import numpy as np

from tridecouple.kernels import numba_backend, numpy_backend
from tridecouple.orbitlab import _pattern_setup


def best_time(fn, repeat, inner):
    fn()
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        for _ in range(inner):
            fn()
        best = min(best, (time.perf_counter() - start) / inner)
    return best


def cases(rng):
    g3 = rng.standard_normal((3, 3, 3))
    g3 = (g3 + g3.transpose(0, 2, 1) + g3.transpose(1, 0, 2) + g3.transpose(1, 2, 0) + g3.transpose(2, 0, 1) + g3.transpose(2, 1, 0)) / 6
    s3 = np.linalg.qr(rng.standard_normal((3, 3)))[0]
    ss = np.stack([np.linalg.qr(rng.standard_normal((3, 3)))[0] for _ in range(256)])
    angles = rng.uniform(-np.pi, np.pi, size=(192, 3))
    refl = np.arange(192) % 2 == 1
    flat, weights = _pattern_setup(3, "fd")
    thetas = 2 * np.pi * np.arange(160) / 160
    return [
        ("act_dense n=3", lambda k: k.act_dense(s3, g3), 2000),
        ("act_batch 256 x n=3", lambda k: k.act_batch(ss, g3), 50),
        ("givens_batch 192 x n=3", lambda k: k.givens_batch(angles, refl, 3), 200),
        ("pattern_residuals 192 starts", lambda k: k.pattern_residuals(angles, refl, g3, flat, weights), 100),
        ("molien_average D=40, 160 nodes", lambda k: k.molien_average(thetas, False, 40), 20),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if numba_backend is None:
        raise SystemExit("numba is not importable; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} {'numpy':>12s} {'numba':>12s} {'speedup':>8s}")
    for name, call, inner in cases(rng):
        t_np = best_time(lambda: call(numpy_backend), args.repeat, inner)
        t_nb = best_time(lambda: call(numba_backend), args.repeat, inner)
        print(f"{name:34s} {t_np * 1e6:10.1f}us {t_nb * 1e6:10.1f}us {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()

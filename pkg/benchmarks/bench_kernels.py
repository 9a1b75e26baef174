"""Numba kernels vs the numpy fallback.

Run: python benchmarks/bench_kernels.py [--repeat 20]
"""
import argparse
import time

import numpy as np

from fracpicard import _accel
from fracpicard.series import BivariateSeries, FracPowerSeries
from fracpicard.solver import Kind, ProblemSpec, solve_picard


def _time(fn, repeat):
    fn()  # warm-up (JIT compile on first call)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def run(repeat):
    rng = np.random.default_rng(0)
    rows = []
    for n in (64, 256, 1024):
        a = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        b = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        c = rng.normal(size=(8, 6)) + 1j * rng.normal(size=(8, 6))
        z = rng.normal(size=4096) + 1j * rng.normal(size=4096)
        z /= np.abs(z).max()
        cases = {
            "trunc_mul": (lambda: _accel.trunc_mul_numba(a, b, n), lambda: _accel.trunc_mul_numpy(a, b, n)),
            "compose": (lambda: _accel.compose_numba(c, b, n), lambda: _accel.compose_numpy(c, b, n)),
            "horner(4096 pts)": (lambda: _accel.horner_numba(a, z), lambda: _accel.horner_numpy(a, z)),
        }
        for name, (fast, slow) in cases.items():
            rows.append((name, n, _time(fast, repeat), _time(slow, repeat)))

    F = BivariateSeries.from_terms({(0, 2): 0.2, (0, 1): 0.3, (1, 0): 0.4, (2, 1): 0.1, (0, 3): 0.05})
    for n in (64, 256):
        p = ProblemSpec(Kind.RL, 0.5, F, trunc=n)

        def solve(flag):
            old = _accel.USE_NUMBA
            _accel.USE_NUMBA = flag
            try:
                solve_picard(p, seed=FracPowerSeries([0, 1]))
            finally:
                _accel.USE_NUMBA = old

        rows.append(("solve_picard", n, _time(lambda: solve(True), max(1, repeat // 10)), _time(lambda: solve(False), max(1, repeat // 10))))

    print(f"{'kernel':<18}{'N':>6}{'numba [ms]':>14}{'numpy [ms]':>14}{'speedup':>10}")
    for name, n, tf, ts in rows:
        print(f"{name:<18}{n:>6}{tf * 1e3:>14.3f}{ts * 1e3:>14.3f}{ts / tf:>10.2f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if not _accel.HAS_NUMBA:
        raise SystemExit("numba is not installed")
    run(args.repeat)

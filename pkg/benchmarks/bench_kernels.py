"""Compare the numba and numpy implementations of the interpreter kernel.

Usage: python3 benchmarks/bench_kernels.py [--states K] [--cands C] [--atoms A] [--reps R]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from cfrkit import _kernels


def _time(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--states", type=int, default=2000)
    ap.add_argument("--cands", type=int, default=729)
    ap.add_argument("--atoms", type=int, default=6)
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    lx = rng.integers(-5, 6, size=(args.states, args.atoms), dtype=np.int64)
    lp = rng.integers(-5, 6, size=(args.cands, args.atoms), dtype=np.int64)
    rel = rng.integers(0, 3, size=args.atoms, dtype=np.int64)
    ref = _kernels.satisfied_mask_numpy(lx, lp, rel)
    t_np = _time(lambda: _kernels.satisfied_mask_numpy(lx, lp, rel), args.reps)
    print(f"numpy : {t_np * 1e3:9.2f} ms")
    if _kernels._mask_numba is None:
        print("numba : unavailable (not installed or CFRKIT_DISABLE_NUMBA set)")
        return
    _kernels._mask_numba(lx[:1], lp[:1], rel)  # compile
    assert np.array_equal(_kernels._mask_numba(lx, lp, rel), ref)
    t_nb = _time(lambda: _kernels._mask_numba(lx, lp, rel), args.reps)
    print(f"numba : {t_nb * 1e3:9.2f} ms  (speed-up {t_np / t_nb:.1f}x, results identical)")


if __name__ == "__main__":
    main()

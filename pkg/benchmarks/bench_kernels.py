#!/usr/bin/env python3
"""Benchmark the compiled kernel backend against the pure reference backend.

Both backends are imported directly (the SUMSETLAB_PURE flag only changes the
default selection), timed on the same workloads, and checked to agree before
any timing is reported.

Usage:
    python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from sumsetlab.kernels import ref

try:
    from sumsetlab.kernels import jit
except ImportError:
    jit = None


def _check_equal(a, b, name):
    if isinstance(a, tuple):
        for x, y in zip(a, b):
            assert np.array_equal(x, y), f"{name}: backend outputs differ"
    else:
        assert a == b, f"{name}: backend outputs differ"


def _time(fn, repeats):
    best = None
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, out


def cases(quick: bool):
    scale = 1 if quick else 2
    yield (
        "full_sum_block l=10 (all n)",
        lambda k: tuple(np.concatenate([k.full_sum_block(10, n)[2] for n in range(3, 12)])),
    )
    yield (
        "full_diff_block l=14 (all n)",
        lambda k: tuple(np.concatenate([k.full_diff_block(14, n)[1] for n in range(3, 16)])),
    )
    yield (
        f"sampled_sum_block l=7 n=5 s=1 x{16 * scale}",
        lambda k: k.sampled_sum_block(7, 5, 2, 1, 1, 16 * scale, 0),
    )
    yield (
        f"sampled_diff_block l=9 n=5 s=2 x{16 * scale}",
        lambda k: k.sampled_diff_block(9, 5, 2, 1, 2, 16 * scale, 0),
    )
    yield (
        f"kneser_theta_block m=5 s=1 x{8 * scale}",
        lambda k: k.kneser_theta_block(5, 2, 1, 1, 8 * scale, 0),
    )
    yield (
        f"kneser_diff_block m=8 s=1 x{8 * scale}",
        lambda k: k.kneser_diff_block(8, 2, 1, 1, 8 * scale, 0),
    )
    yield ("pollard_block l=6 n=4", lambda k: k.pollard_block(6, 4))
    yield (
        f"kneser_theorem_scan m={7 if quick else 8}",
        lambda k: k.kneser_theorem_scan(7 if quick else 8),
    )


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    if jit is None:
        print("numba backend unavailable; timing the reference backend only")

    print(f"{'kernel':44s} {'ref (s)':>10s} {'jit (s)':>10s} {'speedup':>9s}")
    for name, fn in cases(args.quick):
        t_ref, out_ref = _time(lambda: fn(ref), args.repeats)
        if jit is None:
            print(f"{name:44s} {t_ref:10.4f} {'-':>10s} {'-':>9s}")
            continue
        fn(jit)  # compile outside the timed region
        t_jit, out_jit = _time(lambda: fn(jit), args.repeats)
        _check_equal(out_ref, out_jit, name)
        print(f"{name:44s} {t_ref:10.4f} {t_jit:10.4f} {t_ref / t_jit:8.1f}x")


if __name__ == "__main__":
    main()

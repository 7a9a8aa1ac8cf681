"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line
with its measured quantities and runtime (run pytest with -s to see them all).

Runtime budgets assume the compiled kernel backend; run once beforehand so the
compilation cache is warm (any unit-test run does this).
"""

import random
import time
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

import sumsetlab as sl
from sumsetlab import (
    IntSet,
    IntervalUnion,
    PairRelation,
    augment_relation,
    discretize,
    pollard_partial_sum,
    recover_additive,
    recover_centred,
    recover_interval,
    triple_correlation,
    triple_correlation_quadrature,
    triple_count,
)
from sumsetlab.bounds import ceil_sqrt
from sumsetlab.lab import InstanceSpec, run_verification


def _report(num: int, ok: bool, detail: str):
    print(f"ACCEPTANCE {num:02d}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


def test_criterion_01_exhaustive_sum_bound():
    t0 = time.perf_counter()
    run = run_verification(InstanceSpec(prop="main-prop-a+b", lmax=12, k_values=(2,)), workers=1)
    s = run.summary()
    dt = time.perf_counter() - t0
    ok = s["violations"] == 0 and dt < 60.0
    _report(1, ok, f"rows={s['rows']} violations={s['violations']} "
                   f"min_slack={s['min_slack']:.3g} time={dt:.1f}s")


def test_criterion_02_exhaustive_diff_bound():
    t0 = time.perf_counter()
    run = run_verification(InstanceSpec(prop="main-prop-a-a", lmax=12, k_values=(2,)), workers=1)
    s = run.summary()
    dt = time.perf_counter() - t0
    ok = s["violations"] == 0 and dt < 60.0
    _report(2, ok, f"rows={s['rows']} violations={s['violations']} "
                   f"min_slack={s['min_slack']:.3g} time={dt:.1f}s")


def test_criterion_03_sampled_regular_relations():
    t0 = time.perf_counter()
    total_rows = total_viol = 0
    for prop in ("main-prop-a+b", "main-prop-a-a"):
        spec = InstanceSpec(
            prop=prop, lmax=10, k_values=(2, 3), s_values=(1, 2), samples=256
        )
        s = run_verification(spec, workers=8).summary()
        total_rows += s["rows"]
        total_viol += s["violations"]
    dt = time.perf_counter() - t0
    ok = total_viol == 0 and dt < 600.0
    _report(3, ok, f"rows={total_rows} violations={total_viol} time={dt:.1f}s")


def test_criterion_04_robust_kneser():
    t0 = time.perf_counter()
    total_checked = total_viol = 0
    for prop in ("kneser-theta", "kneser-3"):
        spec = InstanceSpec(
            prop=prop, lmax=9, k_values=(2, 3), s_values=(0, 1), samples=64
        )
        s = run_verification(spec, workers=8).summary()
        total_checked += s["checked"]
        total_viol += s["violations"]
    dt = time.perf_counter() - t0
    ok = total_viol == 0 and total_checked > 0 and dt < 600.0
    _report(4, ok, f"checked={total_checked} violations={total_viol} time={dt:.1f}s")


def test_criterion_05_pollard_equality_family():
    t0 = time.perf_counter()
    for n in range(1, 51):
        a = IntSet(range(n))
        for t in range(n + 1):
            assert pollard_partial_sum(a, a, t) == t * (2 * n - t), (n, t)
    rng = random.Random(5)
    worst = None
    for _ in range(10_000):
        n = rng.randint(1, 50)
        hi = rng.randint(n, 3 * n)
        a = IntSet(rng.sample(range(hi + 1), n))
        b = IntSet(rng.sample(range(hi + 1), n))
        t = rng.randint(0, n)
        slack = pollard_partial_sum(a, b, t) - t * (2 * n - t)
        assert slack >= 0, (list(a), list(b), t)
        worst = slack if worst is None else min(worst, slack)
    dt = time.perf_counter() - t0
    ok = dt < 30.0
    _report(5, ok, f"intervals exact, 10^4 random instances >= t(2n-t), "
                   f"min random slack={worst}, time={dt:.1f}s")


def test_criterion_06_end_to_end_recovery():
    t0 = time.perf_counter()
    n = 10_000
    a = IntSet(range(n))
    full = PairRelation.full(n, n)
    rep = recover_additive(a, a, full, Fraction(1, 10_000))
    ok_full = (
        rep.hypothesis_certified
        and rep.conclusion_certified
        and list(rep.p.values()) == list(range(n))
        and rep.p == rep.q
    )
    # 0.5% seeded defects, then augmented back to regularity
    rng = np.random.default_rng(0)
    ei = rng.integers(0, n, size=500_000)
    ej = rng.integers(0, n, size=500_000)
    defected = PairRelation.from_excluded(n, n, np.stack([ei, ej], axis=1))
    k = ceil_sqrt(defected.density_defect * n * n)  # the construction's threshold
    augmented = augment_relation(a, a, defected, k)
    rep2 = recover_additive(a, a, augmented, Fraction(1, 10_000))
    dt = time.perf_counter() - t0
    ok = ok_full and rep2.conclusion_certified and dt < 10.0
    _report(6, ok, f"full: both certified, P=Q=0..9999; defected(K={k}): "
                   f"conclusion={rep2.conclusion_certified} "
                   f"hypothesis={rep2.hypothesis_certified} time={dt:.1f}s")


def test_criterion_07_self_correlation_maximality():
    t0 = time.perf_counter()
    universe = list(range(-4, 5))
    for n in range(1, 8):
        best = None
        argmax = []
        for sub in combinations(universe, n):
            _, ratio = triple_count(IntSet(sub))
            if best is None or ratio > best:
                best, argmax = ratio, [sub]
            elif ratio == best:
                argmax.append(sub)
        covered = False
        for sub in argmax:
            rep = recover_centred(IntSet(sub), Fraction(1, 10_000))
            if rep.coverage_a == n and rep.p.is_centred and 0 in rep.p:
                covered = True
                break
        assert covered, (n, best, argmax[:5])
    for m in range(1, 101):
        nn = 2 * m + 1
        count, ratio = triple_count(IntSet(range(-m, m + 1)))
        assert count == nn * nn - m * (m + 1)
        assert ratio == Fraction(3, 4) + Fraction(1, 4 * nn * nn), m
    dt = time.perf_counter() - t0
    ok = dt < 60.0
    _report(7, ok, f"max-C sets admit centred self-covers for n<=7; "
                   f"symmetric-interval ratio exact for m<=100; time={dt:.1f}s")


def test_criterion_08_centred_recovery_with_deletions():
    times = []
    for seed in range(10):
        rng = random.Random(seed)
        deleted = set(rng.sample(range(1, 1001), 10))  # 1% of the positive values
        a = IntSet(v for v in range(-1000, 1001) if abs(v) not in deleted)
        t0 = time.perf_counter()
        rep = recover_centred(a, Fraction(1, 1000))
        times.append(time.perf_counter() - t0)
        assert rep.p.is_centred and 0 in rep.p, seed
        assert rep.coverage_a >= 0.99 * len(a), (seed, rep.coverage_a, len(a))
        assert len(rep.p) <= 1.05 * len(a), (seed, len(rep.p), len(a))
    ok = max(times) < 5.0
    _report(8, ok, f"10 seeds: centred cover >= 99%, |P| <= 1.05|A|, "
                   f"max per-seed time={max(times):.2f}s")


def test_criterion_09_continuous_oracle():
    t0 = time.perf_counter()
    half = IntervalUnion([(Fraction(-1, 2), Fraction(1, 2))])
    assert triple_correlation(half, half, half) == Fraction(3, 4)

    rng = random.Random(909)

    def rand_union(max_parts, span=2, max_den=48):
        parts = []
        for _ in range(rng.randint(1, max_parts)):
            den = rng.randint(1, max_den)
            lo = Fraction(rng.randint(-span * den, span * den), den)
            parts.append((lo, lo + Fraction(rng.randint(1, 2 * den), den)))
        return IntervalUnion(parts)

    for _ in range(1000):
        u = rand_union(4)
        lam = u.measure
        assert triple_correlation(u, u, u) <= Fraction(3, 4) * lam * lam

    worst = 0.0
    for _ in range(100):
        x, y, z = rand_union(3, span=1, max_den=16), rand_union(3, span=1, max_den=16), rand_union(3, span=1, max_den=16)
        exact = float(triple_correlation(x, y, z))
        approx = triple_correlation_quadrature(x, y, z, cells=400_000)
        tol = 1e-6 * max(float(x.measure * y.measure), 1e-3)
        assert abs(exact - approx) <= tol, (x, y, z)
        worst = max(worst, abs(exact - approx))
    dt = time.perf_counter() - t0
    ok = dt < 120.0
    _report(9, ok, f"equality case exact; 10^3 unions below 3/4*lambda^2; "
                   f"quadrature max dev={worst:.2e}; time={dt:.1f}s")


def test_criterion_10_interval_pipeline():
    t0 = time.perf_counter()
    a = IntervalUnion([(Fraction(-1, 2), Fraction(1, 2))])
    disc = discretize(a, Fraction(1, 100), Fraction(1, 100))
    assert disc.sym_diff == 0
    j, rep = recover_interval(a, Fraction(1, 10_000), Fraction(1, 100), Fraction(1, 100))
    lo, hi = j.intervals[0]
    dt = time.perf_counter() - t0
    ok = (
        lo == -hi
        and rep.size_ratio <= Fraction(102, 100)
        and rep.cover_ratio >= Fraction(98, 100)
        and dt < 5.0
    )
    _report(10, ok, f"J=({float(lo):.3f},{float(hi):.3f}) size_ratio={float(rep.size_ratio):.4f} "
                    f"cover_ratio={float(rep.cover_ratio):.4f} sym_diff=0 time={dt:.1f}s")


def test_criterion_11_deterministic_reports(tmp_path):
    import re
    import subprocess
    import sys

    def run(args):
        res = subprocess.run(
            [sys.executable, "-m", "sumsetlab.cli", *args],
            capture_output=True, text=True,
        )
        assert res.returncode == 0, res.stderr
        return res

    def canon(path):
        text = open(path).read()
        return re.sub(r"[^\n]*generated_at[^\n]*\n", "", text)

    out = tmp_path / "verify.csv"
    blobs = []
    for workers in ("1", "3", "1"):
        run(["verify", "--prop", "main-prop-a+b", "--lmax", "7", "--k", "2,3",
             "--s", "0,1", "--samples", "16", "--workers", workers,
             "--output", str(out)])
        blobs.append(canon(out))
    verify_ok = blobs[0] == blobs[1] == blobs[2]

    out2 = tmp_path / "search.csv"
    blobs2 = []
    for _ in range(2):
        run(["search", "--prop", "pollard", "--lmax", "5", "--budget", "100000",
             "--top", "8", "--output", str(out2)])
        blobs2.append(canon(out2))
    search_ok = blobs2[0] == blobs2[1]

    _report(11, verify_ok and search_ok,
            f"verify byte-identical across reruns/workers={verify_ok}, "
            f"search rerun identical={search_ok}")

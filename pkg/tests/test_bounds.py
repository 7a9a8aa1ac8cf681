import math
import random
from fractions import Fraction

from sumsetlab.bounds import (
    THETA,
    VERIFIER_SLACK,
    bound_passes,
    ceil_sqrt,
    kneser_diff_required,
    kneser_theta_required,
    leq_quartic,
    leq_sqrt,
    pollard_required,
    prop_diff_required,
    prop_sum_required,
)


def test_ceil_sqrt_against_isqrt():
    rng = random.Random(3)
    assert ceil_sqrt(Fraction(0)) == 0
    assert ceil_sqrt(Fraction(-5)) == 0
    assert ceil_sqrt(Fraction(1)) == 1
    assert ceil_sqrt(Fraction(1, 2)) == 1
    for _ in range(500):
        q = Fraction(rng.randint(1, 10 ** 9), rng.randint(1, 10 ** 6))
        r = ceil_sqrt(q)
        assert r * r >= q
        assert r == 0 or (r - 1) * (r - 1) < q


def test_leq_sqrt_boundaries():
    # exact boundary: value^2 == coeff^2 * eps * scale^2
    assert leq_sqrt(6, 3, Fraction(4, 100), 10)          # 6 <= 3*0.2*10 = 6
    assert not leq_sqrt(7, 3, Fraction(4, 100), 10)
    assert leq_sqrt(-1, 1, Fraction(1, 10 ** 12), 5)     # nonpositive always passes
    rng = random.Random(9)
    for _ in range(500):
        eps = Fraction(rng.randint(1, 99), rng.randint(100, 10 ** 6))
        c, s, v = rng.randint(1, 50), rng.randint(1, 1000), rng.randint(0, 2000)
        want = v <= c * math.sqrt(eps) * s
        got = leq_sqrt(v, c, eps, s)
        # the float oracle can only disagree within rounding of the boundary
        if want != got:
            assert abs(v - c * math.sqrt(eps) * s) < 1e-6


def test_leq_quartic_boundaries():
    # 2^4 = 16 == 16 * (1/16) * 2^4 -> boundary holds
    assert leq_quartic(2, 2, Fraction(1, 16), 2)
    assert not leq_quartic(3, 2, Fraction(1, 16), 2)
    rng = random.Random(10)
    for _ in range(300):
        eps = Fraction(rng.randint(1, 99), rng.randint(100, 10 ** 8))
        c, s, v = rng.randint(1, 300), rng.randint(1, 500), rng.randint(0, 1500)
        want = v <= c * (float(eps) ** 0.25) * s
        got = leq_quartic(v, c, eps, s)
        if want != got:
            assert abs(v - c * float(eps) ** 0.25 * s) < 1e-6


def test_required_bounds_branching():
    # branch flips exactly at l = 2n - 2K - 2
    n, k, s = 10, Fraction(2), 1
    flip = 2 * n - 2 * 2 - 2
    assert prop_sum_required(n, flip - 1, k, s) == flip - 1 + n - 2 * s
    assert prop_sum_required(n, flip, k, s) == (THETA + 1) * n - 4 * s - 2 * 2 - THETA
    assert prop_diff_required(n, flip - 1, k, s) == flip - 1 + n - 2 * s
    assert prop_diff_required(n, flip, k, s) == 3 * n - 4 * s - 2 * 2 - 2
    # fractional K shifts the branch point exactly: 2n - 2K - 2 = 13 here
    kf = Fraction(5, 2)
    assert prop_sum_required(n, 12, kf, 0) == 12 + n
    assert prop_sum_required(n, 13, kf, 0) == (THETA + 1) * n - 2 * float(kf) - THETA


def test_strict_bounds_encoding():
    # all-rational strict bound is bumped to the smallest passing integer
    assert kneser_diff_required(5, Fraction(2), 1) == 2 * 5 - 2 - 2 + 1
    assert kneser_diff_required(5, Fraction(3, 2), 0) == math.floor(10 - 1.5) + 1
    # the golden-ratio bound needs no bump: integers never hit it
    req = kneser_theta_required(7, Fraction(2), 1)
    assert abs(req - (THETA * 7 - 4)) < 1e-12
    assert not float(round(req)) == req


def test_bound_passes_slack():
    assert bound_passes(10, 10)
    assert bound_passes(10 - VERIFIER_SLACK / 2, 10)
    assert not bound_passes(10 - 2 * VERIFIER_SLACK, 10)
    assert pollard_required(6, 2) == 20

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sumsetlab import (
    ArithProgression,
    IntSet,
    NormalizationMap,
    denormalize_ap,
    normalize_pair,
    progression_coverage,
    rep_function,
)
from sumsetlab.bounds import THETA
from sumsetlab.errors import DegenerateSet, EmptyInput

small_sets = st.sets(st.integers(-50, 50), min_size=1, max_size=8).map(IntSet)


def test_intset_basics():
    s = IntSet([5, 1, 3, 3, 1])
    assert s.elements == (1, 3, 5)
    assert len(s) == 3 and 3 in s and 2 not in s
    assert s.min == 1 and s.max == 5
    assert s.translate(2).elements == (3, 5, 7)
    assert s.dilate(2).elements == (2, 6, 10)
    assert s.dilate(-1).elements == (-5, -3, -1)
    assert IntSet.interval(0, 3).elements == (0, 1, 2, 3)
    with pytest.raises(EmptyInput):
        IntSet().min


def test_intset_mask_roundtrip():
    s = IntSet([-2, 0, 5])
    assert IntSet.from_mask(s.mask(), s.min) == s


def test_normalize_pair_examples():
    a2, b2, nmap, l = normalize_pair(IntSet([4, 10, 16]), IntSet([4, 8]))
    # oracle: translate by minima, divide by gcd of the union
    vals = [0, 6, 12, 0, 4]
    g = math.gcd(*vals)
    assert g == 2
    assert a2.elements == (0, 3, 6) and b2.elements == (0, 2) and l == 6
    assert nmap == NormalizationMap(4, 4, 2)

    a2, b2, nmap, l = normalize_pair(IntSet([0, 1]), IntSet([0, 1]))
    assert a2.elements == (0, 1) and b2.elements == (0, 1)
    assert nmap.scale == 1 and l == 1

    a2, b2, nmap, l = normalize_pair(IntSet([0, 2, 4]), IntSet([0, 2]))
    assert a2.elements == (0, 1, 2) and b2.elements == (0, 1)
    assert nmap.scale == 2 and l == 2


def test_normalize_degenerate():
    with pytest.raises(DegenerateSet):
        normalize_pair(IntSet([7]), IntSet([3]))


@given(small_sets, small_sets)
def test_normalize_idempotent(a, b):
    try:
        a2, b2, _m, _l = normalize_pair(a, b)
    except DegenerateSet:
        return
    a3, b3, m2, _ = normalize_pair(a2, b2)
    assert (a3, b3) == (a2, b2)
    assert m2 == NormalizationMap(0, 0, 1)


@given(small_sets, small_sets)
def test_normalize_inverts_exactly(a, b):
    try:
        a2, b2, nmap, _l = normalize_pair(a, b)
    except DegenerateSet:
        return
    assert [nmap.invert(v, "a") for v in a2] == list(a.elements)
    assert [nmap.invert(v, "b") for v in b2] == list(b.elements)


def test_rep_function_examples():
    assert rep_function(IntSet([0, 1, 3]), IntSet([0, 2]), 3) == 2
    assert rep_function(IntSet([0, 1, 3]), IntSet([0, 2]), 7) == 0
    assert rep_function(IntSet([0]), IntSet([0]), 0) == 1


@given(small_sets, small_sets)
def test_rep_function_total_mass(a, b):
    lo, hi = a.min + b.min, a.max + b.max
    total = sum(rep_function(a, b, x) for x in range(lo, hi + 1))
    assert total == len(a) * len(b)


def test_denormalize_examples():
    nmap = NormalizationMap(shift_a=4, shift_b=0, scale=2)
    p = denormalize_ap(ArithProgression(0, 1, 7), nmap, "a")
    assert list(p.values()) == [4, 6, 8, 10, 12, 14, 16]

    ident = NormalizationMap(0, 0, 1)
    p = ArithProgression(3, 2, 5)
    assert denormalize_ap(p, ident, "a") == p

    single = denormalize_ap(ArithProgression(0, 1, 1), nmap, "b")
    assert list(single.values()) == [0]


def test_denormalized_interval_covers_original():
    # normalized interval {0..l} pulled back must cover the original set
    a, b = IntSet([7, 13, 19]), IntSet([1, 7])
    a2, b2, nmap, l = normalize_pair(a, b)
    p = denormalize_ap(ArithProgression(0, 1, l + 1), nmap, "a")
    assert progression_coverage(p, a) == len(a)
    q = denormalize_ap(ArithProgression(0, 1, l + 1), nmap, "b")
    assert progression_coverage(q, b) == len(b)


def test_progression_predicates():
    p = ArithProgression(-4, 2, 5)  # {-4,-2,0,2,4}
    assert p.is_centred and 0 in p and p.last == 4
    assert not ArithProgression(-3, 2, 4).is_centred
    assert ArithProgression(0, 1, 1).is_centred
    assert list(ArithProgression(5, 3, 3).values()) == [5, 8, 11]
    with pytest.raises(ValueError):
        ArithProgression(0, 0, 3)
    with pytest.raises(ValueError):
        ArithProgression(0, 1, 0)


def test_theta_identity():
    assert abs(THETA * THETA - THETA - 1.0) < 1e-12


def test_progression_coverage():
    p = ArithProgression(0, 3, 4)  # {0,3,6,9}
    assert progression_coverage(p, IntSet([0, 3, 5, 9, 12])) == 3
    assert progression_coverage(p, IntSet([-3])) == 0

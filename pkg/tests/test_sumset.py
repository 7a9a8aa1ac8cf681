import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    brute_pollard,
    brute_rep,
    brute_restricted_difference,
    brute_restricted_sumset,
    brute_sumset,
    brute_triple,
    random_relation,
)
from sumsetlab import (
    IntSet,
    PairRelation,
    complete_sumset,
    pollard_partial_sum,
    popular_support,
    rep_histogram,
    restricted_difference,
    restricted_sumset,
    sumset_stats,
    triple_count,
)
from sumsetlab.errors import EmptyInput, IndexMismatch

small_sets = st.sets(st.integers(-40, 40), min_size=1, max_size=8).map(IntSet)


def test_complete_sumset_examples():
    assert complete_sumset(IntSet([0, 1, 2]), IntSet([0, 1, 2])).elements == (0, 1, 2, 3, 4)
    assert complete_sumset(IntSet([0, 1, 3]), IntSet([0, 2])).elements == (0, 1, 2, 3, 5)
    assert complete_sumset(IntSet([0]), IntSet([7])).elements == (7,)
    with pytest.raises(EmptyInput):
        complete_sumset(IntSet(), IntSet([1]))


@given(small_sets, small_sets)
def test_complete_sumset_matches_brute(a, b):
    assert list(complete_sumset(a, b).elements) == brute_sumset(a, b)
    assert len(complete_sumset(a, b)) >= len(a) + len(b) - 1


def test_restricted_sumset_examples():
    a, b = IntSet([0, 1, 3]), IntSet([0, 2])
    assert restricted_sumset(a, b, PairRelation.full(3, 2)) == complete_sumset(a, b)
    rel = PairRelation.from_excluded(3, 2, [(2, 1)])  # drops the pair summing to 5
    assert restricted_sumset(a, b, rel).elements == (0, 1, 2, 3)
    assert len(restricted_sumset(a, b, PairRelation.empty(3, 2))) == 0
    with pytest.raises(IndexMismatch):
        restricted_sumset(a, b, PairRelation.full(2, 2))


def test_restricted_sumset_matches_brute(rng):
    for _ in range(60):
        a = IntSet(rng.sample(range(-20, 21), rng.randint(1, 7)))
        b = IntSet(rng.sample(range(-20, 21), rng.randint(1, 7)))
        rel = random_relation(rng, len(a), len(b), len(a) * len(b))
        assert list(restricted_sumset(a, b, rel).elements) == brute_restricted_sumset(a, b, rel)


def test_restricted_sumset_monotone_in_relation(rng):
    for _ in range(40):
        a = IntSet(rng.sample(range(0, 25), rng.randint(2, 7)))
        b = IntSet(rng.sample(range(0, 25), rng.randint(2, 7)))
        big = random_relation(rng, len(a), len(b), 5)
        extra = random_relation(rng, len(a), len(b), 5)
        small = PairRelation.from_excluded(
            len(a), len(b), sorted(set(big.excluded_pairs()) | set(extra.excluded_pairs()))
        )
        r_small = set(restricted_sumset(a, b, small).elements)
        r_big = set(restricted_sumset(a, b, big).elements)
        assert r_small <= r_big


def test_restricted_difference_examples():
    a = IntSet([0, 1, 3])
    assert restricted_difference(a, PairRelation.full(3, 3)).elements == (-3, -2, -1, 0, 1, 2, 3)
    diag = PairRelation.from_included(3, 3, [(i, i) for i in range(3)])
    assert restricted_difference(a, diag).elements == (0,)
    assert len(restricted_difference(a, PairRelation.empty(3, 3))) == 0


def test_restricted_difference_matches_brute(rng):
    for _ in range(40):
        a = IntSet(rng.sample(range(-15, 16), rng.randint(1, 7)))
        rel = random_relation(rng, len(a), len(a), len(a) ** 2)
        assert list(restricted_difference(a, rel).elements) == brute_restricted_difference(a, rel)


def test_triple_count_examples():
    assert triple_count(IntSet([-1, 0, 1])) == (7, Fraction(7, 9))
    assert triple_count(IntSet([0])) == (1, Fraction(1))
    assert triple_count(IntSet([1, 2, 3])) == (3, Fraction(1, 3))


@given(small_sets)
def test_triple_count_matches_brute(a):
    count, ratio = triple_count(a)
    assert count == brute_triple(a)
    assert ratio == Fraction(count, len(a) ** 2)
    assert 0 <= ratio <= 1


def test_positive_sets_below_half():
    # every nonempty subset of {1..12} has self-correlation ratio < 1/2
    universe = list(range(1, 13))
    for size in range(1, 13):
        for sub in combinations(universe, size):
            _, ratio = triple_count(IntSet(sub))
            assert ratio < Fraction(1, 2), sub


def test_symmetric_interval_closed_form():
    for m in range(0, 7):
        a = IntSet(range(-m, m + 1))
        n = 2 * m + 1
        count, ratio = triple_count(a)
        assert count == brute_triple(a)
        assert count == n * n - m * (m + 1)
        assert ratio == Fraction(3, 4) + Fraction(1, 4 * n * n)


def test_pollard_examples():
    a = IntSet([0, 1, 2])
    assert pollard_partial_sum(a, a, 1) == 5
    assert pollard_partial_sum(a, a, 2) == 8
    assert pollard_partial_sum(a, a, 0) == 0
    with pytest.raises(ValueError):
        pollard_partial_sum(a, a, -1)


def test_pollard_properties(rng):
    for _ in range(25):
        n = rng.randint(1, 8)
        a = IntSet(rng.sample(range(0, 30), n))
        b = IntSet(rng.sample(range(0, 30), n))
        vals = [pollard_partial_sum(a, b, t) for t in range(n + 2)]
        assert vals == [brute_pollard(a, b, t) for t in range(n + 2)]
        assert all(x <= y for x, y in zip(vals, vals[1:]))  # nondecreasing
        diffs = [y - x for x, y in zip(vals, vals[1:])]
        assert all(x >= y for x, y in zip(diffs, diffs[1:]))  # concave
        assert vals[n] == n * n  # saturates at |A||B|
        assert all(vals[t] >= t * (2 * n - t) for t in range(n + 1))


def test_popular_support_examples():
    a = IntSet([0, 1, 2])
    assert popular_support(a, a, 3) == 1
    assert popular_support(a, a, 1) == len(complete_sumset(a, a))
    assert popular_support(a, a, 4) == 0
    assert popular_support(a, a, Fraction(9, 5)) == 3  # r >= 2 at x in {1,2,3}
    with pytest.raises(ValueError):
        popular_support(a, a, 0)


@given(small_sets, small_sets)
@settings(max_examples=50)
def test_rep_histogram_consistency(a, b):
    hist = rep_histogram(a, b)
    assert sum(hist.values()) == len(a) * len(b)
    for x, r in hist.items():
        assert r == brute_rep(a, b, x)
    stats = sumset_stats(a, b)
    assert set(stats.sumset.elements) == set(hist)
    assert stats.doubling == Fraction(len(stats.sumset), len(a))

"""Shared brute-force oracles and generators for the test suite.

Oracles enumerate pairs directly and never touch the convolution/bitmask
paths they are used to check.
"""

from __future__ import annotations

import random
from itertools import product

import pytest

from sumsetlab import IntSet, PairRelation


def brute_sumset(a, b):
    return sorted({u + v for u in a for v in b})


def brute_restricted_sumset(a, b, rel):
    av, bv = list(a), list(b)
    out = set()
    for i in range(len(av)):
        for j in range(len(bv)):
            if rel.contains(i, j):
                out.add(av[i] + bv[j])
    return sorted(out)


def brute_restricted_difference(a, rel):
    av = list(a)
    out = set()
    for i in range(len(av)):
        for j in range(len(av)):
            if rel.contains(i, j):
                out.add(av[i] - av[j])
    return sorted(out)


def brute_rep(a, b, x):
    return sum(1 for u, v in product(a, b) if u + v == x)


def brute_triple(a):
    sa = set(a)
    return sum(1 for u, v in product(a, a) if u + v in sa)


def brute_pollard(a, b, t):
    xs = {u + v for u, v in product(a, b)}
    return sum(min(brute_rep(a, b, x), t) for x in xs)


def random_intset(rng: random.Random, lo=-30, hi=30, max_size=10) -> IntSet:
    size = rng.randint(1, max_size)
    return IntSet(rng.sample(range(lo, hi + 1), min(size, hi - lo + 1)))


def random_relation(rng: random.Random, na: int, nb: int, max_excluded: int) -> PairRelation:
    k = rng.randint(0, max_excluded)
    pairs = {(rng.randrange(na), rng.randrange(nb)) for _ in range(k)}
    return PairRelation.from_excluded(na, nb, sorted(pairs))


@pytest.fixture
def rng():
    return random.Random(20260808)

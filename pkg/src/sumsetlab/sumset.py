"""Sumset statistics: complete and restricted sums/differences, representation
histograms, the self-correlation ratio C(A), Pollard partial sums and popular
sums.

Representation counts are computed by dense integer convolution after an
internal translate/dilate normalization, with 64-bit counters, so every value
returned here is exact. Restricted variants consume the complement encoding of
the relation and never materialize the full pair matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict

import numpy as np

from .core import IntSet, values_from_mask
from .errors import EmptyInput, IndexMismatch
from .relation import PairRelation

_MAX_SPAN = 1 << 22  # dense-array guard; beyond this the set is not desk scale


def _check_span(span: int):
    if span > _MAX_SPAN:
        raise ValueError(f"set spread {span} too large for dense kernels")


def _lattice_indicators(a: IntSet, b: IntSet):
    """Indicator vectors of both sets on their common normalized lattice.

    Returns (offset, step, ia, ib) with element = offset_side + step * index;
    offset stored as (min_a, min_b).
    """
    au = a.as_array() - a.min
    bu = b.as_array() - b.min
    g = int(math.gcd(int(np.gcd.reduce(au)) if au.size else 0,
                     int(np.gcd.reduce(bu)) if bu.size else 0))
    if g == 0:
        g = 1
    au //= g
    bu //= g
    _check_span(int(au[-1]) + int(bu[-1]) + 1)
    ia = np.zeros(int(au[-1]) + 1, dtype=np.int64)
    ia[au] = 1
    ib = np.zeros(int(bu[-1]) + 1, dtype=np.int64)
    ib[bu] = 1
    return g, ia, ib


def _rep_counts(a: IntSet, b: IntSet):
    """(offset, step, counts) with r_{A+B}(offset + step*k) = counts[k]."""
    if not a.elements or not b.elements:
        raise EmptyInput("representation counts need nonempty sets")
    g, ia, ib = _lattice_indicators(a, b)
    return a.min + b.min, g, np.convolve(ia, ib)


def _diff_counts(a: IntSet):
    """(offset, step, counts) for r_{A-A}."""
    if not a.elements:
        raise EmptyInput("difference counts need a nonempty set")
    g, ia, _ = _lattice_indicators(a, a)
    counts = np.convolve(ia, ia[::-1])
    return -(len(ia) - 1) * g, g, counts


def _excluded_sum_counts(a: IntSet, b: IntSet, rel: PairRelation, offset: int, step: int, length: int):
    """How many excluded pairs land on each histogram bin."""
    ei, ej = rel.excluded_arrays()
    if ei.size == 0:
        return np.zeros(length, dtype=np.int64)
    sums = a.as_array()[ei] + b.as_array()[ej]
    idx = (sums - offset) // step
    return np.bincount(idx, minlength=length).astype(np.int64)


def _check_rel(a: IntSet, b: IntSet, rel: PairRelation):
    if rel.na != len(a) or rel.nb != len(b):
        raise IndexMismatch(
            f"relation is {rel.na}x{rel.nb} but sets have sizes {len(a)}x{len(b)}"
        )


def complete_sumset(a: IntSet, b: IntSet) -> IntSet:
    """{u + v : u in A, v in B}, via shifted bitmask union."""
    if not a.elements or not b.elements:
        raise EmptyInput("complete_sumset needs nonempty sets")
    _check_span(a.max - a.min + b.max - b.min + 1)
    mb = b.mask()
    acc = 0
    amin = a.min
    for u in a.elements:
        acc |= mb << (u - amin)
    return IntSet._from_sorted(values_from_mask(acc, a.min + b.min).tolist())


def restricted_sumset(a: IntSet, b: IntSet, rel: PairRelation) -> IntSet:
    """{u + v : (u, v) related}; a sum survives iff not all its pairs are excluded."""
    _check_rel(a, b, rel)
    if rel.is_full:
        return complete_sumset(a, b)
    offset, step, counts = _rep_counts(a, b)
    exc = _excluded_sum_counts(a, b, rel, offset, step, counts.size)
    keep = np.nonzero(counts > exc)[0]
    return IntSet._from_sorted((keep * step + offset).tolist())


def restricted_difference(a: IntSet, rel: PairRelation) -> IntSet:
    """{u - v : (u, v) related}, with the relation indexed over A x A."""
    _check_rel(a, a, rel)
    offset, step, counts = _diff_counts(a)
    if rel.is_full:
        keep = np.nonzero(counts)[0]
    else:
        ei, ej = rel.excluded_arrays()
        vals = a.as_array()
        idx = (vals[ei] - vals[ej] - offset) // step
        exc = np.bincount(idx, minlength=counts.size).astype(np.int64)
        keep = np.nonzero(counts > exc)[0]
    return IntSet._from_sorted((keep * step + offset).tolist())


def triple_count(a: IntSet):
    """(count, C) where count = #{(u, v) in A x A : u + v in A} and C = count/n^2."""
    if not a.elements:
        raise EmptyInput("triple_count needs a nonempty set")
    offset, step, counts = _rep_counts(a, a)
    support = np.nonzero(counts)[0]
    vals = support * step + offset
    arr = a.as_array()
    pos = np.searchsorted(arr, vals)
    pos[pos >= arr.size] = arr.size - 1
    hit = arr[pos] == vals
    count = int(counts[support[hit]].sum())
    n = len(a)
    return count, Fraction(count, n * n)


def pollard_partial_sum(a: IntSet, b: IntSet, t: int) -> int:
    """Sum over x of min(r_{A+B}(x), t)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return 0
    _, _, counts = _rep_counts(a, b)
    return int(np.minimum(counts, t).sum())


def _ceil_fraction(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def popular_support(a: IntSet, b: IntSet, threshold) -> int:
    """#{x : r_{A+B}(x) >= threshold}, threshold an exact rational > 0."""
    thr = Fraction(threshold)
    if thr <= 0:
        raise ValueError("threshold must be > 0")
    _, _, counts = _rep_counts(a, b)
    return int((counts >= _ceil_fraction(thr)).sum())


def rep_histogram(a: IntSet, b: IntSet) -> Dict[int, int]:
    """r_{A+B} as a dict over its support."""
    offset, step, counts = _rep_counts(a, b)
    support = np.nonzero(counts)[0]
    return {int(k * step + offset): int(counts[k]) for k in support}


@dataclass(frozen=True)
class SumsetStats:
    sumset: IntSet
    rep_histogram: Dict[int, int]
    doubling: Fraction


def sumset_stats(a: IntSet, b: IntSet) -> SumsetStats:
    hist = rep_histogram(a, b)
    s = IntSet._from_sorted(sorted(hist))
    return SumsetStats(sumset=s, rep_histogram=hist, doubling=Fraction(len(s), len(a)))

"""Regularity of restricted sumsets: the defect/popularity check, dense-core
extraction, popular-pair augmentation, reduction modulo the diameter, and
stabilizers in cyclic groups.

A relation G over A x B is (K, s)-regular for A +_G B when every row and
column misses at most s partners and every sum with at least K representations
is realized through G. K is an exact rational throughout; integer counts are
compared against it without rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import IntSet
from .errors import EmptySet, HypothesisViolated, PreconditionViolated
from .relation import PairRelation
from .sumset import (
    _ceil_fraction,
    _check_rel,
    _excluded_sum_counts,
    _rep_counts,
    restricted_sumset,
)


@dataclass(frozen=True)
class RegularityParams:
    """Popularity threshold K (rational, >= 0) and defect cap s (>= 0).

    The integer-line propositions additionally need K >= 2; that is enforced
    where those propositions are checked, not here.
    """

    k: Fraction
    s: int

    def __post_init__(self):
        if self.k < 0 or self.s < 0:
            raise ValueError("K and s must be nonnegative")


def check_regular(a: IntSet, b: IntSet, rel: PairRelation, k, s: int):
    """Decide (K, s)-regularity of A +_G B.

    Returns (True, None) or (False, witness) where witness is
    ("row", i), ("col", j) or ("sum", x) for the first offender found.
    """
    _check_rel(a, b, rel)
    k = Fraction(k)
    rd = rel.row_defects
    if rd.size and rd.max() > s:
        return False, ("row", int(np.argmax(rd > s)))
    cd = rel.col_defects
    if cd.size and cd.max() > s:
        return False, ("col", int(np.argmax(cd > s)))
    offset, step, counts = _rep_counts(a, b)
    exc = _excluded_sum_counts(a, b, rel, offset, step, counts.size)
    kthr = _ceil_fraction(k) if k > 0 else 0
    bad = (counts >= max(kthr, 1)) & (counts <= exc)
    if bad.any():
        x = int(np.argmax(bad)) * step + offset
        return False, ("sum", x)
    return True, None


def _core_indices(a: IntSet, b: IntSet, rel: PairRelation, eps: Fraction):
    """Row/column index sets of the dense core, trimmed to equal size.

    A side is dropped when its defect d satisfies d^2 > eps * n^2 (the exact
    form of d > sqrt(eps) * n); the larger surviving side is then trimmed by
    removing largest-defect entries, ties broken toward larger set values.
    """
    n = len(a)
    p, q = eps.numerator, eps.denominator

    def keep(defects):
        d = defects.astype(object)
        return np.nonzero(np.array([int(x) * int(x) * q <= p * n * n for x in d]))[0]

    keep_i = keep(rel.row_defects)
    keep_j = keep(rel.col_defects)

    ei, ej = rel.excluded_arrays()
    sel = np.isin(ei, keep_i) & np.isin(ej, keep_j)

    def trim(keep_idx, defects, values, excess):
        order = np.lexsort((-values[keep_idx], -defects))
        drop = set(keep_idx[order[:excess]].tolist())
        return np.array([i for i in keep_idx if i not in drop], dtype=np.int64)

    if keep_i.size > keep_j.size:
        defects = np.bincount(np.searchsorted(keep_i, ei[sel]), minlength=keep_i.size)
        keep_i = trim(keep_i, defects, a.as_array(), keep_i.size - keep_j.size)
    elif keep_j.size > keep_i.size:
        defects = np.bincount(np.searchsorted(keep_j, ej[sel]), minlength=keep_j.size)
        keep_j = trim(keep_j, defects, b.as_array(), keep_j.size - keep_i.size)

    size = keep_i.size
    # |core| >= (1 - sqrt(eps)) n, exactly
    if (n - size) ** 2 * q > p * n * n:
        raise HypothesisViolated(
            f"relation too sparse: core of size {size} < (1 - eps^(1/2)) * {n}"
        )
    return keep_i, keep_j


def extract_dense_core(a: IntSet, b: IntSet, rel: PairRelation, eps) -> tuple:
    """Equal-size subsets (A', B') in which every element misses at most
    sqrt(eps)*n partners on the other side."""
    if len(a) != len(b):
        raise PreconditionViolated("dense-core extraction needs |A| = |B|")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be > 0")
    _check_rel(a, b, rel)
    keep_i, keep_j = _core_indices(a, b, rel, eps)
    arr_a, arr_b = a.as_array(), b.as_array()
    return (
        IntSet._from_sorted(arr_a[keep_i].tolist()),
        IntSet._from_sorted(arr_b[keep_j].tolist()),
    )


def augment_relation(a: IntSet, b: IntSet, rel: PairRelation, k) -> PairRelation:
    """G' = G union every pair whose sum has at least K representations."""
    _check_rel(a, b, rel)
    k = Fraction(k)
    if rel.is_full:
        return rel
    if k <= 0:
        return PairRelation.full(rel.na, rel.nb)
    offset, step, counts = _rep_counts(a, b)
    ei, ej = rel.excluded_arrays()
    sums = a.as_array()[ei] + b.as_array()[ej]
    r = counts[(sums - offset) // step]
    keep = r < _ceil_fraction(k)
    return rel.drop_excluded(keep)


# -- cyclic-group side ------------------------------------------------------


def cyclic_rep_counts(a: IntSet, b: IntSet, m: int) -> np.ndarray:
    """r over Z/mZ for residue sets a, b."""
    sums = (a.as_array()[:, None] + b.as_array()[None, :]).ravel() % m
    return np.bincount(sums, minlength=m).astype(np.int64)


def complete_sumset_mod(a: IntSet, b: IntSet, m: int) -> IntSet:
    return IntSet._from_sorted(np.nonzero(cyclic_rep_counts(a, b, m))[0].tolist())


def restricted_sumset_mod(a: IntSet, b: IntSet, rel: PairRelation, m: int) -> IntSet:
    _check_rel(a, b, rel)
    counts = cyclic_rep_counts(a, b, m)
    ei, ej = rel.excluded_arrays()
    if ei.size:
        sums = (a.as_array()[ei] + b.as_array()[ej]) % m
        exc = np.bincount(sums, minlength=m).astype(np.int64)
    else:
        exc = np.zeros(m, dtype=np.int64)
    return IntSet._from_sorted(np.nonzero(counts > exc)[0].tolist())


def check_regular_mod(a: IntSet, b: IntSet, rel: PairRelation, k, s: int, m: int):
    """Cyclic analogue of check_regular."""
    _check_rel(a, b, rel)
    k = Fraction(k)
    rd = rel.row_defects
    if rd.size and rd.max() > s:
        return False, ("row", int(np.argmax(rd > s)))
    cd = rel.col_defects
    if cd.size and cd.max() > s:
        return False, ("col", int(np.argmax(cd > s)))
    counts = cyclic_rep_counts(a, b, m)
    ei, ej = rel.excluded_arrays()
    exc = np.zeros(m, dtype=np.int64)
    if ei.size:
        sums = (a.as_array()[ei] + b.as_array()[ej]) % m
        exc = np.bincount(sums, minlength=m).astype(np.int64)
    kthr = _ceil_fraction(k) if k > 0 else 0
    bad = (counts >= max(kthr, 1)) & (counts <= exc)
    if bad.any():
        return False, ("sum", int(np.argmax(bad)))
    return True, None


def _residue_mask(s, m: int) -> int:
    mask = 0
    for v in s:
        v = int(v)
        if not (0 <= v < m):
            raise PreconditionViolated(f"residue {v} outside Z/{m}Z")
        mask |= 1 << v
    return mask


def _rot(mask: int, h: int, m: int) -> int:
    all_bits = (1 << m) - 1
    h %= m
    return ((mask << h) | (mask >> (m - h))) & all_bits if h else mask


def stabilizer_direct(s, m: int) -> IntSet:
    """H = {h : S + h = S}, testing all m shifts."""
    mask = _residue_mask(s, m)
    if mask == 0:
        raise EmptySet("stabilizer of the empty set is undefined")
    return IntSet._from_sorted(h for h in range(m) if _rot(mask, h, m) == mask)


def stabilizer_by_divisors(s, m: int) -> IntSet:
    """Same subgroup, found as the multiples of the smallest stabilizing divisor."""
    mask = _residue_mask(s, m)
    if mask == 0:
        raise EmptySet("stabilizer of the empty set is undefined")
    for d in sorted(d for d in range(1, m + 1) if m % d == 0):
        if _rot(mask, d, m) == mask:
            return IntSet._from_sorted(range(0, m, d))
    return IntSet([0])


def stabilizer(s, m: int) -> IntSet:
    """Stabilizer subgroup of a subset of Z/mZ; the two strategies agree and
    are cross-checked in tests."""
    return stabilizer_by_divisors(s, m) if m > 64 else stabilizer_direct(s, m)


@dataclass(frozen=True)
class ModularScene:
    """Everything produced by reducing (A, B, G) modulo the diameter l."""

    modulus: int
    a_mod: IntSet
    b_mod: IntSet
    rel_mod: PairRelation
    stab: IntSet
    restricted_size: int
    restricted_size_mod: int
    n: int
    s: int

    def counting_slack(self) -> int:
        """restricted_size - (restricted_size_mod + n - 2s); nonnegative when the
        reduction inequality holds."""
        return self.restricted_size - (self.restricted_size_mod + self.n - 2 * self.s)


def reduce_mod(a: IntSet, b: IntSet, rel: PairRelation, l: int) -> ModularScene:
    """Project (A, B, G) to Z/lZ; requires 0, l in A, 0 in B, both within [0, l]."""
    _check_rel(a, b, rel)
    if l < 1:
        raise PreconditionViolated("modulus must be >= 1")
    if a.min < 0 or a.max > l or b.min < 0 or b.max > l:
        raise PreconditionViolated("sets must lie inside {0..l}")
    if 0 not in a or l not in a:
        raise PreconditionViolated("0 and l must both belong to A")
    if 0 not in b:
        raise PreconditionViolated("0 must belong to B")

    arr_a, arr_b = a.as_array(), b.as_array()
    ra, rb = arr_a % l, arr_b % l
    a_mod = IntSet(ra.tolist())
    b_mod = IntSet(rb.tolist())
    pa = np.searchsorted(a_mod.as_array(), ra)
    pb = np.searchsorted(b_mod.as_array(), rb)

    na2, nb2 = len(a_mod), len(b_mod)
    totals = np.zeros(na2 * nb2, dtype=np.int64)
    np.add.at(totals, (pa[:, None] * nb2 + pb[None, :]).ravel(), 1)
    exc = np.zeros(na2 * nb2, dtype=np.int64)
    ei, ej = rel.excluded_arrays()
    if ei.size:
        np.add.at(exc, pa[ei] * nb2 + pb[ej], 1)
    keys = np.nonzero(exc == totals)[0]
    rel_mod = PairRelation(na2, nb2, (keys // nb2).astype(np.int64), (keys % nb2).astype(np.int64))

    up = len(restricted_sumset(a, b, rel))
    down = len(restricted_sumset_mod(a_mod, b_mod, rel_mod, l))
    stab = stabilizer(complete_sumset_mod(a_mod, b_mod, l), l)
    return ModularScene(
        modulus=l,
        a_mod=a_mod,
        b_mod=b_mod,
        rel_mod=rel_mod,
        stab=stab,
        restricted_size=up,
        restricted_size_mod=down,
        n=len(a),
        s=rel.max_defect,
    )

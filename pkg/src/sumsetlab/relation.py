"""Pair relations between two indexed sets, stored by their complement.

A relation G is a subset of A x B addressed by index pairs (i, j). Every use
case here keeps G dense, so only the excluded pairs are materialized; the full
matrix never is. Arrays are kept sorted by (i, j), which fixes a canonical
iteration order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Tuple

import numpy as np

from .errors import IndexMismatch

_MAX_DENSE = 8_000_000  # guard for operations that would walk every pair


class PairRelation:
    __slots__ = ("na", "nb", "_ei", "_ej", "_rowdef", "_coldef")

    def __init__(self, na: int, nb: int, ei: np.ndarray, ej: np.ndarray):
        if na < 1 or nb < 1:
            raise IndexMismatch("relation needs positive domain sizes")
        self.na = int(na)
        self.nb = int(nb)
        self._ei = ei
        self._ej = ej
        self._rowdef = None
        self._coldef = None

    @classmethod
    def full(cls, na: int, nb: int) -> "PairRelation":
        e = np.empty(0, dtype=np.int64)
        return cls(na, nb, e, e)

    @classmethod
    def from_excluded(cls, na: int, nb: int, pairs: Iterable[Tuple[int, int]]) -> "PairRelation":
        arr = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs, dtype=np.int64)
        if arr.size == 0:
            return cls.full(na, nb)
        arr = arr.reshape(-1, 2)
        ei, ej = arr[:, 0], arr[:, 1]
        if ei.min() < 0 or ei.max() >= na or ej.min() < 0 or ej.max() >= nb:
            raise IndexMismatch("excluded pair index out of range")
        keys = np.unique(ei * nb + ej)
        return cls(na, nb, keys // nb, keys % nb)

    @classmethod
    def from_included(cls, na: int, nb: int, pairs: Iterable[Tuple[int, int]]) -> "PairRelation":
        if na * nb > _MAX_DENSE:
            raise IndexMismatch("domain too large to complement an inclusion list")
        present = np.zeros(na * nb, dtype=bool)
        for i, j in pairs:
            if not (0 <= i < na and 0 <= j < nb):
                raise IndexMismatch("included pair index out of range")
            present[i * nb + j] = True
        keys = np.nonzero(~present)[0].astype(np.int64)
        return cls(na, nb, keys // nb, keys % nb)

    @classmethod
    def empty(cls, na: int, nb: int) -> "PairRelation":
        return cls.from_included(na, nb, ())

    # -- basic accessors -------------------------------------------------

    @property
    def excluded_count(self) -> int:
        return int(self._ei.size)

    @property
    def size(self) -> int:
        """|G|."""
        return self.na * self.nb - self.excluded_count

    @property
    def is_full(self) -> bool:
        return self.excluded_count == 0

    @property
    def density_defect(self) -> Fraction:
        """1 - |G| / (|A||B|), exact."""
        return Fraction(self.excluded_count, self.na * self.nb)

    @property
    def row_defects(self) -> np.ndarray:
        if self._rowdef is None:
            self._rowdef = np.bincount(self._ei, minlength=self.na).astype(np.int64)
        return self._rowdef

    @property
    def col_defects(self) -> np.ndarray:
        if self._coldef is None:
            self._coldef = np.bincount(self._ej, minlength=self.nb).astype(np.int64)
        return self._coldef

    @property
    def max_defect(self) -> int:
        if self.is_full:
            return 0
        return int(max(self.row_defects.max(), self.col_defects.max()))

    def excluded_pairs(self) -> Iterator[Tuple[int, int]]:
        return zip(self._ei.tolist(), self._ej.tolist())

    def excluded_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return self._ei, self._ej

    def contains(self, i: int, j: int) -> bool:
        if not (0 <= i < self.na and 0 <= j < self.nb):
            raise IndexMismatch("pair index out of range")
        key = i * self.nb + j
        keys = self._ei * self.nb + self._ej
        pos = np.searchsorted(keys, key)
        return not (pos < keys.size and keys[pos] == key)

    def transpose(self) -> "PairRelation":
        order = np.argsort(self._ej * self.na + self._ei, kind="stable")
        return PairRelation(self.nb, self.na, self._ej[order], self._ei[order])

    def restrict(self, keep_i: np.ndarray, keep_j: np.ndarray) -> "PairRelation":
        """Sub-relation on the given sorted index subsets, reindexed from 0."""
        keep_i = np.asarray(keep_i, dtype=np.int64)
        keep_j = np.asarray(keep_j, dtype=np.int64)
        in_i = np.isin(self._ei, keep_i)
        in_j = np.isin(self._ej, keep_j)
        sel = in_i & in_j
        new_i = np.searchsorted(keep_i, self._ei[sel])
        new_j = np.searchsorted(keep_j, self._ej[sel])
        order = np.argsort(new_i * keep_j.size + new_j, kind="stable")
        return PairRelation(keep_i.size, keep_j.size, new_i[order], new_j[order])

    def drop_excluded(self, keep_mask: np.ndarray) -> "PairRelation":
        """Relation with only the masked subset of exclusions kept (a superset of G)."""
        return PairRelation(self.na, self.nb, self._ei[keep_mask], self._ej[keep_mask])

    def to_json(self):
        if self.is_full:
            return "full"
        return [[int(i), int(j)] for i, j in self.excluded_pairs()]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PairRelation)
            and self.na == other.na
            and self.nb == other.nb
            and np.array_equal(self._ei, other._ei)
            and np.array_equal(self._ej, other._ej)
        )

    def __hash__(self):
        return hash((self.na, self.nb, self._ei.tobytes(), self._ej.tobytes()))

    def __repr__(self) -> str:
        return f"PairRelation({self.na}x{self.nb}, excluded={self.excluded_count})"

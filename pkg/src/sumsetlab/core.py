"""Integer-set primitives: sorted sets, arithmetic progressions, normalization.

All types here are immutable after construction and safe to share across
threads. Sets keep a sorted tuple of distinct integers and, lazily, a bitmask
relative to their minimum, which is what the fast kernels consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import DegenerateSet, EmptyInput


def _mask_from_values(values, base: int) -> int:
    buf = bytearray((values[-1] - base) // 8 + 1)
    for v in values:
        off = v - base
        buf[off >> 3] |= 1 << (off & 7)
    return int.from_bytes(buf, "little")


def values_from_mask(mask: int, base: int = 0) -> np.ndarray:
    """Bit positions of ``mask`` shifted by ``base``, as an int64 array."""
    if mask == 0:
        return np.empty(0, dtype=np.int64)
    nbytes = (mask.bit_length() + 7) // 8
    arr = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    bits = np.unpackbits(arr, bitorder="little").nonzero()[0].astype(np.int64)
    return bits + base


class IntSet:
    """Finite set of integers, stored as a strictly increasing tuple."""

    __slots__ = ("elements", "_mask", "_members")

    def __init__(self, values: Iterable[int] = ()):
        self.elements = tuple(sorted({int(v) for v in values}))
        self._mask = None
        self._members = None

    @classmethod
    def _from_sorted(cls, values) -> "IntSet":
        obj = object.__new__(cls)
        obj.elements = tuple(values)
        obj._mask = None
        obj._members = None
        return obj

    @classmethod
    def interval(cls, lo: int, hi: int) -> "IntSet":
        """The integers lo..hi inclusive."""
        return cls._from_sorted(range(lo, hi + 1))

    @classmethod
    def from_mask(cls, mask: int, base: int = 0) -> "IntSet":
        return cls._from_sorted(values_from_mask(mask, base).tolist())

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def min(self) -> int:
        if not self.elements:
            raise EmptyInput("empty set has no minimum")
        return self.elements[0]

    @property
    def max(self) -> int:
        if not self.elements:
            raise EmptyInput("empty set has no maximum")
        return self.elements[-1]

    def mask(self) -> int:
        """Bitmask relative to the minimum element."""
        if self._mask is None:
            self._mask = _mask_from_values(self.elements, self.min)
        return self._mask

    def as_array(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64)

    def translate(self, c: int) -> "IntSet":
        return IntSet._from_sorted(v + c for v in self.elements)

    def dilate(self, c: int) -> "IntSet":
        if c == 0:
            raise ValueError("dilation factor must be nonzero")
        vals = [v * c for v in self.elements]
        return IntSet._from_sorted(vals if c > 0 else reversed(vals))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        if self._members is None:
            self._members = frozenset(self.elements)
        return x in self._members

    def __eq__(self, other) -> bool:
        return isinstance(other, IntSet) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        if len(self.elements) > 12:
            head = ", ".join(map(str, self.elements[:10]))
            return f"IntSet([{head}, ... {len(self.elements)} elements])"
        return f"IntSet({list(self.elements)})"


@dataclass(frozen=True)
class ArithProgression:
    """The progression {start + k*difference : 0 <= k < count}."""

    start: int
    difference: int
    count: int

    def __post_init__(self):
        if self.difference < 1:
            raise ValueError("difference must be >= 1")
        if self.count < 1:
            raise ValueError("count must be >= 1")

    @property
    def last(self) -> int:
        return self.start + (self.count - 1) * self.difference

    @property
    def is_centred(self) -> bool:
        """True when 0 is a term and the terms are symmetric around 0."""
        return (
            self.start <= 0
            and (-self.start) % self.difference == 0
            and self.start + self.last == 0
        )

    def values(self) -> range:
        return range(self.start, self.start + self.count * self.difference, self.difference)

    def as_intset(self) -> IntSet:
        return IntSet._from_sorted(self.values())

    def __len__(self) -> int:
        return self.count

    def __contains__(self, x) -> bool:
        k = x - self.start
        return k >= 0 and k % self.difference == 0 and k // self.difference < self.count


@dataclass(frozen=True)
class NormalizationMap:
    """Per-side translation plus a common dilation; invertible on integers."""

    shift_a: int
    shift_b: int
    scale: int

    def invert(self, x: int, side: str) -> int:
        return x * self.scale + (self.shift_a if side == "a" else self.shift_b)

    def apply(self, x: int, side: str) -> int:
        shift = self.shift_a if side == "a" else self.shift_b
        q, r = divmod(x - shift, self.scale)
        if r:
            raise ValueError(f"{x} is not on the normalized lattice for side {side!r}")
        return q


def normalize_pair(a: IntSet, b: IntSet):
    """Translate each set so its minimum is 0 and divide out the common gcd.

    Returns ``(a2, b2, nmap, l)`` with ``min(a2) = min(b2) = 0``,
    ``gcd(a2 | b2) = 1`` and ``l = max(a2 | b2)``. Raises DegenerateSet when
    both sets are singletons (no gcd to normalize by).
    """
    if not a.elements or not b.elements:
        raise EmptyInput("normalize_pair requires nonempty sets")
    sa, sb = a.min, b.min
    au = [v - sa for v in a.elements]
    bu = [v - sb for v in b.elements]
    g = math.gcd(*au, *bu)
    if g == 0:
        raise DegenerateSet("both sets are single points after translation")
    a2 = IntSet._from_sorted(v // g for v in au)
    b2 = IntSet._from_sorted(v // g for v in bu)
    return a2, b2, NormalizationMap(sa, sb, g), max(a2.max, b2.max)


def denormalize_ap(p: ArithProgression, nmap: NormalizationMap, side: str) -> ArithProgression:
    """Map a progression in normalized coordinates back to the original ones."""
    if side not in ("a", "b"):
        raise ValueError("side must be 'a' or 'b'")
    return ArithProgression(
        start=nmap.invert(p.start, side),
        difference=p.difference * nmap.scale,
        count=p.count,
    )


def rep_function(a: IntSet, b: IntSet, x: int) -> int:
    """Number of pairs (u, v) in A x B with u + v = x."""
    if len(a) > len(b):
        a, b = b, a
    return sum(1 for u in a.elements if (x - u) in b)


def progression_coverage(p: ArithProgression, s: IntSet) -> int:
    """|S intersect P|."""
    if not s.elements:
        return 0
    arr = s.as_array()
    k = arr - p.start
    d = p.difference
    sel = (k >= 0) & (k < d * p.count) & (k % d == 0)
    return int(sel.sum())

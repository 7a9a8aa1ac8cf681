"""Conversion of user-facing numbers to exact rationals.

Floats are interpreted through their shortest decimal repr (so 1e-4 means
exactly 1/10000, not the nearest binary double); strings accept either
decimal or "p/q" notation. Deterministic by construction.
"""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(Decimal(repr(x)))
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(Decimal(s))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)

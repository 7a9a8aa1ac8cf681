"""Bound expressions and comparison conventions used by the verifier.

Two kinds of comparisons appear in this package:

* exact rational comparisons, used whenever a bound is free of the golden
  ratio (coverage thresholds, epsilon powers against integer cardinalities);
  these go through integer/Fraction arithmetic and can never misclassify;
* float comparisons against golden-ratio bounds, done with an explicit
  verifier slack: a lower bound counts as violated only when it is violated
  by more than ``VERIFIER_SLACK``, so rounding can never manufacture a
  counterexample.

Strict ``>`` bounds whose two sides are both rational (the cyclic difference
bound) are rewritten in ``>=`` form by bumping the requirement to the smallest
integer that passes; strict bounds involving the golden ratio need no bump
because an integer measurement can never equal them.
"""

from __future__ import annotations

import math
from fractions import Fraction

THETA = (1.0 + math.sqrt(5.0)) / 2.0
VERIFIER_SLACK = 1e-9


def bound_passes(measured: float, required: float) -> bool:
    """measured >= required, up to the verifier slack."""
    return measured - required >= -VERIFIER_SLACK


def prop_sum_required(n: int, l: int, k: Fraction, s: int) -> float:
    """Lower bound for |A +_G B| on the integer line, branch chosen by l vs 2n-2K-2."""
    if l < 2 * n - 2 * k - 2:
        return float(l + n - 2 * s)
    return (THETA + 1.0) * n - 4.0 * s - 2.0 * float(k) - THETA


def prop_diff_required(n: int, l: int, k: Fraction, s: int) -> float:
    """Lower bound for |A -_G A| on the integer line, same branch structure."""
    if l < 2 * n - 2 * k - 2:
        return float(l + n - 2 * s)
    return float(3 * n - 4 * s - 2 * k - 2)


def kneser_theta_required(n: int, k: Fraction, s: int) -> float:
    """Strict cyclic-group bound theta*n - K - 2s; equality is impossible for n >= 1."""
    return THETA * n - float(k) - 2.0 * s


def kneser_diff_required(n: int, k: Fraction, s: int) -> float:
    """Strict cyclic difference bound 2n - K - 2s, rewritten as >= floor(.)+1."""
    bound = Fraction(2 * n - 2 * s) - Fraction(k)
    return float(math.floor(bound) + 1)


def pollard_required(n: int, t: int) -> float:
    return float(t * (2 * n - t))


def hyp_sum_upper(n: int, eps: Fraction) -> float:
    """(1 + theta - 11 sqrt(eps)) n, the size ceiling in the additive hypothesis."""
    return (1.0 + THETA - 11.0 * math.sqrt(float(eps))) * n


def hyp_diff_upper(n: int, eps: Fraction) -> float:
    """(3 - 11 sqrt(eps)) n, the size ceiling in the difference hypothesis."""
    return (3.0 - 11.0 * math.sqrt(float(eps))) * n


def ceil_sqrt(q: Fraction) -> int:
    """Smallest integer r >= 0 with r*r >= q. Exact."""
    if q <= 0:
        return 0
    num, den = q.numerator, q.denominator
    r = math.isqrt(num // den)
    while r * r * den < num:
        r += 1
    return r


def leq_sqrt(value, coeff: int, eps: Fraction, scale: int) -> bool:
    """Exact test of value <= coeff * sqrt(eps) * scale (value rational)."""
    v = Fraction(value)
    if v <= 0:
        return True
    return v * v <= Fraction(coeff) ** 2 * eps * Fraction(scale) ** 2


def leq_quartic(value, coeff: int, eps: Fraction, scale: int) -> bool:
    """Exact test of value <= coeff * eps**(1/4) * scale (value rational)."""
    v = Fraction(value)
    if v <= 0:
        return True
    return v ** 4 <= Fraction(coeff) ** 4 * eps * Fraction(scale) ** 4

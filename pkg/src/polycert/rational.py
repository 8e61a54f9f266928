"""Exact rational scalars.

All scalars in the package are ``gmpy2.mpq`` values: arbitrary precision,
always in lowest terms with a positive denominator, and hash-compatible
with :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

from gmpy2 import mpq, mpz

Rational = type(mpq(0))

RationalLike = Union[int, str, Fraction, "mpq", "mpz"]

ZERO = mpq(0)
ONE = mpq(1)


def Q(value: RationalLike, den: int | None = None) -> mpq:
    """Coerce ``value`` (or ``value/den``) to an exact rational.

    Strings are accepted in the forms ``"p"`` and ``"p/q"``. Floats are
    rejected on purpose: every number entering the pipeline is exact.
    """
    if isinstance(value, float):
        raise TypeError("floating-point values are not accepted; pass an exact rational")
    if den is not None:
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return mpq(value, den)
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        try:
            return mpq(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational literal {value!r}") from exc
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def fmt(q: mpq) -> str:
    """Render a rational as ``"p"`` or ``"p/q"`` (lowest terms)."""
    return str(q)


def numer(q: mpq) -> int:
    return int(q.numerator)


def denom(q: mpq) -> int:
    return int(q.denominator)


def height(q: mpq) -> int:
    """Height ``max(|p|, q)`` of a rational, with ``H(0) = 0``."""
    if q == 0:
        return 0
    return max(abs(numer(q)), denom(q))


def bitsize(q: mpq) -> int:
    """``floor(lg H(q)) + 1``; zero for the zero rational."""
    return height(q).bit_length()


def lcm_of_denominators(values: Iterable[mpq]) -> int:
    result = 1
    for v in values:
        result = math.lcm(result, denom(v))
    return result


def gcd_of_numerators(values: Iterable[mpq]) -> int:
    result = 0
    for v in values:
        result = math.gcd(result, numer(v))
    return result


def sign(q: mpq) -> int:
    return (q > 0) - (q < 0)


def ceil_log2(n: int) -> int:
    """Smallest ``m`` with ``2**m >= n`` for a positive integer ``n``."""
    if n <= 0:
        raise ValueError("ceil_log2 needs a positive integer")
    return (n - 1).bit_length()


def _floor(q: mpq) -> int:
    """Exact floor (``gmpy2.floor`` rounds through a binary float)."""
    return int(q.numerator // q.denominator)


def simplest_between(lo: mpq, hi: mpq, lo_open: bool = True, hi_open: bool = False) -> mpq:
    """Rational of smallest denominator (then smallest magnitude) in an interval.

    The interval runs from ``lo`` to ``hi`` with each end open or closed as
    requested. The search is the continued-fraction descent through the
    Stern-Brocot tree, so it needs only as many steps as the continued
    fraction expansion of the endpoints.
    """
    lo, hi = Q(lo), Q(hi)
    if lo > hi or (lo == hi and (lo_open or hi_open)):
        raise ValueError("empty interval")
    if lo == hi:
        return lo
    if hi <= 0:
        # Mirror into the positive side.
        return -simplest_between(-hi, -lo, hi_open, lo_open)
    if lo < 0 or (lo == 0 and not lo_open):
        return ZERO
    # Now 0 <= lo < hi, both ends positive or lo == 0 open.
    # Iterative descent: x = a0 + 1/(a1 + 1/(...)); keep the convergent
    # matrix (p0 q0; p1 q1) so the answer is assembled without recursion.
    p_prev, q_prev, p_cur, q_cur = 0, 1, 1, 0
    while True:
        fl = _floor(lo)
        # Smallest integer strictly (or weakly) above lo.
        cand = fl + 1 if (lo_open or lo != fl) else fl
        if cand < hi or (cand == hi and not hi_open):
            a = cand
            return mpq(a * p_cur + p_prev, a * q_cur + q_prev)
        # No integer inside: both ends share the integer part fl.
        a = fl
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, a * p_cur + p_prev, a * q_cur + q_prev
        frac_lo = lo - a
        frac_hi = hi - a
        # Reciprocal swaps the ends; 1/0 is +infinity.
        if frac_lo == 0:
            new_hi = None
        else:
            new_hi = 1 / frac_lo
        lo, hi = 1 / frac_hi, new_hi
        lo_open, hi_open = hi_open, lo_open
        if hi is None:
            # Interval [1/frac_hi, +inf): its simplest member is the least
            # admissible integer.
            fl = _floor(lo)
            a = fl + 1 if (lo_open or lo != fl) else fl
            return mpq(a * p_cur + p_prev, a * q_cur + q_prev)

"""Explicit size-dependent constants.

* ``radius_bound``: a radius outside which the stereographic transform of
  an integer polynomial is positive, ``2**(n + 2d + tau)``.
* ``critical_value_lower_bound``: a positive rational below every nonzero
  critical value magnitude of integer polynomials of a given size.
* ``epsilon_bound``: the largest positive perturbation parameter that
  provably preserves the sign behaviour of the transform.

The last two are astronomically small, so they are kept as a product of
integer prime-power-like factors and only expanded on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from gmpy2 import mpq, mpz

from .polycore import MvPoly, norms
from .rational import ceil_log2

# Rational upper bound for Euler's number: ten decimals, rounded up.
E_NUMERATOR = 27182818285
E_DENOMINATOR = 10**10


@dataclass(frozen=True)
class SizeProfile:
    """Number of variables, degree and coefficient bitsize of an input."""

    n: int
    d: int
    tau: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.d < 0 or self.tau < 0:
            raise ValueError(f"invalid size profile {self}")


def profile_of(f: MvPoly) -> SizeProfile:
    """Profile ``(n, deg f, h(f))`` of a polynomial with integer coefficients."""
    _, bits, _ = norms(f)
    return SizeProfile(f.nvars, max(f.degree, 0), bits)


@dataclass(frozen=True)
class BoundValue:
    """A positive rational stored as ``cofactor * prod(base ** exponent)``."""

    factors: tuple[tuple[int, int], ...]
    cofactor: mpq = field(default_factory=lambda: mpq(1))

    @cached_property
    def value(self) -> mpq:
        num = mpz(1)
        den = mpz(1)
        for base, exp in self.factors:
            if exp > 0:
                num *= mpz(base) ** exp
            elif exp < 0:
                den *= mpz(base) ** (-exp)
        return mpq(num, den) * self.cofactor

    def log2_estimate(self) -> float:
        """Approximate base-2 logarithm without expanding the product."""
        import math

        total = math.log2(self.cofactor.numerator) - math.log2(self.cofactor.denominator)
        for base, exp in self.factors:
            total += exp * math.log2(base)
        return total

    def __mul__(self, other: "BoundValue") -> "BoundValue":
        return BoundValue(_merge(self.factors + other.factors), self.cofactor * other.cofactor)

    def inverse(self) -> "BoundValue":
        return BoundValue(tuple((b, -e) for b, e in self.factors), 1 / self.cofactor)

    def power(self, k: int) -> "BoundValue":
        return BoundValue(tuple((b, e * k) for b, e in self.factors), self.cofactor**k)


def _merge(factors) -> tuple[tuple[int, int], ...]:
    acc: dict[int, int] = {}
    for base, exp in factors:
        if base == 1 or exp == 0:
            continue
        acc[base] = acc.get(base, 0) + exp
    return tuple(sorted((b, e) for b, e in acc.items() if e))


def radius_bound(p: SizeProfile) -> BoundValue:
    return BoundValue(((2, p.n + 2 * p.d + p.tau),))


def critical_value_lower_bound(p: SizeProfile) -> BoundValue:
    """Lower bound with ``e`` replaced by the rational ``E_NUMERATOR / E_DENOMINATOR``."""
    n, d, tau = p.n, p.d, p.tau
    a = (n + 1) * (n + 2) * d ** (n + 1)
    b = (n + 1) * d**n
    factors = [
        (n + 2, -2 * a),
        (E_NUMERATOR, -(n + 3) * a),
        (E_DENOMINATOR, (n + 3) * a),
        (n, -n * b),
        (n + 1, -b),
        (d, -b) if d > 0 else (1, 0),
        (2, -tau * b),
    ]
    return BoundValue(_merge(factors))


def epsilon_bound(p: SizeProfile) -> BoundValue:
    """``c'(n, 2d, tau*) / (6n * Rad**(2d+2))`` with ``tau* = d*ceil(lg(n+1)) + n + 2d + tau``."""
    n, d, tau = p.n, p.d, p.tau
    tau_star = d * ceil_log2(n + 1) + n + 2 * d + tau
    c = critical_value_lower_bound(SizeProfile(n, 2 * d, tau_star))
    rad = radius_bound(p).power(2 * d + 2).inverse()
    return BoundValue(_merge(c.factors + rad.factors + ((6 * n, -1),)))

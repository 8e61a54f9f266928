"""Positive and negative perturbations of the stereographic transform.

For ``g`` of degree ``D`` and ``lam > 0``:

* positive: ``g + lam * sum_i (1 + Xi**2 + Xi**(D+2))``; its partials have
  pairwise coprime leading monomials ``Xi**(D+1)``, so they already form a
  Groebner basis of a zero-dimensional ideal with ``(D+1)**n`` solutions;
* negative: ``g - lam * sum_i (1 + Xi**2 + Xi**D)``; nonnegative for small
  ``lam`` exactly when the original input is strictly positive together
  with its top-degree part.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from gmpy2 import mpq

from .bounds import SizeProfile, epsilon_bound
from .polycore import MvPoly
from .rational import Q, RationalLike, ceil_log2, simplest_between
from .rng import STREAM_LAMBDA, SplitMix64


class Regime(enum.Enum):
    POS = "pos"
    NEG = "neg"


@dataclass(frozen=True)
class Lambda:
    value: mpq
    regime: Regime
    gamma: int | None = None

    def __post_init__(self) -> None:
        if not self.value > 0:
            raise ValueError("perturbation parameter must be positive")
        if self.regime is Regime.NEG and self.gamma is not None:
            lo = mpq(1, 1 << (2 * self.gamma))
            hi = mpq(1, 1 << self.gamma)
            if not (lo < self.value <= hi):
                raise ValueError(f"{self.value} is outside ({lo}, {hi}]")


class LambdaExhausted(Exception):
    """All candidates of the current dyadic window have been used."""


def perturbation_sum(n: int, top: int) -> MvPoly:
    """``sum_i (1 + Xi**2 + Xi**top)``."""
    out = MvPoly.const(n, n)
    for i in range(n):
        for k in (2, top):
            e = [0] * n
            e[i] = k
            out = out + MvPoly.monomial(tuple(e))
    return out


def _value(lam: Lambda | RationalLike) -> mpq:
    return lam.value if isinstance(lam, Lambda) else Q(lam)


def pos_perturb(g: MvPoly, lam: Lambda | RationalLike) -> MvPoly:
    if isinstance(lam, Lambda) and lam.regime is not Regime.POS:
        raise ValueError("positive perturbation needs a POS parameter")
    d = g.degree
    if d < 2 or d % 2:
        raise ValueError("positive perturbation needs an even degree of at least 2")
    return g + perturbation_sum(g.nvars, d + 2).scale(_value(lam))


def neg_perturb(g: MvPoly, lam: Lambda | RationalLike) -> MvPoly:
    if isinstance(lam, Lambda) and lam.regime is not Regime.NEG:
        raise ValueError("negative perturbation needs a NEG parameter")
    d = g.degree
    if d < 2 or d % 2:
        raise ValueError("negative perturbation needs an even degree of at least 2")
    return g - perturbation_sum(g.nvars, d).scale(_value(lam))


def pick_lambda_pos(profile: SizeProfile) -> Lambda:
    """Simplest rational in ``(0, eps']``."""
    eps = epsilon_bound(profile).value
    return Lambda(simplest_between(mpq(0), eps, lo_open=True, hi_open=False), Regime.POS)


def unlucky_count(n: int, d: int) -> int:
    """Upper bound on parameters for which the negative perturbation of a degree-``d`` input misbehaves."""
    return (2 * d - 1) ** (n - 1) * (2 * d - 1 + n)


def _candidate_count(n: int, d: int, k: int) -> int:
    return k * unlucky_count(n, max(d, 1))


def pick_lambda_neg(gamma: int, attempt: int, k: int, seed: int, n: int = 1, d: int = 1) -> Lambda:
    """Dyadic parameter in ``(2**-(2*gamma), 2**-gamma]`` with small bitsize.

    The candidates are ``(2**(m+2) - 2j - 1) / 2**(gamma+m+2)`` for
    ``j`` in ``[0, S)`` with ``S = k * (2d-1)**(n-1) * (2d-1+n)`` and
    ``m = ceil(lg S)``. All lie in ``(2**-(gamma+1), 2**-gamma)`` and have odd
    numerators, so different ``j`` give different values. The attempt index
    walks a seeded permutation ``j = (a * attempt + b) mod S``.
    """
    if gamma < 1:
        raise ValueError("gamma must be at least 1")
    size = _candidate_count(n, d, k)
    if attempt < 0:
        raise ValueError("attempt must be nonnegative")
    if attempt >= size:
        raise LambdaExhausted(f"all {size} candidates of window gamma={gamma} used")
    rng = SplitMix64(seed ^ gamma, STREAM_LAMBDA)
    b = rng.randbelow(size)
    a = 1 + rng.randbelow(size)
    while math.gcd(a, size) != 1:
        a = 1 + rng.randbelow(size)
    j = (a * attempt + b) % size
    m = ceil_log2(size)
    value = mpq((1 << (m + 2)) - 2 * j - 1, 1 << (gamma + m + 2))
    return Lambda(value, Regime.NEG, gamma)

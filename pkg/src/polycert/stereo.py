"""Stereographic transform, witness back-transport and constant-term shift.

For ``f`` of degree ``d`` the transform is the polynomial

    S(f) = f^h(2*X1, ..., 2*Xn, -1 + X1**2 + ... + Xn**2)

of degree ``2d``. Away from the unit sphere it equals
``(|x|**2 - 1)**d * f(2x / (|x|**2 - 1))``, and on the sphere it equals
``2**d`` times the top-degree part of ``f``. So ``S(f)`` is nonnegative
exactly when ``f`` and its top-degree part are, and a negative value of
``S(f)`` at a rational point maps back to a negative value of ``f``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .polycore import MvPoly, evaluate, norms
from .rational import Q, RationalLike, ZERO
from .rng import STREAM_SHIFT, SplitMix64


@dataclass(frozen=True)
class StereoResult:
    transformed: MvPoly
    source_degree: int
    source_height: mpq


@dataclass(frozen=True)
class Witness:
    """A rational point at which a polynomial is strictly negative."""

    point: tuple
    value: mpq


class NotNegativeError(ValueError):
    """Raised when a witness is requested at a point where the value is not negative."""

    def __init__(self, value: mpq) -> None:
        super().__init__(f"value {value} is not negative")
        self.value = value


def sphere_quadric(n: int) -> MvPoly:
    """``-1 + X1**2 + ... + Xn**2``."""
    terms = {(0,) * n: mpq(-1)}
    for i in range(n):
        e = [0] * n
        e[i] = 2
        terms[tuple(e)] = mpq(1)
    return MvPoly(n, terms)


def stereo_transform(f: MvPoly) -> StereoResult:
    if f.is_zero():
        raise ValueError("the zero polynomial has no stereographic transform")
    n, d = f.nvars, f.degree
    quad = sphere_quadric(n)
    quad_powers = [MvPoly.const(n, 1)]
    for _ in range(d):
        quad_powers.append(quad_powers[-1] * quad)
    out = MvPoly.zero(n)
    # Group terms by total degree: each group multiplies one power of the quadric.
    by_degree: dict[int, dict] = {}
    for e, c in f.terms.items():
        k = sum(e)
        by_degree.setdefault(k, {})[e] = c * (1 << k)
    for k, terms in by_degree.items():
        out = out + MvPoly(n, terms, _trusted=True) * quad_powers[d - k]
    h, _, _ = norms(f)
    return StereoResult(out, d, h)


def stereo_of(f: MvPoly) -> MvPoly:
    return stereo_transform(f).transformed


def _norm_sq(x: Sequence[mpq]) -> mpq:
    return sum((v * v for v in x), ZERO)


def witness_scale_constant(f: MvPoly, x: Sequence[mpq]) -> int:
    """Integer ``2**(n+2d-1) * H(x)**((n+1)d - 1) * H(f)`` used on the unit sphere."""
    n, d = f.nvars, f.degree
    hx = max(max(abs(int(v.numerator)), int(v.denominator)) for v in x)
    hf = int(norms(f)[0])
    return (1 << (n + 2 * d - 1)) * hx ** ((n + 1) * d - 1) * hf


def transport_point(f: MvPoly, x: Sequence[RationalLike]) -> tuple:
    """The back-transported point, without checking the sign of ``S(f)(x)``."""
    xs = [Q(v) for v in x]
    r2 = _norm_sq(xs)
    if r2 != 1:
        s = 2 / (r2 - 1)
        return tuple(v * s for v in xs)
    c = witness_scale_constant(f, xs)
    return tuple(2 * c * v for v in xs)


def witness_transport(f: MvPoly, x: Sequence[RationalLike]) -> Witness:
    """Map a point where ``S(f)`` is negative to a point where ``f`` is negative.

    ``f`` must have even degree: for odd degree the factor ``(|x|**2 - 1)**d``
    changes sign inside the unit ball and the transport is not sound.
    """
    xs = [Q(v) for v in x]
    if len(xs) != f.nvars:
        raise ValueError("point dimension does not match the polynomial")
    if f.degree % 2:
        raise ValueError("witness transport needs a polynomial of even degree")
    s_val = evaluate(stereo_of(f), xs)
    if s_val >= 0:
        raise NotNegativeError(s_val)
    p = transport_point(f, xs)
    value = evaluate(f, p)
    if value >= 0:  # pragma: no cover - excluded by the scaling constant
        raise ArithmeticError(f"transported point is not a witness: f = {value}")
    return Witness(p, value)


def shift_polynomial(f: MvPoly, c: Sequence[int]) -> MvPoly:
    """``f(X + c)``."""
    n = f.nvars
    return f.compose([MvPoly.var(n, i) + c[i] for i in range(n)])


def shift_to_positive_constant(f: MvPoly, seed: int, k: int = 4):
    """Translate so that the constant term becomes positive.

    Draws integer points ``c`` uniformly from ``{1, ..., k*d}**n`` until
    ``f(c) != 0``. Returns ``(f(X + c), c)`` when ``f(c) > 0`` and a
    :class:`Witness` at ``c`` when ``f(c) < 0``.
    """
    if f.is_zero():
        raise ValueError("cannot shift the zero polynomial")
    if k < 2:
        raise ValueError("k must be at least 2")
    n = f.nvars
    top = k * max(f.degree, 1)
    rng = SplitMix64(seed, STREAM_SHIFT)
    while True:
        c = tuple(rng.randint(1, top) for _ in range(n))
        value = evaluate(f, c)
        if value > 0:
            return shift_polynomial(f, c), c
        if value < 0:
            return Witness(tuple(mpq(v) for v in c), value)

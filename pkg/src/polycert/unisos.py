"""Univariate nonnegativity and weighted sums of squares over the rationals.

Nonnegativity is decided exactly: a squarefree decomposition separates the
odd-multiplicity part, whose real roots are counted with a Sturm sequence.

A nonnegative ``r`` is written as ``c * s**2 * q`` with ``q`` monic and
strictly positive. ``q`` is then decomposed by perturbing and rounding.
The numeric step finds ``h = u + i*v`` with ``q - eps*Theta ~ lc*(u**2 + v**2)``,
where ``Theta = sum_i T**(2i)``. The coefficients of ``u`` and ``v`` are
rounded to dyadic rationals. The exact leftover ``q - lc*(u**2 + v**2)``
is close to ``eps*Theta`` and is absorbed into monomial squares. Only the
final identity matters, and it is exact.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import gmpy2
import mpmath
from gmpy2 import mpq, mpz

from .polycore import UvPoly, uv_gcd
from .rational import ONE, ZERO

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightedSos:
    """``sum_j weights[j] * squares[j]**2`` with positive rational weights."""

    weights: tuple
    squares: tuple

    def expand(self) -> UvPoly:
        acc = UvPoly()
        for w, s in zip(self.weights, self.squares):
            acc = acc + (s * s).scale(w)
        return acc

    def __len__(self) -> int:
        return len(self.weights)


class PrecisionCapReached(ArithmeticError):
    """The numeric stage did not converge below the precision cap; retry with ``cap`` doubled."""

    def __init__(self, cap: int) -> None:
        super().__init__(f"no exact absorption up to {cap} bits")
        self.cap = cap


# ---------------------------------------------------------------------------
# Sturm sequences on primitive integer polynomials


def _int_coeffs(p: UvPoly) -> list:
    return [mpz(c) for c in p.integer_coefficients()]


def _content_free(a: list) -> list:
    g = mpz(0)
    for c in a:
        g = gmpy2.gcd(g, c)
        if g == 1:
            return a
    return [c // g for c in a] if g > 1 else a


def _pseudo_remainder(a: list, b: list) -> list:
    """Positive multiple of ``a mod b`` for integer coefficient lists (lowest first)."""
    r = list(a)
    lb = len(b) - 1
    m = abs(b[-1])
    s = 1 if b[-1] > 0 else -1
    for k in range(len(r) - 1, lb - 1, -1):
        c = r[k]
        if m != 1:
            r = [x * m for x in r]
        if c:
            cs = c * s
            off = k - lb
            for j in range(lb + 1):
                r[off + j] -= cs * b[j]
        r.pop()
    while r and not r[-1]:
        r.pop()
    return r


def _derivative_int(a: list) -> list:
    return [a[i] * i for i in range(1, len(a))]


def sturm_sequence(p: UvPoly) -> list:
    """Sturm chain of ``p`` as integer coefficient lists (each a positive multiple of the classical one)."""
    a = _int_coeffs(p)
    if not a:
        return []
    seq = [a]
    b = _content_free(_derivative_int(a))
    while b:
        seq.append(b)
        r = _pseudo_remainder(seq[-2], seq[-1])
        b = _content_free([-c for c in r]) if r else []
    return seq


def _sign_at(a: list, x: mpq | None, direction: int = 1) -> int:
    """Sign of the integer polynomial ``a`` at ``x`` (or at ``direction * infinity`` when ``x`` is None)."""
    if not a:
        return 0
    if x is None:
        deg = len(a) - 1
        s = 1 if a[-1] > 0 else -1
        return s if (direction > 0 or deg % 2 == 0) else -s
    num, den = mpz(x.numerator), mpz(x.denominator)
    # Homogeneous Horner: sum a_i num^i den^(deg - i) has the sign of a(x).
    acc = mpz(0)
    dpow = mpz(1)
    for c in reversed(a):
        acc = acc * num + c * dpow
        dpow *= den
    return (acc > 0) - (acc < 0)


def _variations(seq: list, x: mpq | None, direction: int = 1) -> int:
    signs = [s for s in (_sign_at(a, x, direction) for a in seq) if s]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_real_roots(p: UvPoly, lo: mpq | None = None, hi: mpq | None = None, seq: list | None = None) -> int:
    """Number of distinct real roots in ``(lo, hi]``; ``None`` means infinite."""
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    if seq is None:
        seq = sturm_sequence(p)
    return _variations(seq, lo, -1) - _variations(seq, hi, 1)


def tarski_sequence(p: UvPoly, q: UvPoly) -> list:
    """Signed remainder sequence of ``p`` and ``p' * q`` as integer lists (positive multiples)."""
    a = _int_coeffs(p)
    if not a:
        return []
    seq = [a]
    b = _content_free(_int_coeffs(p.derivative() * (q % p)))
    while b:
        seq.append(b)
        r = _pseudo_remainder(seq[-2], seq[-1])
        b = _content_free([-c for c in r]) if r else []
    return seq


def tarski_query(p: UvPoly, q: UvPoly, lo: mpq | None = None, hi: mpq | None = None,
                 seq: list | None = None) -> int:
    """Sum of the signs of ``q`` over the distinct real roots of ``p`` in ``(lo, hi]``."""
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    if seq is None:
        seq = tarski_sequence(p, q)
    return _variations(seq, lo, -1) - _variations(seq, hi, 1)


def root_bound(p: UvPoly) -> mpq:
    """Power of two strictly above every root magnitude (Cauchy bound)."""
    lc = abs(p.lc)
    m = max((abs(c) for c in p.coeffs[:-1]), default=ZERO)
    bound = 1 + m / lc
    k = 1
    while k <= bound:
        k *= 2
    return mpq(k)


def isolate_real_roots(p: UvPoly) -> list:
    """Isolating data for the real roots of a squarefree ``p``, ascending.

    Each item is ``(a, b)``: either ``a == b`` is an exact root, or
    ``p(a) * p(b) < 0`` and the interval holds exactly one root.
    """
    if p.degree <= 0:
        return []
    seq = sturm_sequence(p)
    a_int = seq[0]
    B = root_bound(p)
    out = []
    stack = [(-B, B)]
    while stack:
        a, b = stack.pop()
        n = count_real_roots(p, a, b, seq)
        if n == 0:
            continue
        if n == 1:
            if _sign_at(a_int, b) == 0:
                out.append((b, b))
                continue
            if _sign_at(a_int, a) != 0:
                out.append((a, b))
                continue
            # The left end is a neighbouring root: keep halving until it drops out.
        mid = (a + b) / 2
        stack.append((mid, b))
        stack.append((a, mid))
    out.sort()
    return out


def refine_root(p: UvPoly, a: mpq, b: mpq, ints: list | None = None) -> tuple:
    """Halve an isolating interval with a sign change (exact hits collapse it)."""
    if a == b:
        return a, b
    if ints is None:
        ints = _int_coeffs(p)
    mid = (a + b) / 2
    sm = _sign_at(ints, mid)
    if sm == 0:
        return mid, mid
    sa = _sign_at(ints, a)
    return (mid, b) if sm == sa else (a, mid)


# ---------------------------------------------------------------------------
# Squarefree decomposition and nonnegativity


def squarefree_decomposition(p: UvPoly) -> tuple:
    """Yun's algorithm: ``p = lc * prod(f_i ** i)`` with monic squarefree, pairwise coprime ``f_i``.

    Returns ``(lc, [(f_1, 1), (f_2, 2), ...])`` omitting trivial factors.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no squarefree decomposition")
    lc = p.lc
    f = p.monic()
    if f.degree == 0:
        return lc, []
    df = f.derivative()
    a0 = uv_gcd(f, df)
    b = f.exact_div(a0)
    c = df.exact_div(a0)
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = uv_gcd(b, d)
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        if a.degree > 0:
            out.append((a, i))
        i += 1
    return lc, out


def is_nonneg_univariate(r: UvPoly) -> bool:
    if r.is_zero():
        return True
    if r.degree == 0:
        return r.lc > 0
    if r.degree % 2 or r.lc < 0:
        return False
    _, factors = squarefree_decomposition(r)
    return all(count_real_roots(f) == 0 for f, mult in factors if mult % 2)


def is_strictly_positive(r: UvPoly) -> bool:
    if r.is_zero():
        return False
    if r.degree % 2 or r.lc <= 0:
        return False
    return r.degree == 0 or count_real_roots(r) == 0


# ---------------------------------------------------------------------------
# Weighted sums of squares


def _monomial(k: int) -> UvPoly:
    return UvPoly((ZERO,) * k + (ONE,), _trusted=True)


def _diagonal_sos(r: UvPoly) -> WeightedSos | None:
    """Monomial squares when only even powers with nonnegative coefficients occur."""
    if any(c for c in r.coeffs[1::2]) or any(c < 0 for c in r.coeffs[0::2]):
        return None
    items = [(c, _monomial(k // 2)) for k, c in enumerate(r.coeffs) if k % 2 == 0 and c]
    items.reverse()
    return WeightedSos(tuple(w for w, _ in items), tuple(s for _, s in items))


def _theta(m: int) -> UvPoly:
    return UvPoly([ONE if k % 2 == 0 else ZERO for k in range(2 * m + 1)])


def _to_mpf(c: mpq):
    return mpmath.mpf(int(c.numerator)) / int(c.denominator)


def _round_dyadic(x, bits: int) -> mpq:
    return mpq(int(mpmath.nint(x * mpmath.mpf(2) ** bits)), 1 << bits)


def _upper_half_factor(p: UvPoly, prec: int):
    """Monic complex factor collecting the roots of ``p`` in the upper half plane."""
    m = p.degree // 2
    with mpmath.workprec(prec):
        coeffs = [_to_mpf(c) for c in reversed(p.coeffs)]
        try:
            roots = mpmath.polyroots(coeffs, maxsteps=max(100, 4 * p.degree), extraprec=prec)
        except mpmath.libmp.NoConvergence:
            return None
        upper = [z for z in roots if mpmath.im(z) > 0]
        if len(upper) != m:
            return None
        h = [mpmath.mpc(1)]
        for z in upper:
            nxt = [mpmath.mpc(0)] * (len(h) + 1)
            for k, c in enumerate(h):
                nxt[k + 1] += c
                nxt[k] -= z * c
            h = nxt
        return h


def _absorb(e: UvPoly, m: int):
    """Write ``e`` as nonnegative weights on ``T**(2i)`` plus adjacent-square corrections.

    Returns a list of ``(weight, square)`` pairs or ``None`` when some
    monomial weight would become negative.
    """
    diag = [e[2 * i] for i in range(m + 1)]
    extra = []
    for i in range(m):
        c = e[2 * i + 1]
        if c:
            half = abs(c) / 2
            sq = _monomial(i + 1) + (_monomial(i) if c > 0 else -_monomial(i))
            extra.append((half, sq))
            diag[i] -= half
            diag[i + 1] -= half
    if any(w < 0 for w in diag):
        return None
    items = [(diag[i], _monomial(i)) for i in range(m, -1, -1) if diag[i]]
    return items + extra


def _positive_sos(q: UvPoly, cap: int) -> list:
    """Weighted squares for a monic strictly positive ``q`` of even degree."""
    m = q.degree // 2
    theta = _theta(m)
    eps = ONE
    while not is_strictly_positive(q - theta.scale(eps)):
        eps /= 2
    p = q - theta.scale(eps)
    lcp = p.lc
    prec = 64
    while prec <= cap:
        h = _upper_half_factor(p, prec)
        if h is not None:
            with mpmath.workprec(prec):
                u = UvPoly([_round_dyadic(mpmath.re(c), prec) for c in h])
                v = UvPoly([_round_dyadic(mpmath.im(c), prec) for c in h])
            e = q - (u * u + v * v).scale(lcp)
            absorbed = _absorb(e, m)
            if absorbed is not None:
                items = [(lcp, u)]
                if not v.is_zero():
                    items.append((lcp, v))
                return items + absorbed
        prec *= 2
    raise PrecisionCapReached(cap)


def weighted_sos_decompose(r: UvPoly, cap: int = 1 << 14, retries: int = 3) -> WeightedSos:
    """Exact ``r = sum w_j s_j**2`` with positive rational ``w_j``."""
    r = r if isinstance(r, UvPoly) else UvPoly(r)
    if r.is_zero() or not is_nonneg_univariate(r):
        raise ValueError("weighted_sos_decompose needs a nonzero nonnegative polynomial")
    if r.degree == 0:
        return WeightedSos((r.lc,), (UvPoly((ONE,), _trusted=True),))
    lc, factors = squarefree_decomposition(r)
    s = UvPoly((ONE,), _trusted=True)
    q = UvPoly((ONE,), _trusted=True)
    for f, mult in factors:
        s = s * f ** (mult // 2)
        if mult % 2:
            q = q * f
    if q.degree == 0:
        return WeightedSos((lc,), (s,))
    diag = _diagonal_sos(r)
    if diag is not None:
        return diag
    for attempt in range(retries + 1):
        try:
            items = _positive_sos(q, cap << attempt)
            break
        except PrecisionCapReached:
            if attempt == retries:
                raise
    weights = tuple(lc * w for w, _ in items)
    squares = tuple(s * sq for _, sq in items)
    if len(squares) > r.degree + 3:
        log.debug("decomposition of a degree-%d polynomial uses %d squares", r.degree, len(squares))
    return WeightedSos(weights, squares)

"""Explicit Gram matrices for ``f + eps * (1 + |X|**2)**t``.

In homogeneous coordinates ``X0, X1..Xn`` the perturbed polynomial is

    X0**(2(t-d)) * f^h + eps * (X0**2 + |X|**2)**t

and both summands get an explicit Gram matrix over the degree-``t``
monomials. ``A_t`` is the diagonal of multinomial coefficients. ``F_t``
puts ``f(0)`` and half the gradient at the origin in the first row and
column, and splits every other coefficient between two monomials of
degree ``d``. Positive semidefiniteness of ``F_t + eps * A_t`` is decided
exactly with a pivoted LDL^T factorisation. A failure comes with a
rational vector ``v`` such that ``v^T G v < 0``.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Sequence

from gmpy2 import mpq

from . import exactla
from .polycore import MvPoly, gradient, homogenize, norms, serialize_poly
from .rational import ONE, ZERO, Q, RationalLike, fmt


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric matrix over the degree-``t`` monomials in ``nvars_h`` variables."""

    t: int
    nvars_h: int
    index: tuple  # tuple[ExpVec, ...]
    entries: tuple  # tuple of row tuples

    @property
    def size(self) -> int:
        return len(self.index)

    def rows(self) -> list:
        return [list(r) for r in self.entries]

    def expand(self) -> MvPoly:
        """``m^T G m`` as a homogeneous polynomial of degree ``2t``."""
        out: dict = {}
        for i, a in enumerate(self.index):
            row = self.entries[i]
            for j, b in enumerate(self.index):
                c = row[j]
                if c:
                    e = tuple(x + y for x, y in zip(a, b))
                    out[e] = out.get(e, ZERO) + c
        return MvPoly(self.nvars_h, out)

    def __add__(self, other: "GramMatrix") -> "GramMatrix":
        if self.index != other.index:
            raise ValueError("Gram matrices over different monomials")
        return GramMatrix(self.t, self.nvars_h, self.index,
                          tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def scale(self, c: RationalLike) -> "GramMatrix":
        c = Q(c)
        return GramMatrix(self.t, self.nvars_h, self.index, tuple(tuple(a * c for a in r) for r in self.entries))


@dataclass(frozen=True)
class PsdReport:
    psd: bool
    pivots: tuple
    failure_vector: tuple | None = None


def monomial_index(nvars_h: int, t: int) -> tuple:
    """Degree-``t`` exponent vectors, descending lex (``X0**t`` first, then ``X0**(t-1) * Xi``)."""
    out = []
    for combo in combinations_with_replacement(range(nvars_h), t):
        e = [0] * nvars_h
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return tuple(sorted(out, reverse=True))


def _multinomial(e: Sequence[int]) -> int:
    out = math.factorial(sum(e))
    for k in e:
        out //= math.factorial(k)
    return out


def build_At(n: int, t: int) -> GramMatrix:
    """Diagonal Gram matrix of ``(X0**2 + X1**2 + ... + Xn**2)**t``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    index = monomial_index(n + 1, t)
    size = len(index)
    rows = []
    for i, e in enumerate(index):
        row = [ZERO] * size
        row[i] = mpq(_multinomial(e))
        rows.append(tuple(row))
    return GramMatrix(t, n + 1, index, tuple(rows))


def split_exponent(gamma: Sequence[int], d: int) -> tuple:
    """Deterministic split ``gamma = alpha + beta`` with ``|alpha| = |beta| = d``.

    Start from ``floor(gamma / 2)`` and give the odd coordinates' spare unit to
    ``alpha``: first the non-``X0`` coordinates in ascending index order, then
    ``X0``, until ``|alpha| = d``. Neither part equals ``d * e0`` unless
    ``gamma`` is ``2d * e0`` or ``(2d - 1) * e0 + ei``.
    """
    alpha = [g // 2 for g in gamma]
    need = d - sum(alpha)
    order = [i for i in range(1, len(gamma)) if gamma[i] % 2] + ([0] if gamma[0] % 2 else [])
    for i in order[:need]:
        alpha[i] += 1
    beta = [g - a for g, a in zip(gamma, alpha)]
    return tuple(alpha), tuple(beta)


def build_Ft(f: MvPoly, t: int) -> GramMatrix:
    """Gram matrix of ``X0**(2(t-d)) * f^h`` with ``deg f = 2d``."""
    n = f.nvars
    deg = max(f.degree, 0)
    if deg % 2:
        raise ValueError("build_Ft needs a polynomial of even degree")
    d = deg // 2
    if t < d:
        raise ValueError(f"t = {t} is below half the degree {d}")
    index = monomial_index(n + 1, t)
    pos = {e: i for i, e in enumerate(index)}
    size = len(index)
    M = [[ZERO] * size for _ in range(size)]
    pad = (t - d,) + (0,) * n

    def place(a, b, c):
        i = pos[tuple(x + y for x, y in zip(a, pad))]
        j = pos[tuple(x + y for x, y in zip(b, pad))]
        M[i][j] += c

    fh = homogenize(f, 2 * d) if not f.is_zero() else MvPoly.zero(n + 1)
    top = (d,) + (0,) * n
    for gamma, c in fh.terms.items():
        if gamma[0] == 2 * d:
            place(top, top, c)
            continue
        if gamma[0] == 2 * d - 1:
            i = next(k for k in range(1, n + 1) if gamma[k])
            other = (d - 1,) + tuple(1 if k == i else 0 for k in range(1, n + 1))
            place(top, other, c / 2)
            place(other, top, c / 2)
            continue
        alpha, beta = split_exponent(gamma, d)
        if alpha == beta:
            place(alpha, alpha, c)
        else:
            place(alpha, beta, c / 2)
            place(beta, alpha, c / 2)
    return GramMatrix(t, n + 1, index, tuple(tuple(r) for r in M))


def sos_pert_threshold(f: MvPoly, epsilon: RationalLike) -> int:
    """``max(d, ceil((|f|_1 + |grad f(0)|^2 / (f(0) + eps)) / eps))``."""
    eps = Q(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    f0 = f.constant_term
    if f0 < 0:
        raise ValueError("the threshold needs f(0) >= 0")
    d = max(f.degree, 0) // 2
    _, _, one = norms(f)
    g0 = sum((p.constant_term**2 for p in gradient(f)), ZERO)
    value = (one + g0 / (f0 + eps)) / eps
    return int(max(d, math.ceil(value)))


def psd_check(G: GramMatrix | Sequence[Sequence[RationalLike]]) -> PsdReport:
    """Exact PSD test by LDL^T with maximal-diagonal pivoting."""
    rows = G.rows() if isinstance(G, GramMatrix) else [[Q(x) for x in r] for r in G]
    n = len(rows)
    if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(i)):
        raise ValueError("matrix is not symmetric")
    S = [list(r) for r in rows]  # running Schur complement on the remaining indices
    remaining = list(range(n))
    pivots = []
    eliminated = []  # (pivot index, pivot value, column of multipliers over original indices)

    def lift(y: dict) -> list:
        """Extend a vector on the remaining indices to one on all indices with ``x^T G x = y^T S y``."""
        x = [ZERO] * n
        for k, v in y.items():
            x[k] = v
        for p, piv, col in reversed(eliminated):
            acc = ZERO
            for k, m in col.items():
                if x[k]:
                    acc += m * x[k]
            x[p] = -acc
        return x

    while remaining:
        best = max(remaining, key=lambda k: (S[k][k], -k))
        piv = S[best][best]
        if piv <= 0:
            if piv < 0:
                v = lift({best: ONE})
                return PsdReport(False, tuple(pivots), tuple(v))
            for a in remaining:
                for b in remaining:
                    if a != b and S[a][b]:
                        sgn = ONE if S[a][b] > 0 else -ONE
                        v = lift({a: ONE, b: -sgn})
                        return PsdReport(False, tuple(pivots), tuple(v))
            pivots.extend([ZERO] * len(remaining))
            return PsdReport(True, tuple(pivots))
        pivots.append(piv)
        remaining.remove(best)
        col = {k: S[k][best] / piv for k in remaining if S[k][best]}
        eliminated.append((best, piv, col))
        for a, ma in col.items():
            rowa = S[a]
            rowb = S[best]
            for b in remaining:
                if rowb[b]:
                    rowa[b] -= ma * rowb[b]
    return PsdReport(True, tuple(pivots))


def lasserre_theta(n: int, t: int) -> MvPoly:
    """``sum_{k=0..t} sum_i Xi**(2k) / k!``."""
    out: dict = {}
    for k in range(t + 1):
        c = mpq(1, math.factorial(k))
        for i in range(n):
            e = tuple(2 * k if j == i else 0 for j in range(n))
            out[e] = out.get(e, ZERO) + c
    return MvPoly(n, out)


def theta_normalizers(n: int, t: int) -> tuple:
    """``(s_t, |h_t|_1)`` with ``s_t = sum_{k<=t} 1/k!`` and ``h_t = (1 + |X|^2)**t``."""
    s_t = sum((mpq(1, math.factorial(k)) for k in range(t + 1)), ZERO)
    return s_t, mpq((n + 1) ** t)


def perturbation_power(n: int, t: int) -> MvPoly:
    """``(1 + X1**2 + ... + Xn**2)**t``."""
    base = MvPoly.const(n, 1)
    for i in range(n):
        base = base + MvPoly.var(n, i) ** 2
    return base**t


def perturbed_homogeneous(f: MvPoly, epsilon: RationalLike, t: int) -> MvPoly:
    """``X0**(2(t-d)) * f^h + eps * (X0**2 + |X|**2)**t``."""
    n = f.nvars
    d = max(f.degree, 0) // 2
    fh = homogenize(f, 2 * d).mul_term((2 * (t - d),) + (0,) * n, ONE)
    sq = MvPoly.zero(n + 1)
    for i in range(n + 1):
        sq = sq + MvPoly.var(n + 1, i) ** 2
    return fh + (sq**t).scale(Q(epsilon))


@dataclass(frozen=True)
class SosPertResult:
    gram: GramMatrix
    report: PsdReport
    epsilon: mpq
    schur_slack: mpq  # t*eps - |F_d|_1 - |v|^2 / (f0 + eps), reported only


def _schur_slack(f: MvPoly, epsilon: mpq, t: int) -> mpq:
    d = max(f.degree, 0) // 2
    Fd = build_Ft(f, d)
    tail = [r[1:] for r in Fd.entries[1:]]
    col_sums = [sum((abs(r[j]) for r in tail), ZERO) for j in range(len(tail))] if tail else [ZERO]
    v2 = sum((p.constant_term**2 for p in gradient(f)), ZERO) / 4
    return t * epsilon - max(col_sums) - v2 / (f.constant_term + epsilon)


def certify_sos_perturbed(f: MvPoly, epsilon: RationalLike, t: int) -> SosPertResult:
    eps = Q(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    G = build_Ft(f, t) + build_At(f.nvars, t).scale(eps)
    target = perturbed_homogeneous(f, eps, t)
    if G.expand() != target:
        raise ArithmeticError("Gram matrix does not re-expand to the perturbed polynomial")
    report = psd_check(G)
    if not report.psd:
        v = report.failure_vector
        if not exactla.quadratic_form(G.rows(), list(v)) < 0:
            raise ArithmeticError("failure vector does not witness indefiniteness")
    return SosPertResult(G, report, eps, _schur_slack(f, eps, t))


def sos_pert_report(f: MvPoly, result: SosPertResult) -> dict:
    """JSON-ready summary with a checksum of the re-expanded polynomial."""
    expanded = result.gram.expand()
    digest = hashlib.sha256(serialize_poly(expanded).encode()).hexdigest()
    rep = result.report
    return {
        "t": int(result.gram.t),
        "epsilon": fmt(result.epsilon),
        "dimension": result.gram.size,
        "psd": rep.psd,
        "pivots": [fmt(p) for p in rep.pivots],
        "failure_vector": None if rep.failure_vector is None else [fmt(x) for x in rep.failure_vector],
        "schur_slack": fmt(result.schur_slack),
        "checksum": digest,
    }


def sos_pert_report_json(f: MvPoly, result: SosPertResult) -> str:
    return json.dumps(sos_pert_report(f, result), indent=1) + "\n"

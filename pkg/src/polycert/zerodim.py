"""Groebner bases, quotient algebras and rational univariate representations.

Everything is over the rationals with graded-lex order. The solver is
aimed at gradient ideals of perturbed polynomials: zero-dimensional, with
a quotient of moderate dimension. Radical ideals get a RUR
``(R0, R1..Rn, L)``; for every root ``t`` of ``R0`` the point
``(R1(t), ..., Rn(t)) / R0'(t)`` is a solution, and these are all of them.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from . import exactla
from .polycore import ExpVec, MvPoly, UvPoly, divides, grlex_key, top_part, uv_gcd
from .rational import ONE, ZERO
from .rng import STREAM_SEPARATOR, SplitMix64


# ---------------------------------------------------------------------------
# Groebner bases


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic Groebner basis under graded-lex order."""

    nvars: int
    generators: tuple  # tuple[MvPoly, ...], sorted by leading monomial
    unit: bool = False

    @property
    def leading_monomials(self) -> tuple:
        return tuple(g.leading_monomial() for g in self.generators)


class PositiveDimensionalError(ValueError):
    """The ideal has infinitely many solutions; ``variable`` has no pure-power leading monomial."""

    def __init__(self, variable: int) -> None:
        super().__init__(f"no pure power of X{variable + 1} among the leading monomials")
        self.variable = variable


@dataclass(frozen=True)
class NotRadicalSignal:
    """The ideal is not radical, or no separating form was found."""

    reason: str


def _neg_key(e: ExpVec) -> tuple:
    return (-sum(e), tuple(-x for x in e))


class _Poly:
    """Working representation for Buchberger: terms dict plus cached leading data."""

    __slots__ = ("terms", "lm", "lc")

    def __init__(self, terms: dict) -> None:
        self.terms = terms
        self.lm = max(terms, key=grlex_key)
        self.lc = terms[self.lm]

    def monic(self) -> "_Poly":
        inv = 1 / self.lc
        return _Poly({e: c * inv for e, c in self.terms.items()})


def _reduce(terms: dict, basis: Sequence[_Poly], full: bool = True) -> dict:
    """Normal form of ``terms`` modulo ``basis`` (top-reduction only if ``full`` is false)."""
    p = dict(terms)
    result: dict = {}
    heap = [(_neg_key(e), e) for e in p]
    heapq.heapify(heap)
    while heap:
        _, e = heapq.heappop(heap)
        c = p.pop(e, None)
        if c is None:
            continue
        g = next((g for g in basis if divides(g.lm, e)), None)
        if g is None:
            result[e] = c
            if not full:
                result.update(p)
                return result
            continue
        shift = tuple(a - b for a, b in zip(e, g.lm))
        factor = c / g.lc
        for ge, gc in g.terms.items():
            if ge == g.lm:
                continue
            ne = tuple(a + b for a, b in zip(ge, shift))
            v = p.get(ne)
            if v is None:
                p[ne] = -factor * gc
                heapq.heappush(heap, (_neg_key(ne), ne))
            else:
                v = v - factor * gc
                if v:
                    p[ne] = v
                else:
                    del p[ne]
    return result


def _lcm(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: ExpVec, b: ExpVec) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _spoly(f: _Poly, g: _Poly) -> dict:
    lcm = _lcm(f.lm, g.lm)
    sf = tuple(a - b for a, b in zip(lcm, f.lm))
    sg = tuple(a - b for a, b in zip(lcm, g.lm))
    out: dict = {}
    for e, c in f.terms.items():
        ne = tuple(a + b for a, b in zip(e, sf))
        out[ne] = out.get(ne, ZERO) + c / f.lc
    for e, c in g.terms.items():
        ne = tuple(a + b for a, b in zip(e, sg))
        v = out.get(ne, ZERO) - c / g.lc
        if v:
            out[ne] = v
        else:
            out.pop(ne, None)
    return {e: c for e, c in out.items() if c}


def _interreduce(polys: list[_Poly]) -> list[_Poly]:
    """Minimise and fully reduce a Groebner basis; result sorted by leading monomial."""
    polys = sorted(polys, key=lambda p: grlex_key(p.lm))
    minimal: list[_Poly] = []
    for p in polys:
        if not any(divides(q.lm, p.lm) for q in minimal):
            minimal.append(p)
    out = []
    for i, p in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        tail = {e: c for e, c in p.terms.items() if e != p.lm}
        reduced = _reduce(tail, others)
        reduced[p.lm] = p.lc
        out.append(_Poly(reduced).monic())
    return sorted(out, key=lambda p: grlex_key(p.lm))


def _to_basis(nvars: int, polys: list[_Poly]) -> GroebnerBasis:
    return GroebnerBasis(nvars, tuple(MvPoly(nvars, p.terms, _trusted=True) for p in polys))


def groebner_basis(gens: Sequence[MvPoly]) -> GroebnerBasis:
    """Reduced Groebner basis (Buchberger with the normal selection strategy)."""
    if not gens:
        raise ValueError("need at least one generator")
    nvars = gens[0].nvars
    if any(g.nvars != nvars for g in gens):
        raise ValueError("generators live in different rings")
    polys = [_Poly(dict(g.terms)).monic() for g in gens if not g.is_zero()]
    if not polys:
        return GroebnerBasis(nvars, ())
    if any(sum(p.lm) == 0 for p in polys):
        return GroebnerBasis(nvars, (MvPoly.const(nvars, 1),), unit=True)
    # Pairwise coprime leading monomials: already a Groebner basis.
    if all(_coprime(a.lm, b.lm) for a, b in itertools.combinations(polys, 2)):
        return _to_basis(nvars, _interreduce(polys))

    basis: list[_Poly] = []
    pairs: set[tuple[int, int]] = set()
    for p in sorted(polys, key=lambda p: grlex_key(p.lm)):
        reduced = _reduce(p.terms, basis)
        if not reduced:
            continue
        q = _Poly(reduced).monic()
        if sum(q.lm) == 0:
            return GroebnerBasis(nvars, (MvPoly.const(nvars, 1),), unit=True)
        basis.append(q)
        k = len(basis) - 1
        pairs.update((i, k) for i in range(k))
    while pairs:
        i, j = min(pairs, key=lambda ij: (grlex_key(_lcm(basis[ij[0]].lm, basis[ij[1]].lm)), ij))
        pairs.discard((i, j))
        fi, fj = basis[i], basis[j]
        if _coprime(fi.lm, fj.lm):
            continue
        lcm = _lcm(fi.lm, fj.lm)
        chain = False
        for k, fk in enumerate(basis):
            if k in (i, j) or not divides(fk.lm, lcm):
                continue
            if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                chain = True
                break
        if chain:
            continue
        h = _reduce(_spoly(fi, fj), basis)
        if not h:
            continue
        q = _Poly(h).monic()
        if sum(q.lm) == 0:
            return GroebnerBasis(nvars, (MvPoly.const(nvars, 1),), unit=True)
        basis.append(q)
        k = len(basis) - 1
        pairs.update((i2, k) for i2 in range(k))
    return _to_basis(nvars, _interreduce(basis))


def _working(gb: GroebnerBasis) -> list[_Poly]:
    return [_Poly(dict(g.terms)) for g in gb.generators]


def reduce_poly(f: MvPoly, gb: GroebnerBasis) -> MvPoly:
    """Normal form of ``f`` (remainder of full division by the basis)."""
    if f.is_zero():
        return f
    return MvPoly(f.nvars, _reduce(f.terms, _working(gb)), _trusted=True)


def s_polynomial(f: MvPoly, g: MvPoly) -> MvPoly:
    return MvPoly(f.nvars, _spoly(_Poly(dict(f.terms)), _Poly(dict(g.terms))), _trusted=True)


def is_groebner_basis(polys: Sequence[MvPoly]) -> bool:
    """Every S-polynomial reduces to zero (no criteria used)."""
    work = [_Poly(dict(p.terms)) for p in polys if not p.is_zero()]
    for a, b in itertools.combinations(work, 2):
        if _reduce(_spoly(a, b), work):
            return False
    return True


def is_zero_dim_no_infinity(gens: Sequence[MvPoly]) -> bool:
    """True when the top-degree parts of ``gens`` have only the trivial common zero."""
    tops = [top_part(g) for g in gens if not g.is_zero()]
    if not tops:
        return False
    gb = groebner_basis(tops)
    if gb.unit:
        return True
    n = tops[0].nvars
    found = [False] * n
    for e in gb.leading_monomials:
        nz = [i for i, k in enumerate(e) if k]
        if len(nz) == 1:
            found[nz[0]] = True
    return all(found)


# ---------------------------------------------------------------------------
# Quotient algebra


@dataclass(frozen=True)
class QuotientRing:
    """Standard monomials, ascending graded-lex (so the monomial ``1`` comes first)."""

    basis_monomials: tuple

    @property
    def dimension(self) -> int:
        return len(self.basis_monomials)


def quotient_basis(gb: GroebnerBasis) -> QuotientRing:
    n = gb.nvars
    if gb.unit:
        return QuotientRing(())
    lms = gb.leading_monomials
    bounds = []
    for i in range(n):
        pure = [e[i] for e in lms if e[i] and all(k == 0 for j, k in enumerate(e) if j != i)]
        if not pure:
            raise PositiveDimensionalError(i)
        bounds.append(min(pure))
    mons = [e for e in itertools.product(*(range(b) for b in bounds)) if not any(divides(m, e) for m in lms)]
    return QuotientRing(tuple(sorted(mons, key=grlex_key)))


class QuotientAlgebra:
    """Normal forms in ``Q[X]/I`` as coordinate vectors over the standard monomials."""

    def __init__(self, gb: GroebnerBasis, q: QuotientRing | None = None) -> None:
        self.gb = gb
        self.q = q if q is not None else quotient_basis(gb)
        self.index = {e: i for i, e in enumerate(self.q.basis_monomials)}
        self.n = gb.nvars
        self._memo: dict[ExpVec, dict[int, mpq]] = {}
        self._lead = [(g.leading_monomial(), g) for g in gb.generators]

    @property
    def dimension(self) -> int:
        return self.q.dimension

    def nf_monomial(self, e: ExpVec) -> dict[int, mpq]:
        idx = self.index.get(e)
        if idx is not None:
            return {idx: ONE}
        cached = self._memo.get(e)
        if cached is not None:
            return cached
        lm, g = next((lm, g) for lm, g in self._lead if divides(lm, e))
        if lm == e:
            result = {self.index[m]: -c for m, c in g.terms.items() if m != lm}
        else:
            i = next(i for i in range(self.n) if e[i] > lm[i])
            sub = e[:i] + (e[i] - 1,) + e[i + 1:]
            result = {}
            for j, c in self.nf_monomial(sub).items():
                b = self.q.basis_monomials[j]
                up = b[:i] + (b[i] + 1,) + b[i + 1:]
                for k, v in self.nf_monomial(up).items():
                    result[k] = result.get(k, ZERO) + c * v
            result = {k: v for k, v in result.items() if v}
        self._memo[e] = result
        return result

    def nf_vector(self, f: MvPoly, shift: ExpVec | None = None) -> list[mpq]:
        """Coordinates of ``NF(f * X^shift)``."""
        out = [ZERO] * self.dimension
        for e, c in f.terms.items():
            if shift is not None:
                e = tuple(a + b for a, b in zip(e, shift))
            for k, v in self.nf_monomial(e).items():
                out[k] += c * v
        return out

    def vector_to_poly(self, v: Sequence[mpq]) -> MvPoly:
        return MvPoly(self.n, {self.q.basis_monomials[i]: c for i, c in enumerate(v) if c}, _trusted=True)

    def normal_form(self, f: MvPoly) -> MvPoly:
        return self.vector_to_poly(self.nf_vector(f))

    def multiplication_matrix(self, g: MvPoly) -> exactla.Matrix:
        """Matrix of multiplication by ``g``; column ``j`` is ``NF(g * b_j)``."""
        dim = self.dimension
        M = exactla.zeros(dim)
        for j, b in enumerate(self.q.basis_monomials):
            col = self.nf_vector(g, b)
            for i in range(dim):
                M[i][j] = col[i]
        return M


def multiplication_matrix(gb: GroebnerBasis, q: QuotientRing, g: MvPoly) -> exactla.Matrix:
    return QuotientAlgebra(gb, q).multiplication_matrix(g)


# ---------------------------------------------------------------------------
# Rational univariate representation


@dataclass(frozen=True)
class Rur:
    R0: UvPoly
    R: tuple  # tuple[UvPoly, ...]
    L: tuple  # tuple[mpq, ...]
    quotient_dim: int

    def point_at(self, t: mpq) -> tuple:
        """``(R1(t), ..., Rn(t)) / R0'(t)`` at a rational ``t``."""
        d = self.R0.derivative()(t)
        return tuple(Ri(t) / d for Ri in self.R)


def is_squarefree(p: UvPoly) -> bool:
    if p.is_zero():
        return False
    return uv_gcd(p, p.derivative()).degree == 0


def _unit_vector(dim: int) -> list[mpq]:
    v = [ZERO] * dim
    if dim:
        v[0] = ONE
    return v


def eliminant(alg: QuotientAlgebra, M: exactla.Matrix) -> UvPoly:
    """Minimal polynomial of a multiplication operator (annihilator of ``1``)."""
    kry = exactla.KrylovEchelon(lambda v: exactla.matvec(M, v), _unit_vector(alg.dimension))
    return kry.build(limit=alg.dimension)


def rur_for_form(alg: QuotientAlgebra, L: Sequence[mpq], coord_matrices: Sequence[exactla.Matrix] | None = None) -> Rur | None:
    """RUR for the linear form ``sum L_i X_i``, or ``None`` when it does not separate.

    The ideal must already be known to be radical.
    """
    n, dim = alg.n, alg.dimension
    if coord_matrices is None:
        coord_matrices = [alg.multiplication_matrix(MvPoly.var(n, i)) for i in range(n)]
    ML = exactla.zeros(dim)
    for Li, Mi in zip(L, coord_matrices):
        if Li:
            ML = exactla.matadd(ML, exactla.matscale(Mi, Li))
    kry = exactla.KrylovEchelon(lambda v: exactla.matvec(ML, v), _unit_vector(dim))
    R0 = kry.build(limit=dim)
    if R0.degree != dim:
        return None
    dR0 = R0.derivative()
    R = []
    for i in range(n):
        Ai = kry.express(alg.nf_vector(MvPoly.var(n, i)))
        R.append((Ai * dR0) % R0)
    return Rur(R0, tuple(R), tuple(mpq(x) for x in L), dim)


def separating_form(n: int, j: int) -> tuple:
    """``X1 + j X2 + j**2 X3 + ...``."""
    return tuple(mpq(j**i) for i in range(n))


def compute_rur(gb: GroebnerBasis, q: QuotientRing, seed: int = 0) -> Rur | NotRadicalSignal:
    """RUR of a zero-dimensional ideal, or a signal when it is not radical."""
    alg = QuotientAlgebra(gb, q)
    n, dim = alg.n, alg.dimension
    if dim == 0:
        raise ValueError("the ideal has no solutions")
    coord = [alg.multiplication_matrix(MvPoly.var(n, i)) for i in range(n)]
    # The ideal is radical iff every coordinate eliminant is squarefree.
    for i, Mi in enumerate(coord):
        if not is_squarefree(eliminant(alg, Mi)):
            return NotRadicalSignal(f"eliminant in X{i + 1} has a repeated factor")
    if n == 1:
        rur = rur_for_form(alg, (ONE,), coord)
        return rur if rur is not None else NotRadicalSignal("no separating form")
    bound = max(1, 4 * math.comb(dim, 2))
    rng = SplitMix64(seed, STREAM_SEPARATOR)
    tried: set[int] = set()
    for attempt in range(bound + 1):
        window = min(bound, attempt + 2)
        j = 1 + rng.randbelow(window)
        if j in tried:
            j = next((c for c in range(1, bound + 2) if c not in tried), j)
        tried.add(j)
        rur = rur_for_form(alg, separating_form(n, j), coord)
        if rur is not None:
            return rur
    return NotRadicalSignal("no separating form found within the attempt budget")


def rur_substitution_residue(g: MvPoly, rur: Rur) -> UvPoly:
    """``R0'**deg(g) * g(R/R0') mod R0``; zero when ``g`` vanishes on the variety."""
    R0 = rur.R0
    dR0 = R0.derivative() % R0
    deg = max(g.degree, 0)
    pow_d = [UvPoly((ONE,), _trusted=True)]
    for _ in range(deg):
        pow_d.append((pow_d[-1] * dR0) % R0)
    coord_pows: list[list[UvPoly]] = []
    for Ri in rur.R:
        pows = [UvPoly((ONE,), _trusted=True)]
        for _ in range(deg):
            pows.append((pows[-1] * Ri) % R0)
        coord_pows.append(pows)
    acc = UvPoly()
    for e, c in g.terms.items():
        term = pow_d[deg - sum(e)].scale(c)
        for i, k in enumerate(e):
            if k:
                term = (term * coord_pows[i][k]) % R0
        acc = acc + term
    return acc % R0

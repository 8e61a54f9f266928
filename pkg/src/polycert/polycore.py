"""Exact multivariate and univariate polynomial arithmetic.

``MvPoly`` is a sparse map from exponent tuples to nonzero rationals;
``UvPoly`` is a dense coefficient tuple, lowest degree first. Both are
immutable values. A single monomial order is used everywhere an order is
needed: graded lexicographic with ``X1 > X2 > ... > Xn``.
"""

from __future__ import annotations

import math
import re
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import gmpy2
from gmpy2 import mpq

from .rational import ONE, ZERO, Q, RationalLike, fmt, height

ExpVec = tuple  # tuple[int, ...] of nonnegative exponents


def total_degree(e: ExpVec) -> int:
    return sum(e)


def grlex_key(e: ExpVec) -> tuple:
    """Sort key realising graded-lex order with ``X1 > ... > Xn``."""
    return (sum(e), e)


def _add_exp(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x + y for x, y in zip(a, b))


def divides(a: ExpVec, b: ExpVec) -> bool:
    """True when the monomial ``X^a`` divides ``X^b``."""
    return all(x <= y for x, y in zip(a, b))


class MvPoly:
    """Sparse multivariate polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[ExpVec, RationalLike] | None = None, *, _trusted: bool = False) -> None:
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        self.nvars = nvars
        self._hash = None
        if _trusted:
            self.terms = terms  # caller guarantees normal form
            return
        clean: dict[ExpVec, mpq] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has length {len(e)}, expected {nvars}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent in {e}")
                c = Q(c)
                if c:
                    clean[e] = clean.get(e, ZERO) + c
                    if not clean[e]:
                        del clean[e]
        self.terms = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "MvPoly":
        return cls(nvars, {}, _trusted=True)

    @classmethod
    def const(cls, nvars: int, c: RationalLike) -> "MvPoly":
        c = Q(c)
        return cls(nvars, {(0,) * nvars: c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, nvars: int, i: int) -> "MvPoly":
        """The variable with zero-based index ``i``."""
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): ONE}, _trusted=True)

    @classmethod
    def monomial(cls, exps: ExpVec, c: RationalLike = 1) -> "MvPoly":
        return cls(len(exps), {tuple(exps): c})

    # -- inspection ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def coefficient(self, e: ExpVec) -> mpq:
        return self.terms.get(tuple(e), ZERO)

    @property
    def constant_term(self) -> mpq:
        return self.terms.get((0,) * self.nvars, ZERO)

    def is_constant(self) -> bool:
        return self.degree <= 0

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def sorted_terms(self) -> list[tuple[ExpVec, mpq]]:
        """Terms in graded-lex descending order."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def leading_term(self) -> tuple[ExpVec, mpq]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def leading_monomial(self) -> ExpVec:
        return self.leading_term()[0]

    def leading_coefficient(self) -> mpq:
        return self.leading_term()[1]

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[ExpVec, mpq]]:
        return iter(self.terms.items())

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "MvPoly":
        if isinstance(other, MvPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return MvPoly.const(self.nvars, other)

    def __add__(self, other) -> "MvPoly":
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return MvPoly(self.nvars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "MvPoly":
        return MvPoly(self.nvars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other) -> "MvPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MvPoly":
        return self._coerce(other) - self

    def scale(self, c: RationalLike) -> "MvPoly":
        c = Q(c)
        if not c:
            return MvPoly.zero(self.nvars)
        return MvPoly(self.nvars, {e: v * c for e, v in self.terms.items()}, _trusted=True)

    def mul_term(self, e: ExpVec, c: mpq) -> "MvPoly":
        """Multiply by the single term ``c * X^e``."""
        if not c:
            return MvPoly.zero(self.nvars)
        return MvPoly(self.nvars, {_add_exp(a, e): v * c for a, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other) -> "MvPoly":
        if not isinstance(other, MvPoly):
            return self.scale(other)
        other = self._coerce(other)
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out: dict[ExpVec, mpq] = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                v = get(e)
                out[e] = ca * cb if v is None else v + ca * cb
        return MvPoly(self.nvars, {e: c for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MvPoly":
        if k < 0:
            raise ValueError("negative power")
        result = MvPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MvPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            c = Q(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == ({(0,) * self.nvars: c} if c else {})

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"MvPoly({self.nvars}, {serialize_poly(self)!r})"

    def __str__(self) -> str:
        return serialize_poly(self)

    # -- calculus and evaluation ---------------------------------------
    def __call__(self, *point) -> mpq:
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return evaluate(self, point)

    def diff(self, i: int) -> "MvPoly":
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = c * k
        return MvPoly(self.nvars, out, _trusted=True)

    def map_exponents(self, nvars: int, fn: Callable[[ExpVec], ExpVec]) -> "MvPoly":
        """Re-index exponents (e.g. to embed into a larger variable set)."""
        return MvPoly(nvars, {fn(e): c for e, c in self.terms.items()})

    def embed(self, nvars: int, positions: Sequence[int]) -> "MvPoly":
        """View as a polynomial in ``nvars`` variables, variable ``i`` moved to ``positions[i]``."""
        def move(e: ExpVec) -> ExpVec:
            out = [0] * nvars
            for i, k in enumerate(e):
                out[positions[i]] += k
            return tuple(out)
        return MvPoly(nvars, {move(e): c for e, c in self.terms.items()}, _trusted=True)

    def compose(self, values: Sequence["MvPoly"]) -> "MvPoly":
        """Substitute ``values[i]`` for variable ``i``; all values share one ring."""
        if len(values) != self.nvars:
            raise ValueError("compose needs one polynomial per variable")
        if not values:
            return self
        target = values[0].nvars
        powers: list[dict[int, MvPoly]] = [{0: MvPoly.const(target, 1), 1: v} for v in values]

        def power(i: int, k: int) -> MvPoly:
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k // 2) * power(i, k - k // 2)
            return cache[k]

        out = MvPoly.zero(target)
        for e, c in self.terms.items():
            term = MvPoly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out


def evaluate(f: MvPoly, x: Sequence[RationalLike]) -> mpq:
    """Exact value of ``f`` at the rational point ``x``."""
    if len(x) != f.nvars:
        raise ValueError(f"point has {len(x)} coordinates, polynomial has {f.nvars} variables")
    xs = [Q(v) for v in x]
    cache: list[dict[int, mpq]] = [{0: ONE} for _ in xs]
    total = ZERO
    for e, c in f.terms.items():
        term = c
        for i, k in enumerate(e):
            if k:
                p = cache[i].get(k)
                if p is None:
                    p = xs[i] ** k
                    cache[i][k] = p
                term = term * p
        total += term
    return total


def gradient(f: MvPoly) -> list[MvPoly]:
    return [f.diff(i) for i in range(f.nvars)]


def homogenize(f: MvPoly, total: int) -> MvPoly:
    """Homogenise to degree ``total`` with a new variable ``X0`` in front."""
    if total < f.degree:
        raise ValueError(f"target degree {total} is below the degree {f.degree}")
    return MvPoly(f.nvars + 1, {(total - sum(e),) + e: c for e, c in f.terms.items()}, _trusted=True)


def dehomogenize(F: MvPoly) -> MvPoly:
    """Set the leading variable ``X0`` to one."""
    out: dict[ExpVec, mpq] = {}
    for e, c in F.terms.items():
        out[e[1:]] = out.get(e[1:], ZERO) + c
    return MvPoly(F.nvars - 1, {e: c for e, c in out.items() if c}, _trusted=True)


def top_part(f: MvPoly) -> MvPoly:
    """Highest-degree homogeneous component."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no top-degree part")
    d = f.degree
    return MvPoly(f.nvars, {e: c for e, c in f.terms.items() if sum(e) == d}, _trusted=True)


def norms(f: MvPoly) -> tuple[mpq, int, mpq]:
    """Return ``(height, bitsize, one_norm)`` of the coefficient vector."""
    h = max((height(c) for c in f.terms.values()), default=0)
    one = sum((abs(c) for c in f.terms.values()), ZERO)
    return mpq(h), h.bit_length(), one


# ---------------------------------------------------------------------------
# Univariate polynomials


def _strip(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class UvPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = (), *, _trusted: bool = False) -> None:
        if _trusted:
            self.coeffs = coeffs
        else:
            self.coeffs = _strip([Q(c) for c in coeffs])

    @classmethod
    def T(cls) -> "UvPoly":
        return cls((ZERO, ONE), _trusted=True)

    @classmethod
    def const(cls, c: RationalLike) -> "UvPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> mpq:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __getitem__(self, i: int) -> mpq:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else ZERO

    def __eq__(self, other) -> bool:
        if isinstance(other, UvPoly):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == UvPoly([other]).coeffs
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UvPoly({[fmt(c) for c in self.coeffs]})"

    def _coerce(self, other) -> "UvPoly":
        return other if isinstance(other, UvPoly) else UvPoly([other])

    def __add__(self, other) -> "UvPoly":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UvPoly(_strip(out), _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "UvPoly":
        return UvPoly(tuple(-c for c in self.coeffs), _trusted=True)

    def __sub__(self, other) -> "UvPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UvPoly":
        return self._coerce(other) - self

    def scale(self, c: RationalLike) -> "UvPoly":
        c = Q(c)
        if not c:
            return UvPoly()
        return UvPoly(tuple(x * c for x in self.coeffs), _trusted=True)

    def __mul__(self, other) -> "UvPoly":
        if not isinstance(other, UvPoly):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UvPoly()
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UvPoly(_strip(out), _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UvPoly":
        result = UvPoly((ONE,), _trusted=True)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift_degree(self, k: int) -> "UvPoly":
        """Multiply by ``T**k``."""
        if not self.coeffs:
            return self
        return UvPoly((ZERO,) * k + self.coeffs, _trusted=True)

    def divmod(self, other: "UvPoly") -> tuple["UvPoly", "UvPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        db = other.degree
        inv = 1 / other.lc
        if len(rem) - 1 < db:
            return UvPoly(), self
        quo = [ZERO] * (len(rem) - db)
        b = other.coeffs
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c:
                c = c * inv
                quo[k - db] = c
                for j in range(db + 1):
                    rem[k - db + j] -= c * b[j]
        return UvPoly(_strip(quo), _trusted=True), UvPoly(_strip(rem[:db]), _trusted=True)

    def __mod__(self, other: "UvPoly") -> "UvPoly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "UvPoly") -> "UvPoly":
        return self.divmod(other)[0]

    def exact_div(self, other: "UvPoly") -> "UvPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def derivative(self) -> "UvPoly":
        return UvPoly(_strip([c * i for i, c in enumerate(self.coeffs)][1:]), _trusted=True)

    def __call__(self, x: RationalLike) -> mpq:
        x = Q(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "UvPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def compose(self, other: "UvPoly") -> "UvPoly":
        acc = UvPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def to_mvpoly(self, nvars: int, index: int = 0) -> MvPoly:
        """Embed as a polynomial in variable ``index`` of an ``nvars``-variable ring."""
        out = {}
        for k, c in enumerate(self.coeffs):
            if c:
                e = [0] * nvars
                e[index] = k
                out[tuple(e)] = c
        return MvPoly(nvars, out, _trusted=True)

    def integer_coefficients(self) -> list[int]:
        """Primitive integer multiple with the same sign pattern (positive scaling only)."""
        if not self.coeffs:
            return []
        lcm = 1
        for c in self.coeffs:
            lcm = math.lcm(lcm, int(c.denominator))
        ints = [int(c * lcm) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        return [v // g for v in ints]


def _primitive(a: list) -> list:
    g = 0
    for c in a:
        g = gmpy2.gcd(g, c)
        if g == 1:
            return a
    return [c // g for c in a] if g > 1 else a


def _integer_prem(a: list, b: list) -> list:
    """``lc(b)**k * a mod b`` over the integers (coefficient lists, lowest first)."""
    r = list(a)
    lb = len(b) - 1
    m = b[-1]
    for k in range(len(r) - 1, lb - 1, -1):
        c = r[k]
        r = [x * m for x in r]
        if c:
            off = k - lb
            for j in range(lb + 1):
                r[off + j] -= c * b[j]
        r.pop()
    while r and not r[-1]:
        r.pop()
    return r


_GCD_PRIMES = (2305843009213693951, 4611686018427387847, 9223372036854775783)


def _degree_of_gcd_mod(x: list, y: list, p: int) -> int:
    """Degree of ``gcd(x mod p, y mod p)`` in GF(p)[T] (coefficient lists, lowest first)."""

    def strip(v):
        while v and not v[-1]:
            v.pop()
        return v

    u = strip([int(c) % p for c in x])
    v = strip([int(c) % p for c in y])
    while v:
        inv = pow(v[-1], -1, p)
        while len(u) >= len(v):
            c = u[-1] * inv % p
            off = len(u) - len(v)
            for j, bj in enumerate(v):
                u[off + j] = (u[off + j] - c * bj) % p
            u.pop()
            strip(u)
        u, v = v, u
    return len(u) - 1


def _coprime_mod_prime(x: list, y: list) -> bool:
    """True when some prime dividing neither leading coefficient proves ``gcd(x, y) = 1``.

    The primitive integer gcd has a leading coefficient dividing both inputs',
    so its degree survives reduction modulo such a prime.
    """
    for p in _GCD_PRIMES:
        if x[-1] % p and y[-1] % p:
            return _degree_of_gcd_mod(x, y, p) == 0
    return False


def uv_gcd(a: UvPoly, b: UvPoly) -> UvPoly:
    """Monic greatest common divisor (zero only when both inputs are zero).

    Runs the primitive pseudo-remainder sequence over the integers, which
    keeps coefficient sizes bounded by the inputs' gcd-free parts.
    """
    if a.is_zero():
        return b.monic() if not b.is_zero() else b
    if b.is_zero():
        return a.monic()
    x = _primitive([gmpy2.mpz(c) for c in a.integer_coefficients()])
    y = _primitive([gmpy2.mpz(c) for c in b.integer_coefficients()])
    if _coprime_mod_prime(x, y):
        return UvPoly((ONE,))
    if len(x) < len(y):
        x, y = y, x
    while y:
        x, y = y, _primitive(_integer_prem(x, y))
    return UvPoly([mpq(c) for c in x]).monic()


def uv_from_mvpoly(f: MvPoly, index: int = 0) -> UvPoly:
    """Read a polynomial that only involves variable ``index``."""
    coeffs: dict[int, mpq] = {}
    for e, c in f.terms.items():
        if any(k for i, k in enumerate(e) if i != index):
            raise ValueError("polynomial involves more than one variable")
        coeffs[e[index]] = c
    if not coeffs:
        return UvPoly()
    return UvPoly([coeffs.get(k, ZERO) for k in range(max(coeffs) + 1)])


# ---------------------------------------------------------------------------
# Text format

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^])|(?P<bad>\S))")


class PolySyntaxError(ValueError):
    """Malformed polynomial text; ``position`` is a zero-based character offset."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


def default_variables(n: int) -> list[str]:
    return [f"x{i}" for i in range(1, n + 1)]


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        kind = m.lastgroup
        if kind == "bad":
            raise PolySyntaxError(f"unexpected character {m.group('bad')!r}", m.start("bad"))
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


def infer_variables(text: str) -> list[str]:
    """Variable names used in ``text``: ``x1..xN`` when all names look like that, else sorted."""
    names = {tok for kind, tok, _ in _tokens(text) if kind == "name"}
    indexed = [re.fullmatch(r"x(\d+)", n) for n in names]
    if names and all(m and int(m.group(1)) >= 1 for m in indexed):
        return default_variables(max(int(m.group(1)) for m in indexed))
    if not names:
        return ["x1"]
    return sorted(names)


def parse_poly(text: str, variables: Sequence[str] | None = None) -> MvPoly:
    """Parse ``text`` in the term grammar ``[coef] [* x^e [* ...]]`` joined by ``+``/``-``."""
    if variables is None:
        variables = infer_variables(text)
    index = {name: i for i, name in enumerate(variables)}
    n = len(variables)
    toks = _tokens(text)
    if not toks:
        raise PolySyntaxError("empty polynomial", 0)
    pos = 0
    acc: dict[ExpVec, mpq] = {}

    def peek():
        return toks[pos] if pos < len(toks) else None

    def end_position():
        return len(text)

    first = True
    while pos < len(toks):
        sgn = 1
        tok = peek()
        if tok[0] == "op" and tok[1] in "+-":
            sgn = -1 if tok[1] == "-" else 1
            pos += 1
        elif not first:
            raise PolySyntaxError(f"expected '+' or '-' but found {tok[1]!r}", tok[2])
        first = False
        tok = peek()
        if tok is None:
            raise PolySyntaxError("dangling sign", end_position())
        coef = ONE
        exps = [0] * n
        need_factor = True
        if tok[0] == "num":
            try:
                coef = Q(tok[1])
            except ValueError:
                raise PolySyntaxError(f"malformed number {tok[1]!r}", tok[2]) from None
            pos += 1
            need_factor = False
            nxt = peek()
            if nxt is not None and nxt[0] == "op" and nxt[1] == "*":
                pos += 1
                need_factor = True
            else:
                acc_key = tuple(exps)
                acc[acc_key] = acc.get(acc_key, ZERO) + sgn * coef
                continue
        while need_factor:
            tok = peek()
            if tok is None:
                raise PolySyntaxError("expected a variable", end_position())
            if tok[0] != "name":
                raise PolySyntaxError(f"expected a variable but found {tok[1]!r}", tok[2])
            if tok[1] not in index:
                raise PolySyntaxError(f"unknown variable {tok[1]!r}", tok[2])
            var = index[tok[1]]
            pos += 1
            power = 1
            nxt = peek()
            if nxt is not None and nxt[0] == "op" and nxt[1] == "^":
                pos += 1
                nxt = peek()
                if nxt is None or nxt[0] != "num" or "/" in nxt[1]:
                    raise PolySyntaxError("expected an integer exponent", nxt[2] if nxt else end_position())
                power = int(nxt[1])
                pos += 1
            exps[var] += power
            nxt = peek()
            if nxt is not None and nxt[0] == "op" and nxt[1] == "*":
                pos += 1
            else:
                need_factor = False
        key = tuple(exps)
        acc[key] = acc.get(key, ZERO) + sgn * coef
    return MvPoly(n, acc)


def _monomial_text(e: ExpVec, names: Sequence[str]) -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(names[i])
        elif k > 1:
            parts.append(f"{names[i]}^{k}")
    return "*".join(parts)


def serialize_poly(f: MvPoly, variables: Sequence[str] | None = None) -> str:
    """Canonical text: graded-lex descending terms, reduced fractions."""
    names = list(variables) if variables is not None else default_variables(f.nvars)
    if f.is_zero():
        return "0"
    pieces = []
    for k, (e, c) in enumerate(f.sorted_terms()):
        mono = _monomial_text(e, names)
        mag = abs(c)
        if not mono:
            body = fmt(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{fmt(mag)}*{mono}"
        if k == 0:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)


def poly_to_terms(f: MvPoly) -> list:
    """JSON-ready term list ``[[exponents], "p/q"]`` in graded-lex descending order."""
    return [[list(e), fmt(c)] for e, c in f.sorted_terms()]


def poly_from_terms(nvars: int, terms: list) -> MvPoly:
    out: dict[ExpVec, mpq] = {}
    for item in terms:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise ValueError(f"malformed term {item!r}")
        e, c = item
        if not isinstance(e, (list, tuple)) or not all(isinstance(x, int) and not isinstance(x, bool) for x in e):
            raise ValueError(f"malformed exponent vector {e!r}")
        if not isinstance(c, str):
            raise ValueError(f"coefficient must be a fraction string, got {c!r}")
        e = tuple(e)
        if e in out:
            raise ValueError(f"repeated exponent vector {list(e)}")
        out[e] = Q(c)
    return MvPoly(nvars, out)

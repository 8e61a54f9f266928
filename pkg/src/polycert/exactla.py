"""Dense exact linear algebra over the rationals.

Matrices are lists of rows of ``mpq``. Only what the solver needs is here:
products, determinants, characteristic polynomials via Hessenberg
reduction, and a Krylov-sequence minimal polynomial with an incremental
echelon form that can also express further vectors in the Krylov basis.
"""

from __future__ import annotations

from typing import Callable

from gmpy2 import mpq

from .polycore import UvPoly
from .rational import ONE, ZERO

Matrix = list  # list[list[mpq]]
Vector = list  # list[mpq]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None) -> Matrix:
    return [[ZERO] * (n if m is None else m) for _ in range(n)]


def matvec(M: Matrix, v: Vector) -> Vector:
    out = []
    for row in M:
        acc = ZERO
        for a, b in zip(row, v):
            if a and b:
                acc += a * b
        out.append(acc)
    return out


def matmul(A: Matrix, B: Matrix) -> Matrix:
    cols = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col) if a and b), ZERO) for col in cols] for row in A]


def matadd(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matscale(A: Matrix, c) -> Matrix:
    return [[a * c for a in row] for row in A]


def quadratic_form(G: Matrix, v: Vector) -> mpq:
    return sum((a * b for a, b in zip(v, matvec(G, v))), ZERO)


def determinant(M: Matrix) -> mpq:
    """Gaussian elimination with exact pivots."""
    A = [list(r) for r in M]
    n = len(A)
    det = ONE
    for k in range(n):
        p = next((i for i in range(k, n) if A[i][k]), None)
        if p is None:
            return ZERO
        if p != k:
            A[k], A[p] = A[p], A[k]
            det = -det
        piv = A[k][k]
        det *= piv
        for i in range(k + 1, n):
            if A[i][k]:
                f = A[i][k] / piv
                row_k = A[k]
                row_i = A[i]
                for j in range(k, n):
                    row_i[j] -= f * row_k[j]
    return det


def charpoly(M: Matrix) -> UvPoly:
    """Characteristic polynomial ``det(T*I - M)`` (monic).

    The matrix is first brought to upper Hessenberg form by elementary
    similarity transforms; the characteristic polynomial of a Hessenberg
    matrix then follows from a short recurrence over its leading blocks.
    """
    n = len(M)
    H = [list(r) for r in M]
    for k in range(1, n - 1):
        p = next((i for i in range(k, n) if H[i][k - 1]), None)
        if p is None:
            continue
        if p != k:
            H[k], H[p] = H[p], H[k]
            for row in H:
                row[k], row[p] = row[p], row[k]
        piv = H[k][k - 1]
        for i in range(k + 1, n):
            if H[i][k - 1]:
                f = H[i][k - 1] / piv
                # Row operation R_i -= f R_k, then column operation C_k += f C_i.
                for j in range(n):
                    H[i][j] -= f * H[k][j]
                for row in H:
                    row[k] += f * row[i]
    # Recurrence: p_0 = 1, p_m = (T - h_mm) p_{m-1} - sum_{i<m} h_im * prod(h_{j+1,j}) p_{i-1}
    T = UvPoly.T()
    polys = [UvPoly((ONE,), _trusted=True)]
    for m in range(1, n + 1):
        pm = (T - H[m - 1][m - 1]) * polys[m - 1]
        prod = ONE
        for i in range(m - 1, 0, -1):
            prod *= H[i][i - 1]
            if not prod:
                break
            coef = H[i - 1][m - 1] * prod
            if coef:
                pm = pm - polys[i - 1].scale(coef)
        polys.append(pm)
    return polys[n]


class KrylovEchelon:
    """Incremental echelon form of a Krylov sequence ``v, Mv, M^2 v, ...``.

    After :meth:`build` the minimal polynomial of ``M`` relative to ``v`` is
    available, and :meth:`express` writes any vector in the span as a
    polynomial in ``M`` applied to ``v``.
    """

    def __init__(self, apply: Callable[[Vector], Vector], start: Vector) -> None:
        self.apply = apply
        self.start = start
        self.rows: list[tuple[int, Vector, Vector]] = []  # (pivot, vector, combination)
        self.minpoly: UvPoly | None = None

    def _reduce(self, w: Vector, combo: Vector) -> None:
        for pivot, vec, comb in self.rows:
            c = w[pivot]
            if c:
                for j in range(pivot, len(w)):
                    if vec[j]:
                        w[j] -= c * vec[j]
                for j, b in enumerate(comb):
                    if b:
                        combo[j] -= c * b

    def build(self, limit: int | None = None) -> UvPoly:
        v = list(self.start)
        k = 0
        while True:
            w = list(v)
            combo = [ZERO] * k + [ONE]
            self._reduce(w, combo)
            pivot = next((i for i, x in enumerate(w) if x), None)
            if pivot is None:
                self.minpoly = UvPoly(combo)
                return self.minpoly
            inv = 1 / w[pivot]
            w = [x * inv for x in w]
            combo = [x * inv for x in combo]
            # Pad earlier combinations lazily: combination vectors grow with k.
            self.rows.append((pivot, w, combo))
            k += 1
            if limit is not None and k > limit:
                raise ArithmeticError("Krylov sequence exceeded the expected dimension")
            v = self.apply(v)

    def express(self, target: Vector) -> UvPoly:
        """Polynomial ``A`` with ``A(M) v = target``; the target must lie in the span."""
        w = list(target)
        combo = [ZERO] * len(self.rows)
        self._reduce(w, combo)
        if any(w):
            raise ArithmeticError("vector is outside the Krylov space")
        return UvPoly([-c for c in combo])

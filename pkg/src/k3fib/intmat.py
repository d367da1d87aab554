"""Exact integer and rational matrix routines.

Matrices are plain lists of row lists holding Python ints (or Fractions
where stated).  Nothing here uses floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

try:  # C rationals; results are converted back to Fraction
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence]) -> list[list]:
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def congruent(G: Sequence[Sequence], P: Sequence[Sequence]) -> list[list]:
    """Return P^T G P."""
    return matmul(transpose(P), matmul(G, P))


def vec_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def det(M: Sequence[Sequence[int]]) -> int:
    """Fraction-free Bareiss determinant."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


@dataclass(frozen=True)
class SnfResult:
    """``left * M * right == diag(diag)`` with unimodular ``left``/``right``."""

    diag: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d)


def smith_normal_form(M: Sequence[Sequence[int]], ncols: int | None = None) -> SnfResult:
    """Smith normal form with transforms.

    The output is deterministic for a fixed input: pivots are chosen as the
    entry of least absolute value, ties broken by row-major position.
    """
    m = len(M)
    n = len(M[0]) if m else (ncols or 0)
    A = [list(row) for row in M]
    L = identity(m)
    R = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row[dst] += q * row[src]
        for M_ in (A, L):
            rd, rs = M_[dst], M_[src]
            for k in range(len(rd)):
                if rs[k]:
                    rd[k] += q * rs[k]

    def add_col(dst, src, q):
        for M_ in (A, R):
            for row in M_:
                if row[src]:
                    row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = A[i]
                for j in range(t, n):
                    a = row[j]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), i, j)
            if best is None:
                return _finish(A, L, R, m, n)
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            L[t] = [-x for x in L[t]]
    return _finish(A, L, R, m, n)


def _finish(A, L, R, m, n) -> SnfResult:
    diag = tuple(A[i][i] for i in range(min(m, n)))
    return SnfResult(diag, tuple(map(tuple, L)), tuple(map(tuple, R)))


def kernel_basis(M: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Basis of the saturated integer kernel {x : M x = 0}, as column vectors."""
    n = len(M[0]) if M else (ncols or 0)
    if not M:
        return [list(col) for col in identity(n)]
    snf = smith_normal_form(M)
    r = snf.rank
    R = snf.right
    return [[R[i][j] for i in range(n)] for j in range(r, n)]


def hnf_rows(generators: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """Row-style Hermite basis of the Z-span of the given row vectors."""
    rows = [list(g) for g in generators if any(g)]
    basis: list[list[int]] = []
    pivots: list[int] = []
    for col in range(dim):
        active = [r for r in rows if r[col]]
        if not active:
            continue
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            p = active[0]
            for r in active[1:]:
                q = r[col] // p[col]
                for k in range(col, dim):
                    r[k] -= q * p[k]
            active = [p] + [r for r in active[1:] if r[col]]
        p = active[0]
        if p[col] < 0:
            for k in range(dim):
                p[k] = -p[k]
        rows = [r for r in rows if r is not p and any(r)]
        basis.append(p)
        pivots.append(col)
    for bi in range(len(basis)):
        pc = pivots[bi]
        piv = basis[bi][pc]
        for bj in range(bi):
            q = basis[bj][pc] // piv
            if q:
                for k in range(dim):
                    basis[bj][k] -= q * basis[bi][k]
    return basis


def rational_inverse(M: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(M)
    A = [[_Q(x) for x in row] + [_Q(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [[Fraction(int(x.numerator), int(x.denominator)) for x in row[n:]] for row in A]


def integer_inverse(M: Sequence[Sequence[int]]) -> Matrix:
    inv = rational_inverse(M)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def solve_rational(B: Sequence[Sequence[int]], v: Sequence[int]) -> list[Fraction]:
    """Coordinates of ``v`` in the basis given by the columns of square ``B``."""
    return matvec(rational_inverse(B), v)


def complete_to_basis(v: Sequence[int]) -> Matrix:
    """Unimodular matrix whose first column is the primitive vector ``v``."""
    m = len(v)
    if vec_gcd(v) != 1:
        raise ValueError("vector is not primitive")
    snf = smith_normal_form([list(v)])
    B = integer_inverse([list(r) for r in snf.right])
    # v * right = +-e1, so the first row of right^{-1} is +-v
    cols = [list(row) for row in B]
    if cols[0] != list(v):
        cols[0] = [-x for x in cols[0]]
    assert cols[0] == list(v)
    return transpose(cols) if m else []

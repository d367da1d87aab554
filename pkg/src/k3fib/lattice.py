"""Even integral lattices given by Gram matrices, with exact arithmetic.

Vectors are tuples of ints holding coordinates in the lattice basis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import intmat
from .errors import (
    DegenerateLattice,
    NotEven,
    NotIsotropic,
    NotPrimitive,
    NotSymmetric,
    ZeroVector,
)
from .intmat import SnfResult, smith_normal_form  # noqa: F401  (re-export)

Vector = tuple[int, ...]


@dataclass(frozen=True)
class Lattice:
    """A lattice given by a symmetric, even integer Gram matrix."""

    gram: tuple[tuple[int, ...], ...]
    label: str | None = field(default=None, compare=False)

    def __init__(self, gram: Iterable[Iterable[int]], label: str | None = None,
                 even: bool = True):
        rows = tuple(tuple(int(x) for x in row) for row in gram)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise NotSymmetric(f"row {i} has length {len(row)}, expected {n}")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise NotSymmetric(
                        f"gram[{i}][{j}]={rows[i][j]} but gram[{j}][{i}]={rows[j][i]}")
        if even:
            for i in range(n):
                if rows[i][i] % 2:
                    raise NotEven(f"diagonal entry gram[{i}][{i}]={rows[i][i]} is odd")
        object.__setattr__(self, "gram", rows)
        object.__setattr__(self, "label", label)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def matrix(self) -> list[list[int]]:
        return [list(r) for r in self.gram]

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        return sum(ui * gij * vj for ui, row in zip(u, self.gram) if ui
                   for gij, vj in zip(row, v))

    def norm(self, v: Sequence[int]) -> int:
        return self.pair(v, v)

    def pairing_row(self, v: Sequence[int]) -> list[int]:
        """The linear form x -> v.x as a coefficient list."""
        return intmat.matvec(self.gram, v)

    @cached_property
    def determinant(self) -> int:
        return intmat.det(self.gram)

    @property
    def disc(self) -> int:
        return abs(self.determinant)

    @property
    def degenerate(self) -> bool:
        return self.determinant == 0

    @cached_property
    def signature(self) -> tuple[int, int, int]:
        return _inertia(self.gram)

    def is_definite(self) -> bool:
        p, z, m = self.signature
        return z == 0 and (p == 0 or m == 0)

    def is_negative_definite(self) -> bool:
        p, z, m = self.signature
        return p == 0 and z == 0

    def is_positive_definite(self) -> bool:
        p, z, m = self.signature
        return m == 0 and z == 0

    def is_hyperbolic(self) -> bool:
        p, z, m = self.signature
        return p == 1 and z == 0

    def transform(self, P: Sequence[Sequence[int]], label: str | None = None) -> "Lattice":
        """Sublattice (or rebased lattice) spanned by the columns of ``P``."""
        return Lattice(intmat.congruent(self.gram, P), label=label)

    def to_json(self) -> dict:
        return {"label": self.label, "gram": self.matrix()}

    def __repr__(self) -> str:
        name = f" {self.label!r}" if self.label else ""
        return f"Lattice{name}({self.matrix()})"


def from_json(obj: dict | str) -> Lattice:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return Lattice(obj["gram"], label=obj.get("label"))


def require_nondegenerate(L: Lattice) -> None:
    if L.degenerate:
        raise DegenerateLattice(f"lattice {L.label or ''} is degenerate".strip())


def _inertia(gram: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """Sylvester inertia by exact symmetric pivoting."""
    A = [[Fraction(x) for x in row] for row in gram]
    pos = neg = 0
    n = len(A)
    while n:
        k = next((i for i in range(n) if A[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if A[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # replace basis vector e_i by e_i + e_j, whose norm is 2*A[i][j] != 0
            for c in range(n):
                A[i][c] += A[j][c]
            for r in range(n):
                A[r][i] += A[r][j]
            k = i
        p = A[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in range(n) if i != k]
        A = [[A[i][j] - A[i][k] * A[k][j] / p for j in rest] for i in rest]
        n -= 1
    return pos, len(gram) - pos - neg, neg


def determinant(L: Lattice) -> int:
    return L.determinant


def signature(L: Lattice) -> tuple[int, int, int]:
    return L.signature


def divisibility(L: Lattice, v: Sequence[int]) -> int:
    """Positive generator of the ideal v.L of the integers."""
    if not any(v):
        raise ZeroVector("divisibility of the zero vector")
    g = intmat.vec_gcd(L.pairing_row(v))
    return g


def is_primitive(v: Sequence[int]) -> bool:
    return intmat.vec_gcd(v) == 1


def direct_sum(*lattices: Lattice, label: str | None = None) -> Lattice:
    n = sum(L.rank for L in lattices)
    G = [[0] * n for _ in range(n)]
    off = 0
    for L in lattices:
        for i, row in enumerate(L.gram):
            for j, x in enumerate(row):
                G[off + i][off + j] = x
        off += L.rank
    if label is None:
        label = " + ".join(L.label or "?" for L in lattices)
    return Lattice(G, label=label)


def rescale(L: Lattice, s: int, label: str | None = None) -> Lattice:
    if s == 0:
        raise ValueError("rescale factor must be nonzero")
    return Lattice([[s * x for x in row] for row in L.gram],
                   label=label if label is not None else (f"{L.label}({s})" if L.label else None))


def orthogonal_complement(L: Lattice, v: Sequence[int] | Sequence[Sequence[int]]
                          ) -> tuple[Lattice, list[list[int]]]:
    """Saturated sublattice orthogonal to ``v`` (a vector or a list of vectors).

    Returns the complement and the r x k embedding matrix whose columns are
    the complement basis in L-coordinates.
    """
    vectors = [list(v)] if v and isinstance(v[0], int) else [list(x) for x in v]
    if not vectors or all(not any(x) for x in vectors):
        raise ZeroVector("orthogonal complement of the zero vector")
    rows = [L.pairing_row(x) for x in vectors]
    cols = intmat.kernel_basis(rows, ncols=L.rank)
    E = intmat.transpose(cols) if cols else [[] for _ in range(L.rank)]
    sub = Lattice(intmat.congruent(L.gram, E) if cols else [], label=None)
    return sub, E


def radical_quotient(L: Lattice) -> tuple[Lattice, list[list[int]]]:
    """L / rad(L) with a basis of representatives (columns of the returned matrix)."""
    rad_cols = intmat.kernel_basis(L.matrix(), ncols=L.rank)
    if not rad_cols:
        return L, intmat.identity(L.rank)
    # Extend the saturated radical to a basis of L and keep the other vectors.
    k = len(rad_cols)
    snf = smith_normal_form(rad_cols)  # rows are radical vectors
    B = intmat.integer_inverse([list(r) for r in snf.right])
    # rows k.. of right^{-1} complement the radical
    E = intmat.transpose([B[i] for i in range(k, L.rank)])
    if not E or not E[0]:
        return Lattice([]), [[] for _ in range(L.rank)]
    return Lattice(intmat.congruent(L.gram, E)), E


def isotropic_quotient(L: Lattice, F: Sequence[int], reduce: bool = True) -> Lattice:
    """The lattice F^perp / <F> for a primitive isotropic vector F."""
    if not any(F):
        raise ZeroVector("zero vector")
    if L.norm(F) != 0:
        raise NotIsotropic(f"F.F = {L.norm(F)}")
    if not is_primitive(F):
        raise NotPrimitive(f"F = {tuple(F)} is not primitive")
    comp, E = orthogonal_complement(L, F)
    # coordinates of F inside the complement basis
    c = _coords_in_columns(E, F)
    B = intmat.complete_to_basis(c)
    rest = [row[1:] for row in B]
    Q = Lattice(intmat.congruent(comp.gram, rest))
    return reduce_definite(Q)[0] if reduce and Q.rank else Q


def _coords_in_columns(E: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    """Integer coordinates of ``v`` in the (saturated) column span of ``E``."""
    k = len(E[0])
    # E has full column rank; solve via the Smith form of E.
    snf = smith_normal_form([list(r) for r in E])
    # left * E * right = D, so E y = v  <=>  D (right^{-1} y) = left v
    lv = intmat.matvec(snf.left, v)
    z = []
    for i in range(k):
        d = snf.diag[i]
        if lv[i] % d:
            raise ValueError("vector not in span")
        z.append(lv[i] // d)
    if any(lv[k:]):
        raise ValueError("vector not in span")
    return intmat.matvec(snf.right, z)


def reduce_definite(L: Lattice) -> tuple[Lattice, list[list[int]]]:
    """Greedy pairwise size reduction of a definite Gram matrix.

    Returns the reduced lattice and the unimodular transform T with
    T^T G T equal to the reduced Gram.  Basis vectors end up sorted by
    absolute norm.  This is exact integer arithmetic throughout.
    """
    n = L.rank
    G = L.matrix()
    T = intmat.identity(n)
    if n == 0:
        return L, T
    changed = True
    while changed:
        changed = False
        order = sorted(range(n), key=lambda i: (abs(G[i][i]), i))
        for i in order:
            for j in order:
                if i == j:
                    continue
                gij, gjj = G[i][j], G[j][j]
                # subtract q * b_j from b_i when it shortens b_i
                q = _round_div(gij, gjj)
                if q:
                    _sub_col(G, T, i, j, q)
                    changed = True
    order = sorted(range(n), key=lambda i: (abs(G[i][i]), i))
    G = [[G[i][j] for j in order] for i in order]
    T = [[row[j] for j in order] for row in T]
    return Lattice(G, label=L.label), T


def _round_div(a: int, b: int) -> int:
    # nearest integer to a/b, ties toward zero (keeps the reduction strictly decreasing)
    if b < 0:
        a, b = -a, -b
    q, r = divmod(abs(a), b)
    if 2 * r > b:
        q += 1
    return q if a >= 0 else -q


def _sub_col(G, T, i, j, q):
    """b_i <- b_i - q b_j, updating Gram and transform."""
    n = len(G)
    gjj = G[j][j]
    gij = G[i][j]
    gii = G[i][i]
    for k in range(n):
        if k != i:
            G[i][k] -= q * G[j][k]
            G[k][i] = G[i][k]
    G[i][i] = gii - 2 * q * gij + q * q * gjj
    for row in T:
        row[i] -= q * row[j]


U = Lattice([[0, 1], [1, 0]], label="U")


def diagonal(*entries: int, label: str | None = None) -> Lattice:
    n = len(entries)
    return Lattice([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)],
                   label=label)

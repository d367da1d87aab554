"""Discriminant forms of even lattices and even overlattices.

A finite quadratic form is stored on generators g_1..g_k of orders d_i,
with q-values in Q/2Z and bilinear values in Q/Z.  Internally every value
is scaled by the group exponent N so the arithmetic stays in the integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm, prod
from typing import Iterable, Sequence

from . import intmat
from .errors import GroupTooLarge, NotEven, NotIntegral, NotPrimitive
from .lattice import Lattice, is_primitive, reduce_definite, require_nondegenerate

Element = tuple[int, ...]

DEFAULT_GROUP_BOUND = 10_000


@dataclass(frozen=True)
class FiniteQuadraticForm:
    orders: tuple[int, ...]
    # N*q(g_i) mod 2N and N*b(g_i, g_j) mod N, N the exponent
    q_scaled: tuple[int, ...]
    b_scaled: tuple[tuple[int, ...], ...]
    lifts: tuple[tuple[Fraction, ...], ...] | None = field(default=None, compare=False)

    @staticmethod
    def from_gram(orders: Sequence[int], gram: Sequence[Sequence[Fraction]],
                  lifts=None) -> "FiniteQuadraticForm":
        """Build from generator orders and the rational Gram matrix of the generators."""
        N = lcm(*orders) if orders else 1
        k = len(orders)
        qs = []
        bs = [[0] * k for _ in range(k)]
        for i in range(k):
            v = Fraction(gram[i][i]) * N
            if v.denominator != 1:
                raise NotIntegral("q-value denominator does not divide the exponent")
            qs.append(int(v) % (2 * N))
            for j in range(k):
                w = Fraction(gram[i][j]) * N
                if w.denominator != 1:
                    raise NotIntegral("b-value denominator does not divide the exponent")
                bs[i][j] = int(w) % N
        return FiniteQuadraticForm(tuple(orders), tuple(qs), tuple(map(tuple, bs)), lifts)

    @property
    def exponent(self) -> int:
        return lcm(*self.orders) if self.orders else 1

    @property
    def size(self) -> int:
        return prod(self.orders)

    def zero(self) -> Element:
        return (0,) * len(self.orders)

    def elements(self) -> Iterable[Element]:
        return itertools.product(*(range(d) for d in self.orders))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def scale(self, k: int, x: Element) -> Element:
        return tuple((k * a) % d for a, d in zip(x, self.orders))

    def order(self, x: Element) -> int:
        o = 1
        for a, d in zip(x, self.orders):
            o = lcm(o, d // gcd(d, a))
        return o

    def q_int(self, x: Element) -> int:
        """N * q(x) reduced mod 2N."""
        N = self.exponent
        s = 0
        k = len(x)
        for i in range(k):
            xi = x[i]
            if not xi:
                continue
            s += xi * xi * self.q_scaled[i]
            row = self.b_scaled[i]
            for j in range(i + 1, k):
                if x[j]:
                    s += 2 * xi * x[j] * row[j]
        return s % (2 * N)

    def b_int(self, x: Element, y: Element) -> int:
        N = self.exponent
        s = 0
        for i, xi in enumerate(x):
            if xi:
                row = self.b_scaled[i]
                s += xi * sum(row[j] * yj for j, yj in enumerate(y) if yj)
        return s % N

    def q(self, x: Element) -> Fraction:
        return Fraction(self.q_int(x), self.exponent)

    def b(self, x: Element, y: Element) -> Fraction:
        return Fraction(self.b_int(x, y), self.exponent)

    def lift(self, x: Element) -> tuple[Fraction, ...]:
        """A representative of x in the dual lattice (lattice coordinates)."""
        if self.lifts is None:
            raise ValueError("form carries no lattice lifts")
        r = len(self.lifts[0]) if self.lifts else 0
        v = [Fraction(0)] * r
        for a, g in zip(x, self.lifts):
            if a:
                for t in range(r):
                    v[t] += a * g[t]
        return tuple(v)

    def primary_part(self, p: int) -> "FiniteQuadraticForm":
        """The p-primary component, on the generators (d_i / p^a_i) g_i."""
        orders, gens = [], []
        for i, d in enumerate(self.orders):
            pa = 1
            while d % (pa * p) == 0:
                pa *= p
            if pa > 1:
                orders.append(pa)
                gens.append(d // pa)
        N = self.exponent
        gram = [[Fraction(gens[a] * gens[b] * self._b_raw(ia, ib), N)
                 for b, ib in enumerate(self._indices_with(p))]
                for a, ia in enumerate(self._indices_with(p))]
        for a, ia in enumerate(self._indices_with(p)):
            gram[a][a] = Fraction(gens[a] * gens[a] * self.q_scaled[ia], N)
        return FiniteQuadraticForm.from_gram(orders, gram)

    def _indices_with(self, p: int) -> list[int]:
        return [i for i, d in enumerate(self.orders) if d % p == 0]

    def _b_raw(self, i: int, j: int) -> int:
        return self.b_scaled[i][j]

    @cached_property
    def primes(self) -> tuple[int, ...]:
        ps = set()
        for d in self.orders:
            ps.update(_prime_factors(d))
        return tuple(sorted(ps))

    def value_profile(self) -> tuple:
        """Multiset of (order, q) over all elements; an isomorphism invariant."""
        counts: dict[tuple[int, Fraction], int] = {}
        for x in self.elements():
            key = (self.order(x), self.q(x))
            counts[key] = counts.get(key, 0) + 1
        return tuple(sorted(counts.items()))

    def canonical(self) -> dict:
        return {
            "orders": list(self.orders),
            "q": [str(self.q(e)) for e in _unit_vectors(len(self.orders))],
            "b": [[str(Fraction(x, self.exponent)) for x in row] for row in self.b_scaled],
        }

    def __str__(self) -> str:
        if not self.orders:
            return "trivial"
        grp = " x ".join(f"Z/{d}" for d in self.orders)
        qs = ", ".join(str(self.q(e)) for e in _unit_vectors(len(self.orders)))
        return f"{grp} with q(gens) = ({qs})"


def _unit_vectors(k: int) -> list[Element]:
    return [tuple(int(i == j) for j in range(k)) for i in range(k)]


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def discriminant_form(L: Lattice) -> FiniteQuadraticForm:
    """The discriminant group L*/L with its quadratic form mod 2Z."""
    require_nondegenerate(L)
    snf = intmat.smith_normal_form(L.gram)
    R = snf.right
    r = L.rank
    orders, lifts = [], []
    for i, d in enumerate(snf.diag):
        if d > 1:
            orders.append(d)
            lifts.append(tuple(Fraction(R[t][i], d) for t in range(r)))
    k = len(orders)
    gram = [[_rational_pair(L, lifts[a], lifts[b]) for b in range(k)] for a in range(k)]
    return FiniteQuadraticForm.from_gram(orders, gram, lifts=tuple(lifts))


def _rational_pair(L: Lattice, u, v) -> Fraction:
    return sum((u[i] * L.gram[i][j] * v[j] for i in range(len(u)) if u[i]
                for j in range(len(v)) if v[j]), Fraction(0))


def elements_of_order(Q: FiniteQuadraticForm, n: int) -> list[tuple[Element, Fraction]]:
    return [(x, Q.q(x)) for x in Q.elements() if Q.order(x) == n]


def isotropic_element_of_order(Q: FiniteQuadraticForm, n: int) -> Element | None:
    """Some element of exact order n with q(x) = 0 mod 2, or None."""
    for x in Q.elements():
        if Q.order(x) == n and Q.q_int(x) == 0:
            return x
    return None


def _span(Q: FiniteQuadraticForm, H: frozenset, x: Element) -> frozenset:
    out = set(H)
    y = x
    while y not in H:
        out.update(Q.add(h, y) for h in H)
        y = Q.add(y, x)
    return frozenset(out)


def subgroup_generators(Q: FiniteQuadraticForm, H: Iterable[Element]) -> list[Element]:
    """A small generating set, chosen greedily in lexicographic order."""
    gens: list[Element] = []
    span = frozenset([Q.zero()])
    for x in sorted(H):
        if x not in span:
            gens.append(x)
            span = _span(Q, span, x)
    return gens


def isotropic_subgroups(Q: FiniteQuadraticForm, bound: int = DEFAULT_GROUP_BOUND
                        ) -> list[frozenset]:
    """All subgroups on which q vanishes (trivial one included), canonically ordered."""
    if Q.size > bound:
        raise GroupTooLarge(f"|Q| = {Q.size} exceeds bound {bound}")
    iso = [x for x in Q.elements() if any(x) and Q.q_int(x) == 0]
    zero = frozenset([Q.zero()])
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for H in frontier:
            gens = subgroup_generators(Q, H)
            for x in iso:
                if x in H or any(Q.b_int(x, g) for g in gens):
                    continue
                H2 = _span(Q, H, x)
                if H2 not in seen:
                    seen.add(H2)
                    nxt.append(H2)
        frontier = nxt
    return sorted(seen, key=lambda H: (len(H), sorted(H)))


@dataclass(frozen=True)
class OverlatticeCert:
    index: int
    glue: tuple[Element, ...]
    result: Lattice
    # columns: new basis in old (rational) coordinates
    basis: tuple[tuple[Fraction, ...], ...] = field(compare=False, default=())

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "glue": [list(g) for g in self.glue],
            "gram": self.result.matrix(),
        }


def _overlattice_from_generators(L: Lattice, extra: Sequence[Sequence[Fraction]]
                                 ) -> tuple[Lattice, list[list[Fraction]]]:
    r = L.rank
    D = 1
    for v in extra:
        for a in v:
            D = lcm(D, Fraction(a).denominator)
    gens = [[D * int(i == j) for j in range(r)] for i in range(r)]
    gens += [[int(Fraction(a) * D) for a in v] for v in extra]
    rows = intmat.hnf_rows(gens, r)
    assert len(rows) == r
    B = [[Fraction(rows[j][i], D) for j in range(r)] for i in range(r)]  # columns = basis
    G = [[_rational_pair(L, [B[t][a] for t in range(r)], [B[t][b] for t in range(r)])
          for b in range(r)] for a in range(r)]
    for i in range(r):
        for j in range(r):
            if G[i][j].denominator != 1:
                raise NotIntegral("extension is not integral")
        if G[i][i].numerator % 2:
            raise NotEven("extension is not even")
    return Lattice([[int(x) for x in row] for row in G], label=None), B


def _maybe_reduce(M: Lattice, B):
    if M.rank and M.is_definite():
        R, T = reduce_definite(M)
        r = M.rank
        B2 = [[sum(B[i][k] * T[k][j] for k in range(r)) for j in range(r)] for i in range(r)]
        return R, B2
    return M, B


def even_overlattices(L: Lattice, bound: int = DEFAULT_GROUP_BOUND) -> list[OverlatticeCert]:
    """One certificate per nontrivial isotropic subgroup of the discriminant form."""
    require_nondegenerate(L)
    Q = discriminant_form(L)
    out = []
    for H in isotropic_subgroups(Q, bound):
        if len(H) == 1:
            continue
        glue = subgroup_generators(Q, H)
        M, B = _overlattice_from_generators(L, [Q.lift(g) for g in glue])
        M, B = _maybe_reduce(M, B)
        cert = OverlatticeCert(len(H), tuple(glue), M, tuple(map(tuple, B)))
        assert M.disc * cert.index ** 2 == L.disc
        out.append(cert)
    return out


def divide_vector(L: Lattice, w: Sequence[int], n: int, reduce: bool = True) -> Lattice:
    """The overlattice L[w/n] (must be even and integral)."""
    if n == 1:
        return L
    if not is_primitive(w):
        raise NotPrimitive(f"w = {tuple(w)} is not primitive")
    row = L.pairing_row(w)
    if any(a % n for a in row):
        raise NotIntegral(f"w/{n} pairs non-integrally with L")
    ww = L.norm(w)
    if ww % (n * n):
        raise NotIntegral(f"(w/{n})^2 is not an integer")
    if (ww // (n * n)) % 2:
        raise NotEven(f"(w/{n})^2 is odd")
    M, B = _overlattice_from_generators(L, [[Fraction(a, n) for a in w]])
    if reduce:
        M, B = _maybe_reduce(M, B)
    return M


def forms_isomorphic(A: FiniteQuadraticForm, B: FiniteQuadraticForm) -> bool:
    """Isomorphism of finite quadratic forms, p-part by p-part."""
    if A.size != B.size:
        return False
    if A.size == 1:
        return True
    if A.primes != B.primes:
        return False
    for p in A.primes:
        Ap, Bp = A.primary_part(p), B.primary_part(p)
        if sorted(Ap.orders) != sorted(Bp.orders):
            return False
        if Ap.value_profile() != Bp.value_profile():
            return False
        if find_isomorphism(Ap, Bp) is None:
            return False
    return True


def find_isomorphism(A: FiniteQuadraticForm, B: FiniteQuadraticForm
                     ) -> list[Element] | None:
    """Images in B of A's generators defining an isometry, found by backtracking."""
    if A.size != B.size:
        return None
    k = len(A.orders)
    NA, NB = A.exponent, B.exponent
    if NA != NB:
        return None
    buckets: dict[tuple[int, int], list[Element]] = {}
    for y in B.elements():
        buckets.setdefault((B.order(y), B.q_int(y)), []).append(y)
    gens = _unit_vectors(k)
    target = [(A.orders[i], A.q_int(gens[i])) for i in range(k)]
    images: list[Element] = []
    spans: list[frozenset] = [frozenset([B.zero()])]

    def rec(i):
        if i == k:
            return len(spans[-1]) == B.size
        for y in buckets.get(target[i], ()):
            if y in spans[-1]:
                continue
            if any(B.b_int(y, images[j]) != A.b_scaled[i][j] for j in range(i)):
                continue
            S = _span(B, spans[-1], y)
            if len(S) != len(spans[-1]) * A.orders[i]:
                continue
            images.append(y)
            spans.append(S)
            if rec(i + 1):
                return True
            images.pop()
            spans.pop()
        return False

    return list(images) if rec(0) else None

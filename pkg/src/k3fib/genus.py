"""Genus symbols (signature + discriminant form), isometry testing of definite
lattices, Kneser neighbours and single-class detection."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt


from . import intmat
from .errors import BadPrime, IndefiniteLattice, NotEven, NotIntegral
from .lattice import Lattice, reduce_definite, require_nondegenerate, rescale
from .quadform import FiniteQuadraticForm, discriminant_form, forms_isomorphic
from .shortvec import enumerate_short

log = logging.getLogger(__name__)

# Positive definite lattices of rank >= 11 never form a one-class genus
# (Lorch-Kirschmer classification of single-class genera); trusted, not re-derived.
SINGLE_CLASS_MAX_RANK = 10
DEFAULT_CLASS_CAP = 64
DEFAULT_LINE_BUDGET = 5_000


@dataclass(frozen=True, eq=False)
class GenusTag:
    signature: tuple[int, int]
    disc_form: FiniteQuadraticForm

    def __eq__(self, other) -> bool:
        if not isinstance(other, GenusTag):
            return NotImplemented
        return (self.signature == other.signature
                and forms_isomorphic(self.disc_form, other.disc_form))

    def __hash__(self) -> int:
        return hash((self.signature, self.disc_form.size))


def genus_tag(L: Lattice) -> GenusTag:
    require_nondegenerate(L)
    p, _, m = L.signature
    return GenusTag((p, m), discriminant_form(L))


def same_genus(A: Lattice, B: Lattice) -> bool:
    return A.rank == B.rank and A.disc == B.disc and genus_tag(A) == genus_tag(B)


# ---------------------------------------------------------------------------
# isometry testing

def _positive(L: Lattice) -> Lattice:
    if L.rank == 0:
        return L
    if not L.is_definite():
        raise IndefiniteLattice(f"{L.label or 'lattice'} is not definite")
    return rescale(L, -1, label=L.label) if L.is_negative_definite() else L


def _generating_short_vectors(G: list[list[int]]) -> list[tuple[int, ...]]:
    """Short vectors of a reduced positive definite Gram that generate the lattice."""
    r = len(G)
    M = max(G[i][i] for i in range(r))
    vecs = sorted(((v, n) for v, n in enumerate_short(G, M)), key=lambda p: (p[1], p[0]))
    chosen: list[tuple[int, ...]] = []
    span: list[list[int]] = []
    index = None
    for v, _ in vecs:
        rows = intmat.hnf_rows(span + [list(v)], r)
        if rows == span:
            continue
        chosen.append(v)
        span = rows
        index = _pivot_product(rows)
        if len(rows) == r and index == 1:
            break
    return chosen


def _pivot_product(rows: list[list[int]]) -> int:
    p = 1
    for row in rows:
        p *= next(a for a in row if a)
    return abs(p)


def _theta_counts(G, M) -> dict[int, int]:
    counts: dict[int, int] = {}
    for _, n in enumerate_short(G, M):
        counts[n] = counts.get(n, 0) + 1
    return counts


def is_isometric(A: Lattice, B: Lattice) -> list[list[int]] | None:
    """An integer matrix P with P^T gram_A P = gram_B, or None.

    Backtracking maps a generating set of short vectors of A onto vectors
    of B with the same norms and mutual inner products.
    """
    if A.rank != B.rank:
        return None
    if A.rank == 0:
        return []
    if not A.is_definite() or not B.is_definite():
        raise IndefiniteLattice("is_isometric needs definite lattices")
    if A.signature != B.signature or A.determinant != B.determinant:
        return None
    Ar, TA, gens, M, theta_A, gram_gens, idx, Ainv, TAinv = _prepare(_positive(A).gram)
    Br, TB = reduce_definite(_positive(B))
    GB = Br.matrix()
    cands: dict[int, list[tuple[tuple[int, ...], list[int]]]] = {}
    theta_B: dict[int, int] = {}
    for v, n in enumerate_short(GB, M):
        theta_B[n] = theta_B.get(n, 0) + 1
        for w in (v, tuple(-a for a in v)):
            cands.setdefault(n, []).append((w, intmat.matvec(GB, w)))
    if theta_A != theta_B:
        return None
    k = len(gens)
    images: list[tuple[int, ...]] = []

    def rec(i: int) -> bool:
        if i == k:
            return True
        need = gram_gens[i]
        for w, row in cands.get(need[i], ()):
            if all(sum(x * y for x, y in zip(row, images[j])) == need[j] for j in range(i)):
                images.append(w)
                if rec(i + 1):
                    return True
                images.pop()
        return False

    if not rec(0):
        return None
    # linear map X (Br coords of images of Ar's standard basis)
    Ymat = intmat.transpose([list(images[i]) for i in idx])
    X = intmat.matmul(Ymat, Ainv)
    if any(Fraction(x).denominator != 1 for row in X for x in row):
        return None
    X = [[int(x) for x in row] for row in X]
    # Xr^T Br Xr = Ar  ->  in original coordinates  (TB X TA^-1)^T B (..) = A
    full = intmat.matmul(intmat.matmul(TB, X), TAinv)
    P = intmat.integer_inverse(full)
    if intmat.congruent(A.gram, P) != B.matrix():
        return None
    return P


@lru_cache(maxsize=512)
def _prepare(gram):
    Ar, TA = reduce_definite(Lattice(gram))
    GA = Ar.matrix()
    gens = _generating_short_vectors(GA)
    M = max(Ar.norm(g) for g in gens)
    theta = _theta_counts(GA, M)
    gram_gens = [[Ar.pair(a, b) for b in gens] for a in gens]
    idx = _independent_prefix(gens, len(gram))
    Ainv = intmat.rational_inverse(intmat.transpose([list(gens[i]) for i in idx]))
    return Ar, TA, gens, M, theta, gram_gens, idx, Ainv, intmat.integer_inverse(TA)


def _independent_prefix(gens, r) -> list[int]:
    idx: list[int] = []
    rows: list[list[int]] = []
    for i, g in enumerate(gens):
        new = intmat.hnf_rows(rows + [list(g)], r)
        if len(new) > len(rows):
            idx.append(i)
            rows = new
        if len(idx) == r:
            break
    return idx


# ---------------------------------------------------------------------------
# Kneser neighbours

def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, isqrt(p) + 1))


def valid_primes(L: Lattice, count: int = 2) -> list[int]:
    """The first ``count`` odd primes not dividing disc(L)."""
    out, p = [], 3
    while len(out) < count:
        if _is_prime(p) and L.disc % p:
            out.append(p)
        p += 2
    return out


def _isotropic_lines(G: list[list[int]], p: int):
    """Normalised vectors v in F_p^r with v.v/2 == 0 mod p."""
    r = len(G)
    half = [[G[i][j] if i != j else G[i][i] // 2 for j in range(r)] for i in range(r)]

    def Q(v):
        s = 0
        for i in range(r):
            if v[i]:
                s += half[i][i] * v[i] * v[i]
                for j in range(i + 1, r):
                    if v[j]:
                        s += G[i][j] * v[i] * v[j]
        return s

    for lead in range(r):
        for tail in itertools.product(range(p), repeat=r - lead - 1):
            v = (0,) * lead + (1,) + tail
            if Q(v) % p == 0:
                yield list(v)


def line_count(rank: int, p: int) -> int:
    return (p ** rank - 1) // (p - 1)


def _neighbour(G: list[list[int]], p: int, v: list[int]) -> Lattice:
    r = len(G)
    Gv = intmat.matvec(G, v)
    j = next(i for i in range(r) if Gv[i] % p)
    inv = pow(Gv[j], -1, p)
    qv = sum(v[a] * Gv[a] for a in range(r)) // 2
    if qv % (p * p):
        c = (-(qv // p) * inv) % p
        v = list(v)
        v[j] += p * c
        Gv = intmat.matvec(G, v)
        qv = sum(v[a] * Gv[a] for a in range(r)) // 2
    assert qv % (p * p) == 0
    gens = []
    for i in range(r):
        if i == j:
            continue
        ci = (Gv[i] * inv) % p
        row = [0] * r
        row[i] = p
        row[j] = -p * ci
        gens.append(row)
    row = [0] * r
    row[j] = p * p
    gens.append(row)
    gens.append(list(v))
    rows = intmat.hnf_rows(gens, r)
    B = intmat.transpose(rows)  # columns = p * (new basis)
    GG = intmat.congruent(G, B)
    p2 = p * p
    for a in range(r):
        for b in range(r):
            if GG[a][b] % p2:
                raise NotIntegral("neighbour is not integral")
    N = [[x // p2 for x in row] for row in GG]
    if any(N[i][i] % 2 for i in range(r)):
        raise NotEven("neighbour is not even")
    return Lattice(N)


def kneser_neighbors(L: Lattice, p: int, check: bool = True) -> list[Lattice]:
    """All p-neighbours of a definite even lattice, reduced, in line order."""
    if not _is_prime(p) or p == 2:
        raise BadPrime(f"{p} is not an odd prime")
    if L.disc % p == 0:
        raise BadPrime(f"{p} divides disc = {L.disc}")
    sign = -1 if (L.rank and L.is_negative_definite()) else 1
    P = _positive(L)
    G = P.matrix()
    out = []
    tag = genus_tag(P) if check else None
    for v in _isotropic_lines(G, p):
        N = reduce_definite(_neighbour(G, p, v))[0]
        if check:
            assert genus_tag(N) == tag, "neighbour left the genus"
        out.append(rescale(N, -1) if sign < 0 else N)
    return out


# ---------------------------------------------------------------------------
# single-class test

@dataclass
class GenusVerdict:
    status: str  # "UniqueInGenus" | "NotUnique" | "Inconclusive"
    witness: Lattice | None = None
    reason: str = ""
    classes_found: list[Lattice] = field(default_factory=list)
    primes: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        d = {"status": self.status, "reason": self.reason,
             "classes_found": len(self.classes_found), "primes": self.primes}
        if self.witness is not None:
            d["witness"] = self.witness.matrix()
        return d


def _binary_forms(D: int) -> list[Lattice]:
    """Reduced positive definite even binary lattices [[2a,b],[b,2c]] with 4ac-b^2 = D."""
    out = []
    a = 1
    while 3 * a * a <= D:
        for b in range(0, a + 1):
            num = D + b * b
            if num % (4 * a) == 0:
                c = num // (4 * a)
                if c >= a:
                    out.append(Lattice([[2 * a, b], [b, 2 * c]]))
        a += 1
    return out


def unique_in_genus(W: Lattice, effort: int = DEFAULT_CLASS_CAP,
                    line_budget: int = DEFAULT_LINE_BUDGET) -> GenusVerdict:
    """Decide whether the definite even lattice W is alone in its genus."""
    if W.rank and not W.is_definite():
        raise IndefiniteLattice("unique_in_genus needs a definite lattice")
    if W.rank > SINGLE_CLASS_MAX_RANK:
        return GenusVerdict("NotUnique", None, reason="rank11-genus")
    sign = -1 if (W.rank and W.is_negative_definite()) else 1
    P = reduce_definite(_positive(W))[0]
    key = (P.gram, effort, line_budget)
    res = _unique_cached(key)
    classes = [rescale(C, -1) if sign < 0 else C for C in res.classes_found]
    witness = classes[1] if res.status == "NotUnique" and len(classes) > 1 else None
    return GenusVerdict(res.status, witness, res.reason, classes, list(res.primes))


@lru_cache(maxsize=256)
def _unique_cached(key) -> GenusVerdict:
    gram, effort, budget = key
    P = Lattice(gram)
    r = P.rank
    classes = [P]
    if r <= 1:
        return GenusVerdict("UniqueInGenus", None, "rank <= 1", classes, [])
    primes_used: list[int] = []
    notes = []

    def absorb(N: Lattice) -> bool:
        for C in classes:
            if is_isometric(C, N) is not None:
                return True
        classes.append(N)
        return len(classes) <= effort

    for i, p in enumerate(valid_primes(P, 2)):
        if line_count(r, p) > budget:
            if i == 0:
                return GenusVerdict("Inconclusive", None,
                                    f"p={p} neighbour graph exceeds line budget {budget}",
                                    classes, primes_used)
            notes.append(f"p={p} skipped (line budget)")
            continue
        k = 0
        while k < len(classes):
            for N in kneser_neighbors(classes[k], p, check=False):
                if not absorb(N):
                    return GenusVerdict("Inconclusive", None,
                                        f"class cap {effort} reached", classes, primes_used)
            k += 1
        primes_used.append(p)
    if r == 2:
        tag = genus_tag(P)
        for N in _binary_forms(P.disc):
            if genus_tag(N) == tag and not absorb(N):
                return GenusVerdict("Inconclusive", None, f"class cap {effort} reached",
                                    classes, primes_used)
        notes.append("binary forms enumerated")
    reason = "; ".join([f"neighbour closure at p={','.join(map(str, primes_used))}"] + notes)
    if len(classes) == 1:
        return GenusVerdict("UniqueInGenus", None, reason, classes, primes_used)
    return GenusVerdict("NotUnique", classes[1], reason, classes, primes_used)

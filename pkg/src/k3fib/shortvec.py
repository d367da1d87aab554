"""Short vector enumeration in definite lattices and ADE root systems."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, isqrt
from typing import Iterator, Sequence

from .errors import IndefiniteLattice
from .lattice import Lattice, Vector

try:  # gmpy2's rationals are much faster and behave like Fraction
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction


def _ldl(G: Sequence[Sequence[int]]):
    """Q(x) = sum_i d[i] * (x_i + sum_{j>i} mu[i][j] x_j)^2 for positive definite G."""
    n = len(G)
    A = [[_Q(x) for x in row] for row in G]
    d = [_Q(0)] * n
    mu = [[_Q(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = A[i][i]
        if d[i] <= 0:
            raise IndefiniteLattice("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = A[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                A[j][k] -= mu[i][j] * A[i][k]
                A[k][j] = A[j][k]
    return d, mu


def _floor_sqrt(q) -> int:
    """floor(sqrt(q)) for a non-negative rational q."""
    num, den = int(q.numerator), int(q.denominator)
    return isqrt(num * den) // den


def enumerate_short(G: Sequence[Sequence[int]], bound: int, half: bool = True
                    ) -> Iterator[tuple[Vector, int]]:
    """Yield (x, x^T G x) for nonzero x with x^T G x <= bound, G positive definite.

    With ``half`` only one vector of each pair {x, -x} is produced.
    """
    n = len(G)
    if n == 0:
        return
    d, mu = _ldl(G)
    bound_q = _Q(bound)
    x = [0] * n
    # levels run from n-1 down to 0
    center = [_Q(0)] * n
    budget = [_Q(0)] * (n + 1)
    budget[n] = bound_q

    def candidates(i):
        c = center[i]
        R = budget[i + 1]
        if R < 0:
            return range(0)
        s = _floor_sqrt(R / d[i]) + 1
        fl = floor(c)
        lo, hi = fl - s, fl + s + 1
        if half and all(v == 0 for v in x[i + 1:]):
            lo = max(lo, 0)
        return range(lo, hi + 1)

    def rec(i):
        c = center[i]
        R = budget[i + 1]
        di = d[i]
        for xi in candidates(i):
            t = xi - c
            rem = R - di * t * t
            if rem < 0:
                continue
            x[i] = xi
            if i == 0:
                if any(x):
                    yield tuple(x), int(bound_q - rem)
            else:
                budget[i] = rem
                center[i - 1] = -sum((mu[i - 1][j] * x[j] for j in range(i, n) if x[j]), _Q(0))
                yield from rec(i - 1)
        x[i] = 0

    center[n - 1] = _Q(0)
    yield from rec(n - 1)


def _canonical_sign(v: Vector) -> Vector:
    # lexicographically larger of v and -v, i.e. first nonzero coordinate positive
    for a in v:
        if a:
            return v if a > 0 else tuple(-b for b in v)
    return v


def _positive_form(L: Lattice, t: int) -> tuple[list[list[int]], int]:
    if L.rank == 0:
        return [], t
    if not L.is_definite():
        raise IndefiniteLattice(f"lattice {L.label or ''} is not definite".strip())
    if L.is_negative_definite():
        return [[-x for x in row] for row in L.gram], -t
    return L.matrix(), t


def short_vectors(L: Lattice, max_norm: int) -> list[tuple[Vector, int]]:
    """All sign-pair representatives with 0 < |v.v| <= |max_norm|, canonical order.

    For a negative definite lattice pass a negative ``max_norm``; returned
    norms carry the lattice's sign.
    """
    G, T = _positive_form(L, max_norm)
    if T <= 0 or not G:
        return []
    s = -1 if L.is_negative_definite() else 1
    out = [(_canonical_sign(v), s * nv) for v, nv in enumerate_short(G, T)]
    out.sort(key=lambda p: (abs(p[1]), tuple(-a for a in p[0])))
    return out


def vectors_of_norm(L: Lattice, t: int) -> list[Vector]:
    """Sign-pair representatives of all vectors with v.v == t, canonically ordered."""
    G, T = _positive_form(L, t)
    if T <= 0 or not G:
        return []
    vs = [_canonical_sign(v) for v, nv in enumerate_short(G, T) if nv == T]
    # lexicographically descending: the canonical representative is the larger one
    vs.sort(reverse=True)
    return vs


# ----------------------------------------------------------------------------
# Root systems

@dataclass(frozen=True)
class RootDecomposition:
    components: tuple[tuple[str, int], ...]
    simple_roots: tuple[Vector, ...] = field(default=(), compare=False)

    @property
    def total_rank(self) -> int:
        return sum(k for _, k in self.components)

    def name(self) -> str:
        if not self.components:
            return "0"
        parts = []
        for fam, k in sorted(set(self.components), key=_component_key):
            mult = self.components.count((fam, k))
            parts.append(f"{fam}{k}" + (f"^{mult}" if mult > 1 else ""))
        return "+".join(parts)


def _component_key(c):
    return ("ADE".index(c[0]), c[1])


def _positive_functional(roots: Sequence[Vector]):
    bound = 2 * max((abs(a) for r in roots for a in r), default=0) + 1
    n = len(roots[0]) if roots else 0
    weights = [bound ** (n - 1 - i) for i in range(n)]
    # lexicographic in disguise: f(v) == 0 only for v == 0 inside the coordinate box
    return lambda v: sum(w * a for w, a in zip(weights, v))


def simple_roots(L: Lattice, roots: Sequence[Vector]) -> list[Vector]:
    """Simple roots of the root system formed by ``roots`` (one per sign pair)."""
    if not roots:
        return []
    f = _positive_functional(roots)
    pos = [r if f(r) > 0 else tuple(-a for a in r) for r in roots]
    posset = set(pos)
    simple = []
    for a in pos:
        decomposable = False
        for b in pos:
            if b == a:
                continue
            c = tuple(x - y for x, y in zip(a, b))
            if c in posset:
                decomposable = True
                break
        if not decomposable:
            simple.append(a)
    simple.sort(key=lambda v: (f(v), v))
    return simple


def _classify_component(cartan: list[list[int]], idx: list[int]) -> tuple[str, int]:
    """ADE type of a connected simply-laced Dynkin diagram."""
    k = len(idx)
    adj = {i: [j for j in idx if j != i and cartan[i][j] != 0] for i in idx}
    for i in idx:
        for j in adj[i]:
            if cartan[i][j] != -1:
                raise ValueError("not a simply-laced Cartan matrix")
    edges = sum(len(v) for v in adj.values()) // 2
    if edges != k - 1:
        raise ValueError("Dynkin diagram is not a tree")
    degs = sorted(len(adj[i]) for i in idx)
    if k == 1 or degs[-1] <= 2:
        return ("A", k)
    branch = [i for i in idx if len(adj[i]) == 3]
    if len(branch) != 1 or degs[-1] > 3:
        raise ValueError("not an ADE diagram")
    b = branch[0]
    arms = []
    for start in adj[b]:
        length, prev, cur = 1, b, start
        while True:
            nxt = [j for j in adj[cur] if j != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return ("D", k)
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return ("E", k)
    raise ValueError(f"not an ADE diagram (arms {arms})")


def ade_type(L: Lattice, simple: Sequence[Vector]) -> tuple[tuple[str, int], ...]:
    n = len(simple)
    s = -1 if (L.rank and L.is_negative_definite()) else 1
    cartan = [[s * L.pair(simple[i], simple[j]) for j in range(n)] for i in range(n)]
    seen: set[int] = set()
    comps = []
    for i in range(n):
        if i in seen:
            continue
        stack, comp = [i], []
        seen.add(i)
        while stack:
            a = stack.pop()
            comp.append(a)
            for b in range(n):
                if b not in seen and cartan[a][b] != 0:
                    seen.add(b)
                    stack.append(b)
        comps.append(_classify_component(cartan, sorted(comp)))
    comps.sort(key=_component_key)
    return tuple(comps)


def roots(L: Lattice) -> list[Vector]:
    """Sign-pair representatives of the roots (norm -2, or +2 if positive definite)."""
    if L.rank == 0:
        return []
    t = -2 if L.is_negative_definite() else 2
    return vectors_of_norm(L, t)


def root_sublattice(N: Lattice) -> tuple[Lattice, RootDecomposition]:
    """Sublattice spanned by the roots, with its Gram in the simple-root basis."""
    if N.rank and not N.is_definite():
        raise IndefiniteLattice("root_sublattice needs a definite lattice")
    rs = roots(N)
    simple = simple_roots(N, rs)
    comps = ade_type(N, simple) if simple else ()
    gram = [[N.pair(a, b) for b in simple] for a in simple]
    return Lattice(gram, label=None), RootDecomposition(comps, tuple(simple))


def root_rank(N: Lattice) -> int:
    return root_sublattice(N)[1].total_rank


def is_root_overlattice(N: Lattice) -> bool:
    return root_rank(N) == N.rank


def cartan_lattice(family: str, k: int, sign: int = -1) -> Lattice:
    """The root lattice A_k, D_k or E_k with Gram sign*Cartan (negative definite by default)."""
    edges = _dynkin_edges(family, k)
    G = [[2 * sign if i == j else 0 for j in range(k)] for i in range(k)]
    for i, j in edges:
        G[i][j] = G[j][i] = -sign
    name = f"{family}{k}" + ("(neg)" if sign < 0 else "")
    return Lattice(G, label=name)


def _dynkin_edges(family: str, k: int) -> list[tuple[int, int]]:
    if family == "A" and k >= 1:
        return [(i, i + 1) for i in range(k - 1)]
    if family == "D" and k >= 4:
        return [(i, i + 1) for i in range(k - 2)] + [(k - 3, k - 1)]
    if family == "E" and k in (6, 7, 8):
        # chain 0..k-2 with the extra node attached to the third vertex
        return [(i, i + 1) for i in range(k - 2)] + [(2, k - 1)]
    raise ValueError(f"no root lattice {family}{k}")


def root_count(family: str, k: int) -> int:
    if family == "A":
        return k * (k + 1)
    if family == "D":
        return 2 * k * (k - 1)
    return {6: 72, 7: 126, 8: 240}[k]


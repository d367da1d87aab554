"""Slow, independent reference computations used to cross-check the library.

Nothing here imports k3fib; each oracle takes the most direct route.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import isqrt


def det_cofactor(M):
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        if M[0][j]:
            minor = [row[:j] + row[j + 1:] for row in M[1:]]
            total += (-1) ** j * M[0][j] * det_cofactor(minor)
    return total


def inverse_fraction(M):
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def charpoly(M):
    """Coefficients c_0..c_n of det(xI - M) via Faddeev-LeVerrier."""
    n = len(M)
    c = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        Mk = [[sum(Fraction(M[i][t]) * Mk[t][j] for t in range(n)) + (c[n - k + 1] if i == j else 0)
               for j in range(n)] for i in range(n)]
        AM = [[sum(Fraction(M[i][t]) * Mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        c[n - k] = -sum(AM[i][i] for i in range(n)) / k
    return c


def _sign_changes(seq):
    s = [x for x in seq if x != 0]
    return sum(1 for a, b in zip(s, s[1:]) if (a > 0) != (b > 0))


def signature_descartes(M):
    """(n+, n0, n-) of a symmetric matrix from its characteristic polynomial.

    All roots are real, so Descartes' rule of signs is exact.
    """
    c = charpoly(M)
    n = len(M)
    zero = next((i for i, x in enumerate(c) if x != 0), n)
    pos = _sign_changes(c[::-1])
    neg = _sign_changes([x * (-1) ** i for i, x in enumerate(c)][::-1])
    return pos, zero, neg


def box_vectors(G, t, box):
    """All v in [-box, box]^n with v.G.v = t, one per sign pair."""
    n = len(G)
    out = set()
    for v in itertools.product(range(-box, box + 1), repeat=n):
        if any(v) and sum(v[i] * G[i][j] * v[j] for i in range(n) for j in range(n)) == t:
            out.add(max(v, tuple(-x for x in v)))
    return out


def dual_box(G, t):
    """Coordinate bound |x_i| <= sqrt(t * (G^-1)_ii) for positive definite G."""
    Ginv = inverse_fraction(G)
    return max(isqrt(int(t * Ginv[i][i]) + 1) for i in range(len(G)))


def discriminant_elements(G):
    """Map from elements of L*/L (as fractional coordinate tuples) to q mod 2."""
    d = abs(det_cofactor(G))
    Ginv = inverse_fraction(G)
    n = len(G)
    out = {}
    for x in itertools.product(range(d), repeat=n):
        y = [sum(Ginv[i][j] * x[j] for j in range(n)) for i in range(n)]
        key = tuple(c - (c.numerator // c.denominator) for c in y)
        if key not in out:
            q = sum(x[i] * Ginv[i][j] * x[j] for i in range(n) for j in range(n))
            out[key] = q - 2 * (q.numerator // (2 * q.denominator))
    return out


def element_order(key):
    m = 1
    for c in key:
        m = m * c.denominator // _gcd(m, c.denominator)
    return m


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def orthogonal_sum_elements(blocks):
    """Elements of the discriminant group of a block-diagonal Gram matrix."""
    parts = [discriminant_elements(B) for B in blocks]
    out = {}
    for combo in itertools.product(*[list(p.items()) for p in parts]):
        key = tuple(c for k, _ in combo for c in k)
        q = sum(v for _, v in combo)
        out[key] = q - 2 * (q.numerator // (2 * q.denominator))
    return out


# ---------------------------------------------------------------------------
# extended Dynkin templates, matched structurally on induced subgraphs

def _induced(W, S):
    return [[W[i][j] for j in S] for i in S]


def _tree_shape(M):
    n = len(M)
    if any(M[i][j] not in (0, 1) for i in range(n) for j in range(n) if i != j):
        return None
    adj = [[j for j in range(n) if j != i and M[i][j]] for i in range(n)]
    if sum(len(a) for a in adj) != 2 * (n - 1):
        return None
    seen, stack = {0}, [0]
    while stack:
        for b in adj[stack.pop()]:
            if b not in seen:
                seen.add(b)
                stack.append(b)
    if len(seen) != n:
        return None
    return adj


def _arms(adj, centre):
    lengths = []
    for start in adj[centre]:
        prev, cur, k = centre, start, 1
        while len(adj[cur]) == 2:
            nxt = adj[cur][0] if adj[cur][1] == prev else adj[cur][1]
            prev, cur, k = cur, nxt, k + 1
        if len(adj[cur]) != 1:
            return None
        lengths.append(k)
    return sorted(lengths)


def template_kind(M):
    """Name of the extended Dynkin diagram M is, or None."""
    n = len(M)
    if n == 2 and M[0][1] == 2:
        return "A~1"
    if n >= 3 and all(M[i][j] in (0, 1) for i in range(n) for j in range(n) if i != j):
        deg = [sum(M[i][j] for j in range(n) if j != i) for i in range(n)]
        if all(d == 2 for d in deg):
            seen, stack = {0}, [0]
            while stack:
                a = stack.pop()
                for b in range(n):
                    if b != a and M[a][b] and b not in seen:
                        seen.add(b)
                        stack.append(b)
            if len(seen) == n:
                return f"A~{n - 1}"
    adj = _tree_shape(M)
    if adj is None or n < 5:
        return None
    deg = sorted(len(a) for a in adj)
    if n == 5 and deg == [1, 1, 1, 1, 4]:
        return "D~4"
    branch = [i for i in range(n) if len(adj[i]) == 3]
    if len(branch) == 2 and deg.count(1) == 4 and deg.count(2) == n - 6:
        # both branch vertices must carry two leaves
        if all(sum(1 for b in adj[c] if len(adj[b]) == 1) == 2 for c in branch):
            return f"D~{n - 1}"
    if len(branch) == 1 and max(deg) == 3:
        arms = _arms(adj, branch[0])
        return {(2, 2, 2): "E~6", (1, 3, 3): "E~7", (1, 2, 5): "E~8"}.get(tuple(arms or ()))
    return None


def all_extended_diagrams(W):
    """Exhaustive subset scan; returns sorted (kind, subset) pairs."""
    n = len(W)
    out = []
    for k in range(2, n + 1):
        for S in itertools.combinations(range(n), k):
            kind = template_kind(_induced(W, S))
            if kind:
                out.append((kind, S))
    return sorted(out, key=lambda t: (len(t[1]), t[1]))

"""Decision criteria for uniqueness of elliptic fibrations on K3 surfaces.

Each criterion is a deterministic *check* registered under a criterion id.
A check maps JSON-style inputs to a JSON-style outcome, so a certificate step
(criterion, inputs, outcome) can be replayed by running the check again.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Callable, Iterator, NamedTuple, Sequence

from . import intmat
from .errors import (
    GroupTooLarge,
    InvalidParams,
    NotHyperbolic,
    NotIsotropic,
    NotPrimitive,
)
from .genus import is_isometric, unique_in_genus, SINGLE_CLASS_MAX_RANK, DEFAULT_CLASS_CAP
from .lattice import (
    U,
    Lattice,
    Vector,
    direct_sum,
    divisibility,
    is_primitive,
    isotropic_quotient,
    orthogonal_complement,
    radical_quotient,
    reduce_definite,
)
from .quadform import (
    discriminant_form,
    divide_vector,
    even_overlattices,
    isotropic_element_of_order,
)
from .shortvec import RootDecomposition, cartan_lattice, enumerate_short, root_sublattice

DECISIVE = ("NoFibration", "Unique", "Multiple")
STATUSES = DECISIVE + ("Inconclusive",)
DEFAULT_SEARCH_BOUND = 10
# cap on vectors visited by one isotropic search
ENUMERATION_BUDGET = 200_000
OVER_EXCEPTIONAL_MAX_RANK = 17


# ---------------------------------------------------------------------------
# certificates

@dataclass
class Step:
    criterion: str
    inputs: dict
    outcome: dict
    nested: "Verdict | None" = None

    @property
    def status(self) -> str | None:
        if self.criterion == "prop41":
            if self.nested is not None and self.nested.status == "Multiple":
                return "Multiple"
            return None
        s = self.outcome.get("status")
        return s if s in DECISIVE else None

    def to_json(self) -> dict:
        d = {"criterion": self.criterion, "inputs": self.inputs, "outcome": self.outcome}
        if self.nested is not None:
            d["nested"] = self.nested.to_json()
        return d

    @staticmethod
    def from_json(d: dict) -> "Step":
        nested = Verdict.from_json(d["nested"]) if d.get("nested") else None
        return Step(d["criterion"], d["inputs"], d["outcome"], nested)


@dataclass
class Verdict:
    status: str
    certificate: list[Step] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"status": self.status, "certificate": [s.to_json() for s in self.certificate]}

    @staticmethod
    def from_json(d: dict) -> "Verdict":
        return Verdict(d["status"], [Step.from_json(s) for s in d["certificate"]])


CHECKS: dict[str, Callable[[dict], dict]] = {}


def check(criterion: str):
    def deco(fn):
        CHECKS[criterion] = fn
        return fn
    return deco


def _normal(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def run_step(criterion: str, **inputs) -> Step:
    inputs = json.loads(_normal(inputs))
    return Step(criterion, inputs, CHECKS[criterion](inputs))


def derived_status(steps: Sequence[Step]) -> str:
    for s in steps:
        if s.status is not None:
            return s.status
    return "Inconclusive"


def replay(verdict: Verdict) -> list[str]:
    """Re-run every step of a certificate; returns a list of mismatches (empty = ok)."""
    problems = []
    for i, step in enumerate(verdict.certificate):
        fn = CHECKS.get(step.criterion)
        if fn is None:
            problems.append(f"step {i}: unknown criterion {step.criterion!r}")
            continue
        again = fn(step.inputs)
        if _normal(again) != _normal(step.outcome):
            problems.append(f"step {i} ({step.criterion}): outcome differs on replay")
        if step.nested is not None:
            sub = replay(step.nested)
            problems += [f"step {i} nested: {p}" for p in sub]
            first = step.nested.certificate[0].inputs.get("gram") if step.nested.certificate else None
            if first != step.outcome.get("reduced"):
                problems.append(f"step {i}: nested verdict is for a different lattice")
    if derived_status(verdict.certificate) != verdict.status:
        problems.append(f"status {verdict.status} is not what the steps imply")
    return problems


# ---------------------------------------------------------------------------
# hyperbolic helpers

def require_hyperbolic(L: Lattice) -> None:
    p, z, m = L.signature
    if p != 1 or z != 0:
        raise NotHyperbolic(f"signature {(p, z, m)} is not (1, 0, {L.rank - 1})")


def positive_vector(L: Lattice) -> Vector:
    """A short vector h with h.h > 0 (small candidates first, then exact elimination)."""
    r = L.rank
    best = None
    cands = [tuple(int(i == a) for a in range(r)) for i in range(r)]
    for i, j in itertools.combinations(range(r), 2):
        for t in (1, -1, 2, -2):
            v = [0] * r
            v[i], v[j] = 1, t
            cands.append(tuple(v))
    for v in cands:
        n = L.norm(v)
        if n > 0 and (best is None or n < best[0]):
            best = (n, v)
    if best is not None:
        return best[1]
    return _positive_by_elimination(L)


def _positive_by_elimination(L: Lattice) -> Vector:
    # symmetric elimination, tracking rational basis vectors
    r = L.rank
    basis = [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]
    for _ in range(r):
        for b in basis:
            if _qnorm(L, b) > 0:
                den = 1
                for x in b:
                    den = den * x.denominator // gcd(den, x.denominator)
                v = [int(x * den) for x in b]
                g = intmat.vec_gcd(v)
                return tuple(a // g for a in v)
        b0 = next(b for b in basis if _qnorm(L, b) != 0)
        n0 = _qnorm(L, b0)
        basis = [[x - _qpair(L, b, b0) / n0 * y for x, y in zip(b, b0)]
                 for b in basis if b is not b0]
    raise NotHyperbolic("no vector of positive norm")


def _qpair(L, u, v):
    return sum(ui * g * vj for ui, row in zip(u, L.gram) for g, vj in zip(row, v))


def _qnorm(L, v):
    return _qpair(L, v, v)


def isotropic_vectors(L: Lattice, height: int, h: Vector | None = None,
                      budget: int = ENUMERATION_BUDGET) -> tuple[list[Vector], Vector, bool]:
    """All nonzero isotropic v with 0 < v.h <= height in a hyperbolic lattice.

    Uses the positive definite form P = 2 (Gh)(Gh)^T - (h.h) G, on which an
    isotropic v has P(v) = 2 (v.h)^2.  Returns (vectors sorted by height,
    h, complete) where complete is False if the visit budget ran out.
    """
    require_hyperbolic(L)
    if h is None:
        h = positive_vector(L)
    Gh = L.pairing_row(h)
    hh = L.norm(h)
    r = L.rank
    P = [[2 * Gh[i] * Gh[j] - hh * L.gram[i][j] for j in range(r)] for i in range(r)]
    out = []
    complete = True
    for k, (v, pv) in enumerate(enumerate_short(P, 2 * height * height)):
        if k >= budget:
            complete = False
            break
        if L.norm(v) != 0:
            continue
        ht = sum(a * b for a, b in zip(Gh, v))
        if ht < 0:
            v, ht = tuple(-a for a in v), -ht
        out.append((ht, v))
    out.sort(key=lambda t: (t[0], tuple(-a for a in t[1])))
    return [v for _, v in out], h, complete


def _isotropic_by_height(L: Lattice, bound: int):
    """Yield primitive isotropic vectors in order of height, one height layer at a time."""
    h = positive_vector(L)
    seen = set()
    for H in range(1, bound + 1):
        vs, _, complete = isotropic_vectors(L, H, h)
        for v in vs:
            if v not in seen and is_primitive(v):
                seen.add(v)
                yield v
        if not complete:
            return


# ---------------------------------------------------------------------------
# Shioda-Tate

def shioda_tate_infinite_stabilizer(Pic: Lattice, F: Sequence[int]) -> bool:
    """True iff rho - 2 exceeds the root rank of F^perp / <F>."""
    return _prop21(Pic, F)["infinite_stabilizer"]


def _prop21(Pic: Lattice, F) -> dict:
    Q = isotropic_quotient(Pic, F, reduce=True)
    rr = root_sublattice(Q)[1] if Q.rank else None
    root_rank = rr.total_rank if rr else 0
    return {"rho": Pic.rank, "quotient": Q.matrix(), "root_type": rr.name() if rr else "0",
            "root_rank": root_rank, "infinite_stabilizer": Pic.rank - 2 - root_rank > 0}


@check("prop21")
def _check_prop21(inp: dict) -> dict:
    return _prop21(Lattice(inp["gram"]), inp["F"])


# ---------------------------------------------------------------------------
# U + W splitting

@dataclass(frozen=True)
class Split:
    """Pic.transform(basis) == U + W; basis columns are e, f, then a basis of W."""

    W: Lattice
    basis: tuple[tuple[int, ...], ...]

    @property
    def e(self) -> Vector:
        return tuple(row[0] for row in self.basis)

    @property
    def f(self) -> Vector:
        return tuple(row[1] for row in self.basis)


def _bezout(a: Sequence[int]) -> list[int]:
    """Coefficients c with sum c_i a_i = gcd(a)."""
    g, coeffs = 0, [0] * len(a)
    for i, x in enumerate(a):
        if x == 0:
            continue
        if g == 0:
            g, coeffs = abs(x), [0] * len(a)
            coeffs[i] = 1 if x > 0 else -1
            continue
        # extended Euclid on (g, x)
        old_r, r, old_s, s, old_t, t = g, x, 1, 0, 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coeffs = [old_s * c for c in coeffs]
        coeffs[i] += old_t
        g = old_r
    return coeffs


def split_along(Pic: Lattice, e: Sequence[int]) -> Split:
    """Complete a primitive isotropic e of divisibility 1 to a splitting U + W."""
    e = list(e)
    row = Pic.pairing_row(e)
    if Pic.norm(e) != 0:
        raise NotIsotropic(f"e.e = {Pic.norm(e)}")
    if intmat.vec_gcd(row) != 1:
        raise InvalidParams("e must have divisibility 1")
    y = _bezout(row)
    t = -Pic.norm(y) // 2
    f = [a + t * b for a, b in zip(y, e)]
    _, E = orthogonal_complement(Pic, [e, f])
    Wraw = Pic.transform(E) if E and E[0] else Lattice([])
    W, T = reduce_definite(Wraw) if Wraw.rank else (Wraw, [])
    EW = intmat.matmul(E, T) if Wraw.rank else [[] for _ in range(Pic.rank)]
    basis = [[e[i], f[i]] + list(EW[i]) for i in range(Pic.rank)]
    assert Pic.transform(basis) == direct_sum(U, W)
    assert abs(intmat.det(basis)) == 1
    return Split(W, tuple(map(tuple, basis)))


def u_w_split(Pic: Lattice, search_bound: int = DEFAULT_SEARCH_BOUND) -> Split | None:
    """Find Pic = U + W from an isotropic vector of divisibility 1, searching by height."""
    require_hyperbolic(Pic)
    if Pic.rank < 2:
        return None
    for v in _isotropic_by_height(Pic, search_bound):
        if divisibility(Pic, v) == 1:
            return split_along(Pic, v)
    return None


def _verify_split(Pic: Lattice, basis) -> Lattice:
    basis = [list(r) for r in basis]
    if abs(intmat.det(basis)) != 1:
        raise InvalidParams("split basis is not unimodular")
    G = Pic.transform(basis).matrix()
    if G[0][:2] != [0, 1] or G[1][:2] != [1, 0] or any(G[0][2:]) or any(G[1][2:]):
        raise InvalidParams("split basis does not start with a hyperbolic plane")
    return Lattice([row[2:] for row in G[2:]])


# ---------------------------------------------------------------------------
# Prop 4.3 (and the rank-11 genus shortcut)

def overlattice_witness(split: Split, cert) -> dict:
    """The isotropic v = n u + w of divisibility >= n built from an overlattice of W."""
    W = split.W
    Q = discriminant_form(W)
    H = _subgroup_elements(Q, cert.glue)
    x = max(H, key=lambda el: (Q.order(el), el))
    n = Q.order(x)
    lift = Q.lift(x)
    w = [int(a * n) for a in lift]
    g = intmat.vec_gcd(w)
    w = [a // g for a in w]
    ww = W.norm(w)
    assert ww % (2 * n * n) == 0 and ww <= 0
    k = -ww // (2 * n * n)
    # u = e + k f has norm 2k
    coords = [n, n * k] + w
    v = intmat.matvec([list(r) for r in split.basis], coords)
    return {"n": n, "w": w, "k": k, "v": v, "index": cert.index}


def _subgroup_elements(Q, gens):
    H = {Q.zero()}
    frontier = [Q.zero()]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                s = Q.add(h, g)
                if s not in H:
                    H.add(s)
                    nxt.append(s)
        frontier = nxt
    return sorted(H)


def _prop43(Pic: Lattice, basis, infinite_aut: str, zero_entropy: str, effort: int) -> dict:
    W = _verify_split(Pic, basis)
    split = Split(W, tuple(map(tuple, basis)))
    out = {"W": W.matrix()}
    try:
        certs = even_overlattices(W)
    except GroupTooLarge as exc:
        out.update(status="Inconclusive", limit=str(exc))
        return out
    out["overlattices"] = len(certs)
    if certs:
        wit = overlattice_witness(split, certs[0])
        v = wit["v"]
        d = divisibility(Pic, v)
        assert Pic.norm(v) == 0 and is_primitive(v) and d % wit["n"] == 0
        out.update(glue=[list(g) for g in certs[0].glue], n=wit["n"], w=wit["w"],
                   v=v, divisibility=d, status="Multiple")
        return out
    gv = unique_in_genus(W, effort=effort)
    out["genus"] = gv.to_json()
    if gv.status == "NotUnique":
        out["status"] = "Multiple"
    elif gv.status == "Inconclusive":
        out["status"] = "Inconclusive"
    elif infinite_aut == "yes" and zero_entropy == "yes":
        out["status"] = "Unique"
    else:
        # (1) and (2) hold, but sufficiency needs the automorphism hypotheses
        out["status"] = "NoDecision"
    return out


@check("prop43")
def _check_prop43(inp: dict) -> dict:
    return _prop43(Lattice(inp["gram"]), inp["basis"], inp["infinite_aut"],
                   inp["zero_entropy"], inp["effort"])


@check("rank11-genus")
def _check_rank11(inp: dict) -> dict:
    W = _verify_split(Lattice(inp["gram"]), inp["basis"])
    ok = W.rank > SINGLE_CLASS_MAX_RANK and W.is_negative_definite()
    return {"W_rank": W.rank, "status": "Multiple" if ok else "NoDecision",
            "fact": "definite even lattices of rank >= 11 are never alone in their genus"}


def prop43_decide(Pic: Lattice, split: Split, infinite_aut: str = "yes",
                  zero_entropy: str = "yes", effort: int = DEFAULT_CLASS_CAP) -> Verdict:
    """Unique iff W is alone in its genus and has no even overlattice (under the flags)."""
    basis = [list(r) for r in split.basis]
    if split.W.rank > SINGLE_CLASS_MAX_RANK:
        step = run_step("rank11-genus", gram=Pic.matrix(), basis=basis)
    else:
        step = run_step("prop43", gram=Pic.matrix(), basis=basis, infinite_aut=infinite_aut,
                        zero_entropy=zero_entropy, effort=effort)
    return Verdict(derived_status([step]), [step])


# ---------------------------------------------------------------------------
# Prop 4.4

_FAMILIES = [("A", k) for k in range(1, 25)] + [("D", k) for k in range(4, 25)] + \
    [("E", 6), ("E", 7), ("E", 8)]


def ade_partitions(r: int) -> list[tuple[tuple[str, int], ...]]:
    """All multisets of ADE components with total rank r, in canonical order."""
    comps = sorted((c for c in _FAMILIES if c[1] <= r), key=lambda c: ("ADE".index(c[0]), c[1]))
    out = []

    def rec(start, left, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(comps)):
            c = comps[i]
            if c[1] <= left:
                rec(i, left - c[1], acc + [c])

    rec(0, r, [])
    out.sort()
    return out


def root_lattice(parts: Sequence[tuple[str, int]]) -> Lattice:
    name = RootDecomposition(tuple(parts)).name()
    return direct_sum(*[cartan_lattice(f, k) for f, k in parts], label=name)


def _overlattice_name(N: Lattice, R: Lattice, index: int) -> str:
    sub, dec = root_sublattice(N)
    if dec.total_rank == N.rank and sub.disc == N.disc:
        return dec.name()
    return f"{R.label}[{index}]"


@dataclass(frozen=True)
class RootOverlattice:
    lattice: Lattice
    disc: int
    name: str
    root: str
    index: int


@lru_cache(maxsize=64)
def enumerate_root_overlattices(r: int, disc_divisor_bound: int | None = None,
                                square_class: int | None = None) -> tuple[RootOverlattice, ...]:
    """ADE lattices of rank r and their even overlattices, up to isometry.

    With ``disc_divisor_bound`` only lattices whose disc divides it are kept;
    with ``square_class`` only root lattices R with square_class*disc(R) a
    perfect square are expanded (the ones that can give a square ratio).
    """
    if r < 1:
        raise InvalidParams("rank must be >= 1")
    found: list[RootOverlattice] = []
    for parts in ade_partitions(r):
        R = root_lattice(parts)
        if square_class is not None and not _is_square(square_class * R.disc):
            continue
        cands = [(R, R.label, 1)]
        for c in even_overlattices(R):
            cands.append((c.result, _overlattice_name(c.result, R, c.index), c.index))
        for N, name, idx in cands:
            if disc_divisor_bound is not None and disc_divisor_bound % N.disc:
                continue
            if any(F.disc == N.disc and is_isometric(F.lattice, N) is not None for F in found):
                continue
            found.append(RootOverlattice(N, N.disc, name, R.label, idx))
    return tuple(found)


def _is_square(x: int) -> bool:
    return x >= 0 and isqrt(x) ** 2 == x


def _prop44(Pic: Lattice) -> dict:
    rho = Pic.rank
    D = Pic.disc
    Q = discriminant_form(Pic)
    cands = []
    for N in enumerate_root_overlattices(rho - 2, D, D):
        ratio = Fraction(D, N.disc)
        if ratio.denominator != 1 or not _is_square(int(ratio)):
            continue
        n = isqrt(int(ratio))
        x = isotropic_element_of_order(Q, n)
        cands.append({"N": N.name, "gram": N.lattice.matrix(), "disc": N.disc, "n": n,
                      "isotropic": list(x) if x is not None else None})
    return {"rho": rho, "disc": D, "candidates": cands,
            "second_possible": any(c["isotropic"] is not None for c in cands)}


@check("prop44")
def _check_prop44(inp: dict) -> dict:
    try:
        out = _prop44(Lattice(inp["gram"]))
    except GroupTooLarge as exc:
        return {"limit": str(exc), "status": "NoDecision"}
    flags_ok = inp["infinite_aut"] == "yes" and inp["zero_entropy"] == "yes"
    out["status"] = "Unique" if flags_ok and not out["second_possible"] else "NoDecision"
    return out


def prop44_obstruction(Pic: Lattice) -> bool:
    """True when some root overlattice N of rank rho-2 passes both tests (second fibration possible)."""
    require_hyperbolic(Pic)
    if Pic.rank < 3:
        raise InvalidParams("needs Picard rank >= 3")
    return _prop44(Pic)["second_possible"]


# ---------------------------------------------------------------------------
# rank 2

def rank2_normal_form(L: Lattice) -> tuple[int, int, list[list[int]]] | None:
    """(n, k, P) with P^T G P = [[0,n],[n,-2k]], 1 <= k <= n; None if anisotropic."""
    require_hyperbolic(L)
    (a, b), (_, c) = L.gram
    s2 = b * b - a * c
    s = isqrt(s2)
    if s * s != s2:
        return None
    if a == 0:
        e = [1, 0]
    else:
        e = [-b + s, a]
        g = intmat.vec_gcd(e)
        e = [x // g for x in e]
    B = intmat.complete_to_basis(e)
    f = [B[0][1], B[1][1]]
    n = L.pair(e, f)
    if n < 0:
        f = [-x for x in f]
        n = -n
    c2 = L.norm(f) // 2
    k = (-c2) % n or n
    t = (-k - c2) // n
    f = [x + t * y for x, y in zip(f, e)]
    P = [[e[0], f[0]], [e[1], f[1]]]
    assert L.transform(P).matrix() == [[0, n], [n, -2 * k]]
    return n, k, P


def _rank2(n: int, k: int) -> dict:
    G = Lattice([[0, n], [n, -2 * k]])
    # v.v = 2y(nx - ky) = -2 forces y = +-1
    roots = []
    for y in (1, -1):
        num = y * (k - 1)  # n x = k y - 1/y and 1/y = y
        if num % n == 0:
            roots.append((num // n, y))
    roots = sorted({max(r, tuple(-a for a in r)) for r in roots}, reverse=True)
    g = gcd(k, n)
    rays = [(1, 0), (k // g, n // g)]
    h = (k + 1, 1)

    def orient(v):
        gg = intmat.vec_gcd(v)
        v = tuple(a // gg for a in v)
        return v if G.pair(v, h) > 0 else tuple(-a for a in v)

    parent = list(range(len(rays)))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for r in roots:
        for i, v in enumerate(rays):
            w = orient(tuple(a + G.pair(v, r) * b for a, b in zip(v, r)))
            j = rays.index(w)
            parent[find(i)] = find(j)
    orbits = len({find(i) for i in range(len(rays))})
    return {"n": n, "k": k, "rays": [list(v) for v in rays], "roots": [list(r) for r in roots],
            "orbits": orbits, "status": "Unique" if orbits == 1 else "Multiple"}


@check("rank2")
def _check_rank2(inp: dict) -> dict:
    if "gram" in inp:
        nf = rank2_normal_form(Lattice(inp["gram"]))
        if nf is None:
            return {"status": "NoFibration", "isotropic": False}
        n, k, P = nf
        out = _rank2(n, k)
        out["basis"] = P
        return out
    return _rank2(inp["n"], inp["k"])


def rank2_classify(n: int, k: int) -> Verdict:
    """Fibrations on [[0,n],[n,-2k]]: Weyl-orbits of the two isotropic rays."""
    if n <= 0 or k <= 0:
        raise InvalidParams(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    step = run_step("rank2", n=n, k=k)
    return Verdict(step.outcome["status"], [step])


# ---------------------------------------------------------------------------
# Prop 4.1 reduction, isotropic existence, twists, over-exceptional lattice

def reduce_by_divisibility(Pic: Lattice, F: Sequence[int]) -> Lattice:
    """Divide a primitive isotropic F by its divisibility m >= 2."""
    if Pic.norm(F) != 0:
        raise NotIsotropic(f"F.F = {Pic.norm(F)}")
    if not is_primitive(F):
        raise NotPrimitive(f"F = {tuple(F)} is not primitive")
    m = divisibility(Pic, F)
    if m < 2:
        raise InvalidParams("F has divisibility 1; nothing to divide")
    return divide_vector(Pic, F, m, reduce=False)


def isotropic_with_divisibility(Pic: Lattice, bound: int = DEFAULT_SEARCH_BOUND):
    """First primitive isotropic vector (by height) of divisibility >= 2, or None."""
    for v in _isotropic_by_height(Pic, bound):
        if divisibility(Pic, v) >= 2:
            return v
    return None


@check("prop41")
def _check_prop41(inp: dict) -> dict:
    Pic = Lattice(inp["gram"])
    F = inp["F"]
    R = reduce_by_divisibility(Pic, F)
    return {"divisibility": divisibility(Pic, F), "reduced": R.matrix()}


@dataclass(frozen=True)
class IsotropicSearch:
    status: str  # Found | NotFoundWithinBound | AlwaysByRank
    vector: Vector | None = None


def exists_isotropic_vector(L: Lattice, bound: int = DEFAULT_SEARCH_BOUND) -> IsotropicSearch:
    r = L.rank
    if r == 0:
        return IsotropicSearch("NotFoundWithinBound")
    if L.degenerate:
        v = intmat.kernel_basis(L.matrix(), r)[0]
        return IsotropicSearch("Found", tuple(v))
    p, _, m = L.signature
    if p == 0 or m == 0:
        return IsotropicSearch("NotFoundWithinBound")
    if r == 2:
        (a, b), (_, c) = L.gram
        s2 = b * b - a * c
        s = isqrt(s2)
        if s * s != s2:
            return IsotropicSearch("NotFoundWithinBound")
        e = [1, 0] if a == 0 else [-b + s, a]
        g = intmat.vec_gcd(e)
        return IsotropicSearch("Found", tuple(x // g for x in e))
    found = None
    if p == 1 or m == 1:
        S = L if p == 1 else Lattice([[-x for x in row] for row in L.gram])
        found = next(iter(_isotropic_by_height(S, bound)), None)
    else:
        found = _box_isotropic(L, bound)
    if r >= 5:
        return IsotropicSearch("AlwaysByRank", found)
    return IsotropicSearch("Found", found) if found else IsotropicSearch("NotFoundWithinBound")


def _box_isotropic(L: Lattice, bound: int, cap: int = 4) -> Vector | None:
    b = min(bound, cap)
    for R in range(1, b + 1):
        for v in itertools.product(range(-R, R + 1), repeat=L.rank):
            if max(map(abs, v)) == R and L.norm(v) == 0 and is_primitive(v):
                return v
    return None


@check("isotropic")
def _check_isotropic(inp: dict) -> dict:
    L = Lattice(inp["gram"])
    res = exists_isotropic_vector(L, inp["bound"])
    out = {"result": res.status, "vector": list(res.vector) if res.vector else None}
    if res.status == "NotFoundWithinBound" and L.rank == 2:
        out["status"] = "NoFibration"  # the square test is exact in rank 2
    return out


@check("meyer")
def _check_meyer(inp: dict) -> dict:
    L = Lattice(inp["gram"])
    ok = L.rank >= 5 and not L.is_definite() and not L.degenerate
    return {"rank": L.rank, "indefinite": ok,
            "fact": "indefinite rational forms of rank >= 5 are isotropic"}


@check("rank1")
def _check_rank1(inp: dict) -> dict:
    L = Lattice(inp["gram"])
    iso = L.rank == 1 and L.gram[0][0] == 0
    return {"rank": L.rank, "isotropic": iso,
            "status": "NoFibration" if L.rank == 1 and not iso else "NoDecision"}


@dataclass(frozen=True)
class ShaClass:
    order: int
    jacobian_disc: int
    base: str = "J"

    def __post_init__(self):
        if self.order < 1:
            raise InvalidParams(f"order must be >= 1, got {self.order}")

    @property
    def picard_disc(self) -> int:
        return self.order ** 2 * self.jacobian_disc


@dataclass(frozen=True)
class MultiplyBy:
    n: int


@dataclass(frozen=True)
class PDivide:
    p: int


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, isqrt(p) + 1))


def twist_arithmetic(c: ShaClass, op: MultiplyBy | PDivide) -> ShaClass:
    """Order bookkeeping for multiples and p-th roots of a Tate-Shafarevich class."""
    if isinstance(op, MultiplyBy):
        return ShaClass(c.order // gcd(c.order, op.n), c.jacobian_disc, c.base)
    if isinstance(op, PDivide):
        if not _is_prime(op.p):
            raise InvalidParams(f"{op.p} is not prime")
        return ShaClass(op.p * c.order, c.jacobian_disc, c.base)
    raise InvalidParams(f"unknown twist operation {op!r}")


class OverExceptional(NamedTuple):
    lattice: Lattice
    rank: int
    root_rank: int


def over_exceptional_from_fibrations(Pic: Lattice, fibs: Sequence[Sequence[int]]
                                     ) -> OverExceptional:
    """Sublattice orthogonal to all given fibration classes, with its rank and root rank."""
    for F in fibs:
        if Pic.norm(F) != 0:
            raise NotIsotropic(f"F = {tuple(F)} has F.F = {Pic.norm(F)}")
        if not is_primitive(F):
            raise NotPrimitive(f"F = {tuple(F)} is not primitive")
    comp, _ = orthogonal_complement(Pic, [list(F) for F in fibs])
    distinct = {tuple(F) for F in fibs}
    if comp.rank == 0:
        return OverExceptional(comp, 0, 0)
    Q, _ = radical_quotient(comp)
    root_rank = root_sublattice(Q)[1].total_rank if Q.rank and Q.is_definite() else 0
    if len(distinct) >= 2:
        assert comp.rank <= OVER_EXCEPTIONAL_MAX_RANK, "over-exceptional rank exceeds 17"
    return OverExceptional(comp, comp.rank, root_rank)


def iter_checks() -> Iterator[str]:
    return iter(sorted(CHECKS))

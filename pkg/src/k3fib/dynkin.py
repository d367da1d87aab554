"""Extended Dynkin diagrams in dual graphs of (-2)-curves, and fibration counting.

A connected set of (-2)-curves supports a reducible fiber exactly when the
negated intersection matrix is positive semidefinite with a one-dimensional
kernel; the primitive positive kernel vector gives the fiber multiplicities.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from . import intmat
from .errors import GraphTooLarge, InconsistentGrouping, LatticeError, NotSymmetric
from .lattice import Lattice

MAX_VERTICES = 24

# max multiplicity and vertex count identify the affine type
_E_TYPES = {(3, 7): "E~6", (4, 8): "E~7", (6, 9): "E~8"}


@dataclass(frozen=True)
class DualGraph:
    vertices: tuple[str, ...]
    weights: tuple[tuple[int, ...], ...]
    label: str | None = None

    def __post_init__(self):
        n = len(self.vertices)
        W = self.weights
        if len(W) != n or any(len(r) != n for r in W):
            raise NotSymmetric(f"weights must be {n}x{n}")
        for i in range(n):
            if W[i][i] != -2:
                raise LatticeError(f"vertex {self.vertices[i]!r} has self-intersection {W[i][i]}, not -2")
            for j in range(i + 1, n):
                if W[i][j] != W[j][i]:
                    raise NotSymmetric(f"weights[{i}][{j}] != weights[{j}][{i}]")
                if W[i][j] < 0:
                    raise LatticeError(f"negative intersection between {self.vertices[i]!r} "
                                       f"and {self.vertices[j]!r}")

    @staticmethod
    def make(vertices: Sequence[str], weights: Sequence[Sequence[int]], label=None) -> "DualGraph":
        return DualGraph(tuple(vertices), tuple(tuple(int(x) for x in r) for r in weights), label)

    @staticmethod
    def from_edges(n: int, edges: Sequence[tuple[int, int, int]] | Sequence[tuple[int, int]],
                   label=None) -> "DualGraph":
        W = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
        for e in edges:
            i, j = e[0], e[1]
            w = e[2] if len(e) > 2 else 1
            W[i][j] = W[j][i] = w
        return DualGraph.make([f"C{i}" for i in range(n)], W, label)

    @property
    def size(self) -> int:
        return len(self.vertices)

    def neighbours(self, i: int) -> list[int]:
        return [j for j in range(self.size) if j != i and self.weights[i][j]]

    def dot(self, x: Sequence[int], y: Sequence[int]) -> int:
        return sum(a * w * b for a, row in zip(x, self.weights) if a for w, b in zip(row, y))

    def to_json(self) -> dict:
        return {"label": self.label, "vertices": list(self.vertices),
                "weights": [list(r) for r in self.weights]}


def graph_from_json(obj: dict | str) -> DualGraph:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return DualGraph.make(obj["vertices"], obj["weights"], obj.get("label"))


@dataclass(frozen=True)
class ExtendedDiagram:
    kind: str
    vertices: tuple[int, ...]
    multiplicities: tuple[int, ...]

    def to_json(self, G: DualGraph | None = None) -> dict:
        names = [G.vertices[i] for i in self.vertices] if G else list(self.vertices)
        return {"kind": self.kind, "vertices": names, "multiplicities": list(self.multiplicities)}


def _sub(G: DualGraph, S: Sequence[int]) -> list[list[int]]:
    return [[G.weights[i][j] for j in S] for i in S]


def _kind(M: list[list[int]], mult: list[int]) -> str:
    m = len(mult)
    top = max(mult)
    if top == 1:
        return f"A~{m - 1}"
    if top == 2:
        return f"D~{m - 1}"
    return _E_TYPES[(top, m)]


def _check_template(M: list[list[int]], kind: str) -> None:
    """Structural check of the induced subgraph against the affine template."""
    m = len(M)
    adj = [[j for j in range(m) if j != i and M[i][j]] for i in range(m)]
    edges = sum(len(a) for a in adj) // 2
    if kind == "A~1":
        assert m == 2 and M[0][1] == 2
        return
    assert all(M[i][j] in (0, 1) for i in range(m) for j in range(m) if i != j)
    if kind.startswith("A~"):
        assert edges == m and all(len(a) == 2 for a in adj)
    else:
        assert edges == m - 1


def find_extended_diagrams(G: DualGraph) -> list[ExtendedDiagram]:
    """All vertex subsets inducing an affine ADE diagram, in canonical order."""
    n = G.size
    if n > MAX_VERTICES:
        raise GraphTooLarge(f"{n} vertices exceeds the limit of {MAX_VERTICES}")
    found = []
    seen: set[frozenset] = set()
    frontier = [frozenset([i]) for i in range(n)]
    seen.update(frontier)
    while frontier:
        nxt = []
        for S in frontier:
            for i in S:
                for j in G.neighbours(i):
                    if j in S:
                        continue
                    T = S | {j}
                    if T in seen:
                        continue
                    seen.add(T)
                    idx = sorted(T)
                    M = _sub(G, idx)
                    pos, zero, neg = Lattice([[-x for x in r] for r in M]).signature
                    if neg:
                        continue
                    if zero == 0:
                        nxt.append(T)  # finite type, may still grow
                    elif zero == 1:
                        found.append(_diagram(M, idx))
        frontier = nxt
    found.sort(key=lambda D: (len(D.vertices), D.vertices))
    return found


def _diagram(M: list[list[int]], idx: list[int]) -> ExtendedDiagram:
    k = intmat.kernel_basis(M, len(M))[0]
    if k[0] < 0:
        k = [-x for x in k]
    assert all(x > 0 for x in k)
    kind = _kind(M, k)
    _check_template(M, kind)
    D = ExtendedDiagram(kind, tuple(idx), tuple(k))
    # isotropy against its own components
    assert all(sum(M[i][j] * k[j] for j in range(len(k))) == 0 for i in range(len(k)))
    return D


def fiber_class(G: DualGraph, D: ExtendedDiagram) -> list[int]:
    F = [0] * G.size
    for v, m in zip(D.vertices, D.multiplicities):
        F[v] = m
    assert G.dot(F, F) == 0
    return F


def count_fibrations(G: DualGraph) -> tuple[int, list[list[int]]]:
    """Group diagrams with F_i.F_j == 0 into fibrations; returns (count, groups)."""
    diagrams = find_extended_diagrams(G)
    F = [fiber_class(G, D) for D in diagrams]
    k = len(F)
    prod = [[G.dot(F[i], F[j]) for j in range(k)] for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            if prod[i][j] < 0:
                raise InconsistentGrouping(f"diagrams {i} and {j} have F.F' = {prod[i][j]} < 0")
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            if prod[i][j] == 0:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    out = sorted(groups.values())
    for g in out:
        for a in g:
            for b in g:
                if prod[a][b] != 0:
                    raise InconsistentGrouping(
                        f"diagrams {a} and {b} are grouped together but F.F' = {prod[a][b]}")
    return len(out), out


def fiber_products(G: DualGraph) -> list[list[int]]:
    F = [fiber_class(G, D) for D in find_extended_diagrams(G)]
    return [[G.dot(a, b) for b in F] for a in F]

"""Named lattices used in examples, fixtures and tests."""

from __future__ import annotations

from .lattice import U, Lattice, diagonal, direct_sum
from .shortvec import cartan_lattice

L1 = Lattice([[0, 2, 0, 0],
              [2, -2, 0, 0],
              [0, 0, -4, -2],
              [0, 0, -2, -4]], label="L1")

L2 = Lattice([[0, 2, 0, 0, 0],
              [2, -2, 1, 0, 0],
              [0, 1, -2, 0, 0],
              [0, 0, 0, -4, -2],
              [0, 0, 0, -2, -4]], label="L2")


def A(k: int) -> Lattice:
    return cartan_lattice("A", k)


def D(k: int) -> Lattice:
    return cartan_lattice("D", k)


def E(k: int) -> Lattice:
    return cartan_lattice("E", k)


def rank2(n: int, k: int) -> Lattice:
    return Lattice([[0, n], [n, -2 * k]], label=f"P2({n},{k})")


def power(L: Lattice, k: int) -> Lattice:
    return direct_sum(*[L] * k, label=f"{L.label}^{k}")


def fixture_catalog() -> list[dict]:
    """Ten named Picard lattices covering every branch of the classifier."""
    yes = {"infinite_aut": "yes", "zero_entropy": "yes"}
    entries = [
        ("rank1-<2>", diagonal(2), {}),
        ("rank2-n3-k1", rank2(3, 1), {}),
        ("rank2-n5-k4", rank2(5, 4), {}),
        ("rank2-anisotropic", Lattice([[2, 1], [1, -2]]), {}),
        ("U+A2", direct_sum(U, A(2)), {}),
        ("U+<-4>", direct_sum(U, diagonal(-4)), {}),
        ("U+A1^4", direct_sum(U, power(A(1), 4)), {}),
        ("U+E8+E8", direct_sum(U, E(8), E(8)), {}),
        ("L1", L1, yes),
        ("L2", L2, yes),
    ]
    return [dict(label=lab, gram=L.matrix(), **flags) for lab, L, flags in entries]

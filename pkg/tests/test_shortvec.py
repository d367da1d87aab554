import pytest
from hypothesis import given, settings

from conftest import positive_even_gram
from oracles import box_vectors, dual_box
from k3fib.errors import IndefiniteLattice
from k3fib.lattice import U, Lattice, diagonal, direct_sum, rescale
from k3fib.named import A, D, E
from k3fib.shortvec import (
    is_root_overlattice,
    root_count,
    root_sublattice,
    roots,
    vectors_of_norm,
)


def test_vectors_of_norm_examples():
    assert len(vectors_of_norm(A(2), -2)) == 3
    assert len(vectors_of_norm(E(8), -2)) == 120
    assert vectors_of_norm(diagonal(-4), -2) == []
    with pytest.raises(IndefiniteLattice):
        vectors_of_norm(U, -2)


def test_sign_pair_representative_is_lex_larger():
    for v in vectors_of_norm(D(4), -2):
        assert tuple(v) >= tuple(-x for x in v)


def test_root_sublattice_examples():
    assert root_sublattice(diagonal(-4, -6))[1].total_rank == 0
    assert root_sublattice(Lattice([[-4, -2], [-2, -4]]))[1].total_rank == 0
    _, dec = root_sublattice(D(4))
    assert dec.name() == "D4" and dec.total_rank == 4
    _, dec = root_sublattice(direct_sum(A(2), A(1), E(6)))
    assert dec.name() == "A1+A2+E6" and dec.total_rank == 9


def test_is_root_overlattice_examples():
    assert is_root_overlattice(A(2))
    assert not is_root_overlattice(diagonal(-4))
    assert not is_root_overlattice(Lattice([[-2, 1, 0], [1, -2, 0], [0, 0, -8]]))


@pytest.mark.parametrize("family,k", [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("D", 4)])
def test_root_counts_match_box_oracle(family, k):
    L = {"A": A, "D": D}[family](k)
    P = rescale(L, -1).matrix()
    found = box_vectors(P, 2, dual_box(P, 2))
    assert 2 * len(found) == root_count(family, k) == 2 * len(roots(L))


def test_root_count_formulas():
    # roots() lists one vector per sign pair
    for n in range(1, 9):
        assert 2 * len(roots(A(n))) == n * (n + 1)
    for n in range(4, 8):
        assert 2 * len(roots(D(n))) == 2 * n * (n - 1)
    assert [2 * len(roots(E(k))) for k in (6, 7, 8)] == [72, 126, 240]


def test_simple_root_cartan_matrix():
    _, dec = root_sublattice(E(7))
    S = dec.simple_roots
    L = E(7)
    C = [[-L.pair(a, b) for b in S] for a in S]
    assert all(C[i][i] == 2 for i in range(7))
    assert sum(1 for i in range(7) for j in range(i) if C[i][j] == -1) == 6


@given(positive_even_gram(max_rank=4))
@settings(max_examples=60, deadline=None)
def test_enumeration_complete_against_box(G):
    L = Lattice(G)
    t = min(G[i][i] for i in range(len(G))) + 2
    found = set(vectors_of_norm(L, t))
    assert found == box_vectors(G, t, dual_box(G, t))


@given(positive_even_gram(max_rank=4))
@settings(max_examples=40, deadline=None)
def test_root_sublattice_idempotent(G):
    N = rescale(Lattice(G), -1)
    R, dec = root_sublattice(N)
    if dec.total_rank:
        R2, dec2 = root_sublattice(R)
        assert dec2.components == dec.components

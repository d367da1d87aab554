import pytest
from hypothesis import given, settings, strategies as st

from conftest import congruent, positive_even_gram, unimodular
from k3fib.errors import BadPrime, IndefiniteLattice
from k3fib.genus import (
    genus_tag,
    is_isometric,
    kneser_neighbors,
    same_genus,
    unique_in_genus,
    valid_primes,
)
from k3fib.intmat import congruent as congruent_lib
from k3fib.lattice import U, Lattice, direct_sum, rescale
from k3fib.named import A, D, E, power
from k3fib.quadform import even_overlattices

# two lattice classes in one genus: the reduced forms of discriminant -23
P23 = Lattice([[2, 1], [1, 12]])
Q23 = Lattice([[4, 1], [1, 6]])


def test_genus_tag_examples():
    t = genus_tag(E(8))
    assert t.signature == (0, 8) and t.disc_form.size == 1
    assert genus_tag(power(A(1), 4)) != genus_tag(D(4))
    scrambled = A(2).transform([[2, 1], [1, 1]])
    assert genus_tag(scrambled) == genus_tag(A(2))


def test_is_isometric_examples():
    P = is_isometric(A(2), A(2).transform([[0, 1], [1, 0]]))
    assert P is not None
    assert is_isometric(power(A(1), 4), D(4)) is None
    D8glue = [c.result for c in even_overlattices(D(8)) if c.index == 2]
    assert any(is_isometric(M, E(8)) is not None for M in D8glue)
    with pytest.raises(IndefiniteLattice):
        is_isometric(U, U)


def test_is_isometric_distinguishes_genus_mates():
    assert same_genus(P23, Q23)
    assert is_isometric(P23, Q23) is None


def test_kneser_neighbors_small():
    # -3 is a non-square mod 5, so A2 has no isotropic line there
    assert kneser_neighbors(A(2), 5) == []
    for L, p in ((A(2), 7), (D(4), 3)):
        nbrs = kneser_neighbors(L, p)
        assert nbrs
        assert all(is_isometric(N, L) is not None for N in nbrs)
        assert all(genus_tag(N) == genus_tag(L) for N in nbrs)


def test_kneser_neighbors_e8():
    nbrs = kneser_neighbors(rescale(E(8), -1), 3)
    assert len(nbrs) == 1120
    assert all(is_isometric(N, rescale(E(8), -1)) is not None for N in nbrs[:40])


def test_bad_prime():
    with pytest.raises(BadPrime):
        kneser_neighbors(A(2), 3)
    with pytest.raises(BadPrime):
        kneser_neighbors(A(2), 2)
    assert valid_primes(A(2)) == [5, 7]


def test_unique_in_genus_examples():
    for L in (A(2), D(4), E(8)):
        assert unique_in_genus(L).status == "UniqueInGenus"
    v = unique_in_genus(direct_sum(E(8), A(2), A(1)))
    assert v.status == "NotUnique" and v.reason == "rank11-genus"


def test_unique_in_genus_finds_second_class():
    v = unique_in_genus(P23)
    assert v.status == "NotUnique"
    assert v.witness is not None
    assert same_genus(v.witness, P23) and is_isometric(v.witness, P23) is None


def test_unique_in_genus_effort_monotone():
    for L in (A(2), D(4), P23, power(A(1), 3)):
        final = unique_in_genus(L, effort=64).status
        for effort in (1, 2, 4, 16):
            s = unique_in_genus(L, effort=effort).status
            assert s in (final, "Inconclusive")


@given(positive_even_gram(max_rank=4), st.data())
@settings(max_examples=40, deadline=None)
def test_isometry_reflexive_symmetric(G, data):
    P = data.draw(unimodular(len(G)))
    A_, B_ = Lattice(G), Lattice(congruent(G, P))
    T = is_isometric(A_, B_)
    assert T is not None
    assert congruent_lib(A_.gram, T) == [list(r) for r in B_.gram]
    S = is_isometric(B_, A_)
    assert S is not None and congruent_lib(B_.gram, S) == [list(r) for r in A_.gram]


@given(positive_even_gram(max_rank=3))
@settings(max_examples=25, deadline=None)
def test_neighbours_share_genus(G):
    L = Lattice(G)
    p = valid_primes(L, 1)[0]
    if p > 7:
        return
    for N in kneser_neighbors(L, p)[:20]:
        assert genus_tag(N) == genus_tag(L)

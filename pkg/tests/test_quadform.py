from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import positive_even_gram
from oracles import det_cofactor, discriminant_elements, element_order, orthogonal_sum_elements
from k3fib.errors import GroupTooLarge, NotEven, NotIntegral
from k3fib.genus import is_isometric
from k3fib.intmat import rational_inverse, transpose
from k3fib.lattice import U, Lattice, diagonal, direct_sum, rescale
from k3fib.named import L1, L2, A, D, E, power
from k3fib.quadform import (
    discriminant_form,
    divide_vector,
    elements_of_order,
    even_overlattices,
    forms_isomorphic,
    isotropic_element_of_order,
    isotropic_subgroups,
)

L1_BLOCKS = [[[0, 2], [2, -2]], [[-4, -2], [-2, -4]]]
L2_BLOCKS = [[[0, 2, 0], [2, -2, 1], [0, 1, -2]], [[-4, -2], [-2, -4]]]


def test_discriminant_form_examples():
    assert discriminant_form(U).size == 1
    Q = discriminant_form(diagonal(-2))
    assert Q.orders == (2,) and Q.q((1,)) == Fraction(3, 2)
    Q = discriminant_form(A(2))
    assert Q.orders == (3,)
    assert sorted(Q.q(x) for x in Q.elements()) == [0, Fraction(4, 3), Fraction(4, 3)]


def test_group_order_equals_disc():
    for L in (L1, L2, A(3), D(5), power(A(1), 4)):
        assert discriminant_form(L).size == L.disc


def test_l1_l2_q_value_distribution_matches_oracle():
    # the oracle enumerates L*/L directly on each orthogonal block
    for L, blocks in ((L1, L1_BLOCKS), (L2, L2_BLOCKS)):
        Q = discriminant_form(L)
        oracle = orthogonal_sum_elements(blocks)
        assert len(oracle) == Q.size
        ours = sorted((Q.order(x), Q.q(x)) for x in Q.elements())
        theirs = sorted((element_order(k), v) for k, v in oracle.items())
        assert ours == theirs


def test_elements_of_order_examples():
    assert elements_of_order(discriminant_form(L1), 4) == []
    qs = {q for _, q in elements_of_order(discriminant_form(L2), 4)}
    assert qs and qs <= {Fraction(1, 2), Fraction(3, 2)}
    assert elements_of_order(discriminant_form(U), 2) == []


def test_l1_l2_group_structure_regression():
    # derived here and cross-checked by the block oracle above
    assert discriminant_form(L1).orders == (2, 2, 2, 6)
    assert discriminant_form(L2).orders == (2, 2, 24)


def test_isotropic_element_of_order_examples():
    assert isotropic_element_of_order(discriminant_form(L2), 4) is None
    assert isotropic_element_of_order(discriminant_form(power(A(1), 2)), 2) is None
    x = isotropic_element_of_order(discriminant_form(power(A(1), 4)), 2)
    assert x == (1, 1, 1, 1)


def test_isotropic_subgroups_examples():
    assert len(isotropic_subgroups(discriminant_form(U))) == 1
    assert len(isotropic_subgroups(discriminant_form(A(2)))) == 1
    subs = isotropic_subgroups(discriminant_form(power(A(1), 4)))
    assert len(subs) == 2


def test_isotropic_elements_of_a1_4():
    Q = discriminant_form(power(A(1), 4))
    iso = [x for x in Q.elements() if Q.q(x) == 0]
    assert iso == [(0, 0, 0, 0), (1, 1, 1, 1)]


def test_group_too_large():
    with pytest.raises(GroupTooLarge):
        isotropic_subgroups(discriminant_form(power(A(1), 6)), bound=32)


def test_even_overlattices_examples():
    assert even_overlattices(A(2)) == []
    certs = even_overlattices(power(A(1), 4))
    assert len(certs) == 1 and certs[0].index == 2
    assert is_isometric(certs[0].result, D(4)) is not None
    for c in even_overlattices(L1):
        assert c.result.disc * c.index ** 2 == 48


def test_d8_overlattice_is_e8():
    certs = [c for c in even_overlattices(D(8)) if c.index == 2]
    assert any(is_isometric(c.result, E(8)) is not None for c in certs)


def test_divide_vector_examples():
    M = divide_vector(power(A(1), 4), [1, 1, 1, 1], 2)
    assert M.disc == 4 and is_isometric(M, D(4)) is not None
    R = divide_vector(L2, [1, 0, 0, 0, 0], 2)
    assert R.rank == 5 and R.disc == 96 // 4
    assert divide_vector(L1, [0, 0, 1, 0], 1).gram == L1.gram
    with pytest.raises(NotIntegral):
        divide_vector(A(2), [1, 0], 2)
    with pytest.raises(NotEven):
        divide_vector(diagonal(-2, -2), [1, 1], 2)


def test_u_summand_does_not_change_form():
    for W in (A(2), power(A(1), 3), Lattice([[-4, -2], [-2, -4]])):
        assert forms_isomorphic(discriminant_form(direct_sum(U, W)), discriminant_form(W))


@given(positive_even_gram(max_rank=3), st.data())
@settings(max_examples=60, deadline=None)
def test_polarization_identity(G, data):
    Q = discriminant_form(Lattice(G))
    els = list(Q.elements())
    x = data.draw(st.sampled_from(els))
    y = data.draw(st.sampled_from(els))
    lhs = (Q.q(Q.add(x, y)) - Q.q(x) - Q.q(y)) % 2
    assert lhs == (2 * Q.b(x, y)) % 2
    assert Q.q(Q.scale(-1, x)) == Q.q(x)


@given(positive_even_gram(max_rank=3))
@settings(max_examples=40, deadline=None)
def test_form_matches_oracle(G):
    if abs(det_cofactor(G)) ** len(G) > 20_000:
        return
    Q = discriminant_form(Lattice(G))
    oracle = discriminant_elements(G)
    assert Q.size == len(oracle)
    assert sorted(Q.q(x) for x in Q.elements()) == sorted(oracle.values())


@given(positive_even_gram(max_rank=4))
@settings(max_examples=40, deadline=None)
def test_overlattice_certificates(G):
    L = rescale(Lattice(G), -1)
    Q = discriminant_form(L)
    if Q.size > 2000:
        return
    certs = even_overlattices(L)
    assert len(certs) == len(isotropic_subgroups(Q)) - 1
    for c in certs:
        M = c.result
        assert M.disc * c.index ** 2 == L.disc
        assert all(M.gram[i][i] % 2 == 0 for i in range(M.rank))
        # the old basis has integer coordinates in the new one
        Binv = rational_inverse(transpose([list(r) for r in c.basis]))
        assert all(x.denominator == 1 for row in Binv for x in row)

import numpy as np
import pytest

from spforge import kernel
from spforge.galois import field_create, field_of_order, frobenius, relative_trace, element_degree
from spforge.poly import poly_from_ints


@pytest.mark.parametrize("q", [2, 4, 9, 27, 64, 243, 263, 625])
def test_vector_arithmetic_matches_scalar(q):
    F = field_of_order(q)
    T = kernel.tables(F)
    rng = np.random.default_rng(q)
    a = rng.integers(0, q, 400)
    b = rng.integers(0, q, 400)
    assert list(T.add(a, b)) == [F.add(int(x), int(y)) for x, y in zip(a, b)]
    assert list(T.mul(a, b)) == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert list(T.neg(a)) == [F.neg(int(x)) for x in a]
    nz = a[a != 0]
    assert list(T.inv(nz)) == [F.inv(int(x)) for x in nz]


@pytest.mark.parametrize("q", [8, 81, 1024])
def test_exp_table_enumerates_multiplicative_group(q):
    T = kernel.tables(field_of_order(q))
    assert sorted(T.exp.tolist()) == list(range(1, q))
    assert all(T.log[T.exp[i]] == i for i in range(0, q - 1, 7))


@pytest.mark.parametrize("q,n", [(2, 4), (3, 2), (4, 3), (5, 2), (7, 2)])
def test_masks_match_scalar_definitions(q, n):
    big = field_of_order(q ** n)
    tr = kernel.trace_nonzero_mask(q, n)
    full = kernel.full_degree_mask(q, n)
    for x in big.elements():
        assert tr[x.code] == bool(relative_trace(x, q))
        assert full[x.code] == (element_degree(x, q) == n)


@pytest.mark.parametrize("q", [2, 4, 8, 1024, 3, 9, 27, 5, 25, 4096])
def test_reducible_masks_agree(q):
    F = field_of_order(q)
    assert (kernel.reducible_alpha_mask(F) == kernel.reducible_alpha_mask_by_discriminant(F)).all()


def test_frobenius_matrix_matches_scalar():
    F = field_create(3, 4)
    T = kernel.tables(F)
    img = T.apply(T.frobenius_matrix(1))
    packed = T.pack(img)
    assert [int(c) for c in packed] == [frobenius(x, 3).code for x in F.elements()]


def test_roots_in():
    big = field_of_order(25)
    f = poly_from_ints(5, [1, 4])  # x^2 + 4x + 1, irreducible over F_5
    roots = kernel.roots_in(f, big)
    assert len(roots) == 2
    assert kernel.roots_in(poly_from_ints(5, [4]), big) == [1]

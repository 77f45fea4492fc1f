import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import groups
from spforge import gsp, linalg as la
from spforge.errors import (CapExceeded, NotGSp, NotIndependent, NoTransvection,
                            NotSymplectic, OutsideTrichotomy, ZeroScalar, ZeroVector)
from spforge.poly import is_irreducible, is_symplectic, poly_from_ints


# -- oracles ------------------------------------------------------------------

def _padd(a, b, l):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return [x % l for x in out]


def _pmul(a, b, l):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return [x % l for x in out]


def cofactor_char_poly(M, l):
    """det(xI - M) by Laplace expansion along the first row; entries are
    polynomials given constant term first."""
    d = len(M)
    A = [[([-M[i][j] % l, 1] if i == j else [-M[i][j] % l]) for j in range(d)] for i in range(d)]

    def det(rows, cols):
        if len(rows) == 1:
            return A[rows[0]][cols[0]]
        acc = [0]
        for k, c in enumerate(cols):
            minor = det(rows[1:], cols[:k] + cols[k + 1:])
            term = _pmul(A[rows[0]][c], minor, l)
            if k % 2:
                term = [-x % l for x in term]
            acc = _padd(acc, term, l)
        return acc

    full = det(list(range(d)), list(range(d)))
    while len(full) > 1 and full[-1] == 0:
        full.pop()
    return full


def random_sp(space, rng, length=8):
    g = gsp.identity_element(space)
    for _ in range(length):
        v = [rng.randrange(space.ell) for _ in range(space.dim)]
        if not any(v):
            continue
        g = g @ gsp.make_transvection(space, v, rng.randrange(1, space.ell))
    return g


# -- multiplier -----------------------------------------------------------------

def test_multiplier_examples():
    s1 = gsp.SympSpace(3, 1)
    assert gsp.multiplier(la.identity(2), s1) == 1
    assert gsp.multiplier([[2, 0], [0, 1]], s1) == 2
    with pytest.raises(NotGSp):
        gsp.multiplier([[1, 1], [1, 1]], s1)


def test_multiplier_rejects_non_similitude():
    s2 = gsp.SympSpace(5, 2)
    with pytest.raises(NotGSp):
        gsp.multiplier([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], s2)
    with pytest.raises(NotGSp):
        gsp.multiplier([[1, 0], [0, 1]], s2)


def test_form_matrix():
    J = gsp.SympSpace(3, 2).J
    assert J == ((0, 0, 1, 0), (0, 0, 0, 1), (2, 0, 0, 0), (0, 2, 0, 0))
    assert la.transpose(J) == la.scale(J, -1, 3)


def test_element_rejects_wrong_multiplier():
    with pytest.raises(NotGSp):
        gsp.GSpElement(gsp.SympSpace(3, 1), ((2, 0), (0, 1)), 1)


def test_multiplier_is_multiplicative():
    space = gsp.SympSpace(5, 1)
    gens = groups.standard_unipotents(5) + [gsp.GSpElement.of([[2, 0], [0, 1]], space)]
    closure = gsp.group_closure(gens)
    assert len(closure) == gsp.gsp_order(1, 5) == 480
    rng = random.Random(7)
    for _ in range(200):
        g = closure.element(rng.randrange(len(closure)))
        h = closure.element(rng.randrange(len(closure)))
        gh = g @ h
        assert gsp.multiplier(gh.matrix, space) == g.multiplier * h.multiplier % 5


def test_gsp_element_of_2x2_is_det():
    space = gsp.SympSpace(7, 1)
    for M in ([[3, 1], [2, 5]], [[0, 6], [1, 0]], [[4, 0], [0, 4]]):
        assert gsp.multiplier(M, space) == la.det(M, 7)


# -- transvections ----------------------------------------------------------

def test_transvection_example():
    space = gsp.SympSpace(3, 1)
    T = gsp.make_transvection(space, (1, 0), 1)
    N = la.mat_sub(T.matrix, la.identity(2), 3)
    assert la.rank(N, 3) == 1
    assert la.is_zero(la.mat_mul(N, N, 3))
    assert T.multiplier == 1 and not T.is_identity()
    assert gsp.is_transvection(T)


def test_transvection_errors():
    space = gsp.SympSpace(3, 2)
    with pytest.raises(ZeroScalar):
        gsp.make_transvection(space, groups.E1, 0)
    with pytest.raises(ZeroScalar):
        gsp.make_transvection(space, groups.E1, 3)
    with pytest.raises(ZeroVector):
        gsp.make_transvection(space, (0, 0, 0, 0))


@pytest.mark.parametrize("ell,n", [(3, 1), (3, 2), (5, 2), (7, 1)])
def test_transvection_fixes_orthogonal_hyperplane(ell, n):
    space = gsp.SympSpace(ell, n)
    rng = random.Random(ell * 10 + n)
    for _ in range(10):
        v = tuple(rng.randrange(ell) for _ in range(space.dim))
        if not any(v):
            continue
        lam = rng.randrange(1, ell)
        T = gsp.make_transvection(space, v, lam)
        for x in itertools.product(range(ell), repeat=space.dim):
            px = space.pair(x, v)
            expected = tuple((xi + lam * px * vi) % ell for xi, vi in zip(x, v))
            assert T(x) == expected
            if px == 0:
                assert T(x) == x


def test_is_transvection_examples():
    space = gsp.SympSpace(3, 1)
    assert not gsp.is_transvection(gsp.identity_element(space))
    assert not gsp.is_transvection(gsp.GSpElement.of([[2, 0], [0, 2]], space))
    assert gsp.is_transvection(gsp.GSpElement.of([[1, 1], [0, 1]], space))


def test_transvection_mask_matches_scalar_predicate():
    closure = gsp.group_closure(groups.standard_unipotents(5))
    mask = closure.transvection_mask()
    assert list(mask) == [gsp.is_transvection(g) for g in closure]
    assert mask.sum() == 24  # 5^2 - 1 transvections in SL2(F5)


# -- characteristic polynomials ---------------------------------------------

def test_char_poly_examples():
    space = gsp.SympSpace(5, 1)
    f = poly_from_ints(5, [1, 4])  # x^2 - x + 1
    C = gsp.GSpElement.of(gsp.companion_matrix(f), space)
    assert gsp.char_poly(C) == f
    assert gsp.char_poly(gsp.identity_element(space)) == poly_from_ints(5, [1, 3])  # (x-1)^2


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5, 7, 11]), st.integers(1, 6), st.data())
def test_char_poly_matches_cofactor_expansion(ell, d, data):
    M = [[data.draw(st.integers(0, ell - 1)) for _ in range(d)] for _ in range(d)]
    f = gsp.char_poly_matrix(la.as_matrix(M, ell), ell)
    assert f.full == cofactor_char_poly(M, ell)


@pytest.mark.parametrize("ell", [3, 5])
def test_char_poly_symplectic_on_all_of_sl2(ell):
    closure = gsp.group_closure(groups.standard_unipotents(ell))
    assert len(closure) == gsp.sp_order(1, ell)
    for g in closure:
        assert is_symplectic(gsp.char_poly(g))


@pytest.mark.parametrize("ell,n", [(3, 2), (5, 2), (7, 2), (7, 1)])
def test_char_poly_symplectic_on_sampled_sp(ell, n):
    space = gsp.SympSpace(ell, n)
    rng = random.Random(ell + n)
    for _ in range(60):
        g = random_sp(space, rng)
        assert g.multiplier == 1
        assert is_symplectic(gsp.char_poly(g))


def test_char_poly_of_gsp_element_need_not_be_symplectic():
    g = gsp.GSpElement.of([[2, 0], [0, 1]], gsp.SympSpace(3, 1))
    assert not is_symplectic(gsp.char_poly(g))


# -- symplectic companion ------------------------------------------------------

def test_symplectic_companion_f5():
    space = gsp.SympSpace(5, 1)
    M = gsp.symplectic_companion(poly_from_ints(5, [1, 4]), space)
    assert M.multiplier == 1 and M.trace == 1
    assert la.det(M.matrix, 5) == 1


def test_symplectic_companion_f3_degree4():
    space = groups.SP4_3
    f = poly_from_ints(3, [1, 1, 1, 1])
    M = gsp.symplectic_companion(f, space)
    assert M.multiplier == 1
    assert cofactor_char_poly(M.matrix, 3) == f.full


def test_symplectic_companion_rejects_non_symplectic():
    with pytest.raises(NotSymplectic):
        gsp.symplectic_companion(poly_from_ints(3, [2, 1]), gsp.SympSpace(3, 1))


@pytest.mark.parametrize("q,two_n", [(5, 2), (5, 4), (7, 4), (7, 6), (11, 4), (13, 6)])
def test_symplectic_companion_round_trip(q, two_n):
    from spforge.poly import find_symplectic_irreducible

    f = find_symplectic_irreducible(q, two_n)
    M = gsp.symplectic_companion(f, gsp.SympSpace(q, two_n // 2))
    assert M.multiplier == 1
    assert cofactor_char_poly(M.matrix, q) == f.full


# -- closure and orders ----------------------------------------------------------

def test_closure_examples():
    assert len(gsp.group_closure(groups.standard_unipotents(3))) == 24
    ident = gsp.identity_element(gsp.SympSpace(3, 1))
    closure = gsp.group_closure([ident])
    assert len(closure) == 1 and ident in closure
    with pytest.raises(CapExceeded):
        gsp.group_closure(groups.full_sp4(), cap=1000)


def test_closure_cap_from_environment(monkeypatch):
    monkeypatch.setenv("FORGE_CAP", "20")
    with pytest.raises(CapExceeded):
        gsp.group_closure(groups.standard_unipotents(3))


@pytest.mark.parametrize("ell,size", [(3, 24), (5, 120), (7, 336)])
def test_standard_unipotents_generate_sl2(ell, size):
    closure = gsp.group_closure(groups.standard_unipotents(ell))
    assert len(closure) == size == gsp.sp_order(1, ell)
    assert closure.multiplier_one_count == size


def test_closure_is_closed_and_deterministic():
    gens = groups.standard_unipotents(5)
    a = gsp.group_closure(gens)
    b = gsp.group_closure(list(reversed(gens)))
    assert np.array_equal(a.matrices, b.matrices)
    keys = {tuple(m.flatten()) for m in a.matrices}
    for g in gens:
        for m in a.matrices:
            assert tuple(((m @ np.array(g.matrix)) % 5).flatten()) in keys


def test_orders_by_enumerating_all_2x2_over_f3():
    gl = sl = 0
    for a, b, c, d in itertools.product(range(3), repeat=4):
        det = (a * d - b * c) % 3
        gl += det != 0
        sl += det == 1
    assert (sl, gl) == (gsp.sp_order(1, 3), gsp.gsp_order(1, 3)) == (24, 48)
    # the same count straight from the similitude equation
    space = gsp.SympSpace(3, 1)
    count = 0
    for entries in itertools.product(range(3), repeat=4):
        try:
            gsp.multiplier([entries[:2], entries[2:]], space)
            count += 1
        except NotGSp:
            pass
    assert count == 48


def test_sp4_f3_order():
    assert gsp.sp_order(2, 3) == 51840
    assert len(gsp.group_closure(groups.full_sp4())) == 51840


def test_admissible_prime():
    assert gsp.admissible_prime(2, 5)
    assert not gsp.admissible_prime(5, 5)
    assert not gsp.admissible_prime(1, 3)
    assert gsp.admissible_prime(1, 7)


# -- subspaces and classification ------------------------------------------------

def test_nonsingular_subspace_examples():
    space = groups.SP4_3
    assert gsp.is_nonsingular_subspace(space, [groups.E1, groups.E3])
    assert not gsp.is_nonsingular_subspace(space, [groups.E1, groups.E2])
    assert gsp.is_nonsingular_subspace(space, [groups.E1, groups.E2, groups.E3, groups.E4])
    with pytest.raises(NotIndependent):
        gsp.is_nonsingular_subspace(space, [groups.E1, (2, 0, 0, 0)])


def test_classify_sl2_f3():
    result = gsp.classify_subgroup(groups.standard_unipotents(3))
    assert result.tag == gsp.CONTAINS_SP and result.witness == 24


def test_classify_plane_confined():
    gens = groups.plane_confined()
    result = gsp.classify_subgroup(gens)
    assert result.tag == gsp.REDUCIBLE
    assert la.subspace_key(result.witness, 3) == la.subspace_key([groups.E1, groups.E3], 3)
    assert gsp.validate_classification(result, gens)


def test_classify_plane_swap():
    gens = groups.plane_swap()
    result = gsp.classify_subgroup(gens)
    assert result.tag == gsp.IMPRIMITIVE
    blocks = sorted(la.subspace_key(B, 3) for B in result.witness)
    assert blocks == sorted([la.subspace_key([groups.E1, groups.E3], 3),
                             la.subspace_key([groups.E2, groups.E4], 3)])
    assert gsp.validate_classification(result, gens)


def test_classify_full():
    gens = groups.full_sp4()
    result = gsp.classify_subgroup(gens)
    assert result.tag == gsp.CONTAINS_SP and result.witness == 51840
    assert gsp.validate_classification(result, gens)


def test_tampered_witnesses_fail_validation():
    gens = groups.plane_confined()
    good = gsp.classify_subgroup(gens)
    bad = gsp.SubgroupClassification(gsp.REDUCIBLE, [list(groups.E2), list(groups.E4)],
                                     good.order, good.multiplier_one, good.expected_sp_order)
    assert gsp.validate_classification(bad, groups.full_sp4()) is False
    swap = groups.plane_swap()
    wrong_blocks = gsp.SubgroupClassification(
        gsp.IMPRIMITIVE, [[list(groups.E1), list(groups.E2)], [list(groups.E3), list(groups.E4)]],
        0, 0, 0)
    assert gsp.validate_classification(wrong_blocks, swap) is False
    fake_sp = gsp.SubgroupClassification(gsp.CONTAINS_SP, 51840, 24, 24, 51840)
    assert gsp.validate_classification(fake_sp, gens) is False


def test_classify_requires_transvection():
    space = gsp.SympSpace(5, 1)
    M = gsp.symplectic_companion(poly_from_ints(5, [1, 4]), space)
    with pytest.raises(NoTransvection):
        gsp.classify_subgroup([M])


def test_group_outside_the_three_cases_is_reported():
    gens = groups.isotropic_line_fixer()
    with pytest.raises(OutsideTrichotomy) as info:
        gsp.classify_subgroup(gens)
    W = info.value.witness
    assert la.subspace_key(W, 3) == ((1, 2, 0, 1),)
    for g in gens:
        assert la.subspace_key([g(w) for w in W], 3) == la.subspace_key(W, 3)
    assert gsp.find_invariant_subspace(groups.SP4_3, gens) is None
    assert gsp.find_imprimitive_decomposition(groups.SP4_3, gens) is None


def test_criterion_examples():
    space = gsp.SympSpace(5, 1)
    s = gsp.symplectic_companion(poly_from_ints(5, [1, 4]), space)
    t = gsp.make_transvection(space, (1, 0))
    closure = gsp.group_closure([s, t])
    assert gsp.criterion_check([s, t], closure=closure) == (True, True)
    assert closure.multiplier_one_count == 120
    assert gsp.classify_subgroup([s, t], closure=closure).tag == gsp.CONTAINS_SP
    assert gsp.criterion_check([gsp.identity_element(space)]) == (False, False)
    t3 = gsp.make_transvection(gsp.SympSpace(3, 1), (1, 0))
    closure = gsp.group_closure([t3])
    assert len(closure) == 3
    assert gsp.criterion_check([t3], closure=closure) == (True, False)


CRITERION_SETS = {
    "sl2_3": lambda: groups.standard_unipotents(3),
    "sl2_5": lambda: groups.standard_unipotents(5),
    "plane_confined": groups.plane_confined,
    "plane_swap": groups.plane_swap,
    "full": groups.full_sp4,
    "transvection_f3": lambda: [gsp.make_transvection(gsp.SympSpace(3, 1), (1, 0))],
    "gl2_5": lambda: groups.standard_unipotents(5) + [
        gsp.GSpElement.of([[2, 0], [0, 1]], gsp.SympSpace(5, 1))],
}


@pytest.mark.parametrize("name", sorted(CRITERION_SETS))
def test_criterion_implies_contains_sp(name):
    gens = CRITERION_SETS[name]()
    closure = gsp.group_closure(gens)
    has_t, has_s = gsp.criterion_check(gens, closure=closure)
    if has_t and has_s:
        result = gsp.classify_subgroup(gens, closure=closure)
        assert result.tag == gsp.CONTAINS_SP
        assert gsp.validate_classification(result, gens, closure=closure)


def test_irreducible_element_found_has_irreducible_char_poly():
    closure = gsp.group_closure(groups.full_sp4())
    i = closure.first_irreducible_nonzero_trace()
    g = closure.element(i)
    assert g.trace != 0 and is_irreducible(gsp.char_poly(g))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artinres.algebra import build_algebra, polynomial_element, quotient_from_polynomials
from artinres.errors import (
    BadUnit,
    ModulusError,
    NotAssociative,
    NotCommutative,
    NotFiniteDimensional,
    NotLocal,
)

import oracle
from conftest import ci, dual_numbers, square_zero, truncated


@pytest.mark.parametrize(
    "make, dim, e, socle, gor, hyp",
    [
        (dual_numbers, 2, 1, 1, True, True),
        (truncated, 4, 1, 1, True, True),
        (ci, 4, 2, 1, True, False),
        (square_zero, 3, 2, 2, False, False),
    ],
)
def test_profiles(make, dim, e, socle, gor, hyp):
    prof = make().profile
    assert (prof.dim, prof.embedding_dim, prof.socle_dim) == (dim, e, socle)
    assert prof.is_gorenstein is gor
    assert prof.is_hypersurface is hyp
    assert not prof.is_field


def test_field_profile():
    F = build_algebra(3, ["1"], [[[1]]], [1])
    prof = F.profile
    assert prof.is_field and prof.is_gorenstein and prof.is_hypersurface
    assert prof.embedding_dim == 0


def test_ci_socle_is_xy(CI):
    xy = polynomial_element(CI, "x*y")
    S = CI.socle
    assert S.shape[1] == 1
    assert oracle.rank(np.concatenate([S, xy.reshape(-1, 1)], axis=1), 3) == 1


def test_loewy_lengths(C4, B):
    assert C4.profile.loewy_length == 4
    assert B.profile.loewy_length == 2


def test_both_modes_agree():
    A = quotient_from_polynomials(2, ["x"], ["x^2"])
    D = dual_numbers()
    assert A.profile.as_dict() == D.profile.as_dict()
    assert np.array_equal(A.constants, D.constants)


def test_radical_is_nilpotent_and_matches_oracle(CI, B, C4):
    for A in (CI, B, C4):
        rad = A.radical
        orad, _ = oracle.radical_basis(A.constants, A.unit, A.p)
        assert rad.shape[1] == orad.shape[1] == A.dim - 1
        both = np.concatenate([rad, orad], axis=1)
        assert oracle.rank(both, A.p) == A.dim - 1
        for j in range(rad.shape[1]):
            L = A.element_matrix(rad[:, j])
            assert not np.any(np.linalg.matrix_power(L, A.dim) % A.p)


def test_unit_residue(CI):
    u = (CI.unit + polynomial_element(CI, "x + 2*x*y")) % 3
    assert CI.is_unit(u) and CI.residue(u) == 1
    assert not CI.is_unit(polynomial_element(CI, "y"))


@given(st.data())
@settings(max_examples=30, deadline=None)
def test_multiplication_commutative_associative(data):
    A = ci()
    v = [np.array(data.draw(st.lists(st.integers(0, 2), min_size=4, max_size=4))) for _ in range(3)]
    a, b, c = v
    assert np.array_equal(A.multiply(a, b), A.multiply(b, a))
    assert np.array_equal(A.multiply(A.multiply(a, b), c), A.multiply(a, A.multiply(b, c)))


def test_rejects_bad_structure_constants():
    c = np.zeros((2, 2, 2), dtype=np.int64)
    c[0, 0, 0] = c[0, 1, 1] = c[1, 0, 1] = 1
    nc = c.copy()
    nc[1, 0, 1] = 0
    nc[1, 0, 0] = 1
    with pytest.raises(NotCommutative):
        build_algebra(2, ["1", "x"], nc, [1, 0])
    with pytest.raises(BadUnit):
        build_algebra(2, ["1", "x"], c, [0, 1])
    with pytest.raises(ModulusError):
        build_algebra(4, ["1", "x"], c, [1, 0])
    # x^2 = x: idempotent, so F_2 x F_2
    idem = c.copy()
    idem[1, 1, 1] = 1
    with pytest.raises(NotLocal):
        build_algebra(2, ["1", "x"], idem, [1, 0])


def test_rejects_non_associative():
    # basis 1, a, b with a*a = b, a*b = 0, b*b = a  (not associative)
    c = np.zeros((3, 3, 3), dtype=np.int64)
    for i in range(3):
        c[0, i, i] = c[i, 0, i] = 1
    c[1, 1, 2] = 1
    c[2, 2, 1] = 1
    with pytest.raises((NotAssociative, NotLocal)):
        build_algebra(3, ["1", "a", "b"], c, [1, 0, 0])


def test_polynomial_quotient_errors():
    with pytest.raises(NotFiniteDimensional):
        quotient_from_polynomials(3, ["x", "y"], ["x^2"])
    # x^2 = x never yields a nilpotent power of x
    with pytest.raises(NotFiniteDimensional):
        quotient_from_polynomials(2, ["x"], ["x^2 - x"])
    # the ideal (x^2, x + 1) is the whole ring
    with pytest.raises(NotLocal):
        quotient_from_polynomials(2, ["x"], ["x^2", "x + 1"])


def test_mixed_relations():
    # F_3[x,y]/(x^2 - y^2, xy): Gorenstein of dim 4
    A = quotient_from_polynomials(3, ["x", "y"], ["x^2 - y^2", "x*y"])
    prof = A.profile
    assert prof.dim == 4 and prof.socle_dim == 1 and prof.embedding_dim == 2

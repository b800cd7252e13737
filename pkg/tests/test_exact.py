from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cofactor_det
from plumbd.exact import SingularMatrix, det_bareiss, identity, inverse, ldl, matmul, smith_normal_form

int_matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n))


@given(int_matrices)
def test_bareiss_matches_cofactor_expansion(a):
    assert det_bareiss(a) == cofactor_det(a)


@given(int_matrices)
def test_inverse_is_exact(a):
    if cofactor_det(a) == 0:
        with pytest.raises(SingularMatrix):
            inverse(a)
    else:
        assert matmul(a, inverse(a)) == identity(len(a))


@given(int_matrices)
@settings(max_examples=200)
def test_smith_normal_form(a):
    n = len(a)
    D, U, U_inv, V = smith_normal_form(a)
    assert matmul(matmul(U, a), V) == D
    assert matmul(U, U_inv) == identity(n)
    assert abs(cofactor_det(V)) == 1
    diag = [D[i][i] for i in range(n)]
    assert all(D[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    assert all(d >= 0 for d in diag)
    for d1, d2 in zip(diag, diag[1:]):
        assert (d2 == 0) if d1 == 0 else d2 % d1 == 0
    prod = 1
    for d in diag:
        prod *= d
    assert prod == abs(cofactor_det(a))


def test_ldl_small():
    lower, pivots = ldl([[-2, 1], [1, -3]])
    assert pivots == [-2, Fraction(-5, 2)]
    assert lower == [[1, 0], [Fraction(-1, 2), 1]]


def test_ldl_stops_at_zero_pivot():
    _, pivots = ldl([[0, 1], [1, 0]])
    assert pivots == [0]

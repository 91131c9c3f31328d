from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sepchoice.choice_space import build_type_matrix
from sepchoice.exact_linalg import (
    DimensionMismatch,
    as_rational,
    fmat,
    format_rational,
    fvec,
    identity,
    in_span,
    kron_apply,
    kronecker,
    normalize_first,
    nullspace,
    rank,
    rref,
    solve_particular,
)
from sepchoice.separability import joint_type_matrix

from conftest import A_DOM, A_FS

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(lambda m: st.integers(1, max_cols).flatmap(
        lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)))


def to_sympy(A):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in A])


def test_rational_io():
    assert as_rational("-2/6") == Fraction(-1, 3)
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_kronecker_identities():
    assert (kronecker(identity(2), identity(2)) == identity(4)).all()
    B = fmat([[1, 2], [3, 4]])
    assert (kronecker(fmat([[2]]), B) == 2 * B).all()


def test_joint_matrix_blocks(fs):
    A = joint_type_matrix(fs)
    assert A.shape == (16, 16)
    for i in range(4):
        for j in range(4):
            assert (A[4 * i:4 * i + 4, 4 * j:4 * j + 4] == A_FS[i, j] * A_FS).all()
    assert (A[:, 0] == kronecker(A_FS[:, [0]], A_FS[:, [0]])[:, 0]).all()


def test_kron_apply_matches_product():
    z = fvec(range(16))
    assert (kron_apply([A_FS, A_FS], z) == kronecker(A_FS, A_FS).dot(z)).all()
    with pytest.raises(DimensionMismatch):
        kron_apply([A_FS, A_FS], fvec(range(15)))


@given(matrices(3, 3), matrices(3, 3), matrices(3, 3), matrices(3, 3))
@settings(max_examples=40, deadline=None)
def test_kronecker_mixed_product(A, B, C, D):
    A, B, C, D = map(fmat, (A, B, C, D))
    if A.shape[1] != C.shape[0] or B.shape[1] != D.shape[0]:
        C = fmat(np.ones((A.shape[1], 2), dtype=int).tolist())
        D = fmat(np.ones((B.shape[1], 2), dtype=int).tolist())
    left = kronecker(A, B).dot(kronecker(C, D))
    right = kronecker(A.dot(C), B.dot(D))
    assert (left == right).all()


def test_printed_ranks():
    assert rank(A_FS) == 3
    assert rank(A_DOM) == 3
    assert rank(fmat([[0, 0]])) == 0


@given(matrices())
@settings(max_examples=80, deadline=None)
def test_rank_matches_sympy(rows):
    A = fmat(rows)
    assert rank(A) == to_sympy(A).rank()


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rank_invariant_under_permutation(rows):
    A = fmat(rows)
    perm_r = list(reversed(range(A.shape[0])))
    perm_c = list(range(1, A.shape[1])) + [0]
    assert rank(A[perm_r][:, perm_c]) == rank(A) == rank(A.T)


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_nullspace(rows):
    A = fmat(rows)
    N = nullspace(A)
    assert N.shape == (A.shape[1], A.shape[1] - rank(A))
    if N.shape[1]:
        assert all(x == 0 for x in A.dot(N).ravel())
        assert rank(N) == N.shape[1]


@given(matrices(), st.data())
@settings(max_examples=60, deadline=None)
def test_solve_particular(rows, data):
    A = fmat(rows)
    x = fvec(data.draw(st.lists(small, min_size=A.shape[1], max_size=A.shape[1])))
    b = A.dot(x)
    v = solve_particular(A, b)
    assert v is not None and (A.dot(v) == b).all()


def test_span_examples(fs):
    assert in_span(identity(3), [1, 2, 3])
    b = fvec([1, 2, 3])
    assert (solve_particular(identity(3), b) == b).all()
    pcr = [Fraction(1, 3), Fraction(2, 3), Fraction(1, 5), Fraction(4, 5)]
    assert solve_particular(build_type_matrix(fs, 0), pcr) is not None
    assert solve_particular(A_FS[:, [0, 1]], pcr) is None


def test_rref_pivots():
    R, piv = rref(fmat([[2, 4], [1, 2]]))
    assert piv == [0]
    assert list(R[0]) == [1, 2]


def test_normalize_first():
    assert normalize_first([0, Fraction(-3), 6]) == (0, -1, 2)
    assert normalize_first([0, 0]) == (0, 0)

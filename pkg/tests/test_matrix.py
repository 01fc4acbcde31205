import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from matvieta.eigen import eigenpairs
from matvieta.errors import DimensionMismatch, NonFiniteError, Singular, VariantMismatch
from matvieta.matrix import (
    Matrix,
    char_poly,
    det,
    inverse,
    lu_solve,
    mat_pow,
    sigma2,
    trace,
)
from matvieta.numeric import Field, Tolerance
from oracles import (
    cofactor_det,
    complex_matrix,
    frac_matrix,
    naive_matmul,
    rel_close,
    symbolic_char_poly,
)

small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def frac_matrices(k):
    return st.lists(st.lists(small_fracs, min_size=k, max_size=k), min_size=k, max_size=k).map(
        lambda rows: Matrix(rows, Field.RATIONAL)
    )


def square_pair():
    return st.integers(1, 4).flatmap(lambda k: st.tuples(frac_matrices(k), frac_matrices(k)))


# -- construction ---------------------------------------------------------
def test_construction_checks():
    with pytest.raises(DimensionMismatch):
        Matrix([[1, 2]])
    with pytest.raises(DimensionMismatch):
        Matrix([])
    assert Matrix([[1, 2], [3, 4]]).field is Field.RATIONAL
    assert Matrix([[1.0, 2], [3, 4]]).field is Field.COMPLEX
    with pytest.raises(VariantMismatch):
        Matrix([[1]], Field.RATIONAL) @ Matrix([[1.0]])
    with pytest.raises(DimensionMismatch):
        Matrix.identity(2) + Matrix.identity(3)


def test_overflow_is_an_error():
    big = Matrix([[1e200, 0], [0, 1e200]])
    with pytest.raises(NonFiniteError):
        big @ big


# -- products and powers --------------------------------------------------
def test_mat_pow_examples():
    assert mat_pow(Matrix.identity(3), 5) == Matrix.identity(3)
    assert mat_pow(Matrix.diag([2, 3]), 2) == Matrix.diag([4, 9])
    A = Matrix([[1, 1], [0, 1]])
    assert mat_pow(A, 0) == Matrix.identity(2, Field.RATIONAL)
    assert mat_pow(A, 7) == Matrix([[1, 7], [0, 1]])


def test_mat_mul_vs_naive_oracle():
    rng = random.Random(11)
    for _ in range(50):
        a, b = complex_matrix(rng, 3), complex_matrix(rng, 3)
        got = (Matrix(a) @ Matrix(b)).to_lists()
        want = naive_matmul(a, b)
        for r in range(3):
            for c in range(3):
                assert rel_close(got[r][c], want[r][c], 1e-14)
    for _ in range(20):
        a, b = frac_matrix(rng, 3), frac_matrix(rng, 3)
        assert (Matrix(a) @ Matrix(b)).to_lists() == naive_matmul(a, b)


def test_mat_pow_matches_repeated_products():
    rng = random.Random(3)
    A = Matrix(frac_matrix(rng, 3))
    acc = Matrix.identity(3, Field.RATIONAL)
    for m in range(9):
        assert mat_pow(A, m) == acc
        acc = acc @ A


# -- solves ---------------------------------------------------------------
def test_lu_solve_examples():
    B = Matrix([[1, 2], [3, 4]])
    assert lu_solve(Matrix.identity(2, Field.RATIONAL), B) == B
    assert lu_solve(Matrix.diag([2, 4]), Matrix.identity(2, Field.RATIONAL)) == Matrix.diag(
        [Fraction(1, 2), Fraction(1, 4)]
    )


def test_lu_solve_rational_round_trip_exact():
    rng = random.Random(4)
    for _ in range(20):
        A = Matrix(frac_matrix(rng, 4))
        B = Matrix(frac_matrix(rng, 4))
        if det(A) == 0:
            continue
        X = lu_solve(A, B)
        assert A @ X == B


def test_lu_solve_complex_round_trip():
    rng = random.Random(5)
    for _ in range(50):
        A, B = Matrix(complex_matrix(rng, 4)), Matrix(complex_matrix(rng, 4))
        X = lu_solve(A, B)
        assert (A @ X - B).max_abs() <= 1e-8 * max(1.0, B.max_abs())


def test_singular_detection():
    with pytest.raises(Singular):
        lu_solve(Matrix([[1, 2], [2, 4]]), Matrix.identity(2, Field.RATIONAL))
    with pytest.raises(Singular):
        inverse(Matrix([[1.0, 2.0], [2.0, 4.0 + 1e-14]]))
    # With no absolute floor the threshold scales with the entries.
    rel_only = Tolerance(1e-9, 0.0)
    with pytest.raises(Singular):
        inverse(Matrix([[1e-20, 2e-20], [2e-20, 4e-20 + 1e-34]]), rel_only)
    inverse(Matrix([[1e-20, 0.0], [0.0, 1e-20]]), rel_only)
    with pytest.raises(Singular):
        inverse(Matrix([[1e-20, 0.0], [0.0, 1e-20]]))


# -- determinant ----------------------------------------------------------
def test_det_examples():
    assert det(Matrix.identity(3, Field.RATIONAL)) == 1
    assert det(-Matrix.identity(3, Field.RATIONAL)) == -1
    assert det(-Matrix.identity(2, Field.RATIONAL)) == 1
    assert det(Matrix([[1, 2], [2, 4]])) == 0
    assert det(Matrix([[0.0, 1.0], [1.0, 0.0]])) == -1


def test_det_vs_cofactor_oracle():
    rng = random.Random(8)
    for _ in range(50):
        a = complex_matrix(rng, 4)
        assert rel_close(det(Matrix(a)), cofactor_det(a), 1e-10)
    for _ in range(20):
        a = frac_matrix(rng, 5)
        assert det(Matrix(a)) == cofactor_det(a)


@given(square_pair())
def test_det_multiplicative_exact(pair):
    A, B = pair
    assert det(A @ B) == det(A) * det(B)


def test_det_multiplicative_complex():
    rng = random.Random(9)
    for _ in range(50):
        A, B = Matrix(complex_matrix(rng, 4)), Matrix(complex_matrix(rng, 4))
        assert rel_close(det(A @ B), det(A) * det(B), 1e-8)


# -- trace and sigma2 -----------------------------------------------------
def test_trace_examples():
    assert trace(Matrix.identity(4, Field.RATIONAL)) == 4
    assert trace(Matrix.diag([1, 2, 3])) == 6


@given(square_pair())
def test_trace_cyclic_exact(pair):
    A, B = pair
    assert trace(A @ B) == trace(B @ A)


def test_trace_cyclic_complex():
    rng = random.Random(10)
    for _ in range(50):
        A, B = Matrix(complex_matrix(rng, 3)), Matrix(complex_matrix(rng, 3))
        assert rel_close(trace(A @ B), trace(B @ A), 1e-10)


def test_sigma2_examples():
    assert sigma2(Matrix.identity(2, Field.RATIONAL)) == 1
    assert sigma2(Matrix.diag([2, 3, 5])) == 31
    assert sigma2(Matrix([[7]])) == 0


def test_sigma2_vs_eigenvalue_pairs():
    rng = random.Random(12)
    for _ in range(30):
        A = Matrix(complex_matrix(rng, 4))
        lam = [e.value for e in eigenpairs(A)]
        want = sum(lam[i] * lam[j] for i in range(4) for j in range(i + 1, 4))
        assert rel_close(sigma2(A), want, 1e-7)


# -- characteristic polynomial --------------------------------------------
def test_char_poly_examples():
    assert char_poly(Matrix.identity(2, Field.RATIONAL)).coeffs == (1, -2, 1)
    assert char_poly(Matrix.diag([1, 2])).coeffs == (2, -3, 1)


def test_char_poly_vs_symbolic_cofactor_oracle():
    rng = random.Random(13)
    for k in (1, 2, 3, 4):
        for _ in range(10):
            a = frac_matrix(rng, k)
            assert list(char_poly(Matrix(a)).coeffs) == symbolic_char_poly(a)


@given(st.integers(1, 4).flatmap(frac_matrices))
def test_char_poly_cross_checks(A):
    c = char_poly(A).coeffs
    k = A.k
    assert c[k] == 1
    assert c[k - 1] == -trace(A)
    assert c[0] == (-1) ** k * det(A)


def test_char_poly_complex_vs_numpy():
    rng = random.Random(14)
    for _ in range(20):
        a = complex_matrix(rng, 5)
        got = np.array(char_poly(Matrix(a)).coeffs[::-1])
        want = np.poly(np.array(a))
        assert np.max(np.abs(got - want)) <= 1e-10 * np.max(np.abs(want))

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from matvieta.errors import QdUndefined
from matvieta.matrix import Matrix, det, inverse
from matvieta.numeric import Field
from matvieta.quasidet import (
    BlockMatrix,
    kramer_solve,
    quasideterminant,
    recover_via_quasidet,
    submatrix,
)
from matvieta.vieta import LEFT, RIGHT, recover_coefficients
from oracles import cofactor_det, complex_matrix, frac_matrix, rel_close


def scalar_grid(a, field=None):
    return BlockMatrix([[Matrix([[x]], field) for x in row] for row in a])


def random_grid(rng, m, k, exact=False):
    make = frac_matrix if exact else complex_matrix
    return BlockMatrix([[Matrix(make(rng, k)) for _ in range(m)] for _ in range(m)])


def minor(a, p, q):
    return [row[:q] + row[q + 1:] for r, row in enumerate(a) if r != p]


# -- labels ---------------------------------------------------------------
def test_submatrix_keeps_labels():
    A = scalar_grid([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    S = submatrix(A, 2, 3)
    assert S.row_labels == (1, 3) and S.col_labels == (1, 2)
    assert S.block(3, 2) == Matrix([[8]])
    with pytest.raises(IndexError):
        submatrix(S, 2, 1)


def test_submatrix_removals_commute():
    A = scalar_grid([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    assert submatrix(submatrix(A, 1, 2), 3, 1) == submatrix(submatrix(A, 3, 1), 1, 2)


def test_custom_labels_address_blocks():
    A = BlockMatrix(scalar_grid([[1, 2], [3, 4]]).grid, ("a", "b"), ("x", "y"))
    assert quasideterminant(A, "a", "x") == Matrix([[Fraction(-1, 2)]])
    with pytest.raises(IndexError):
        quasideterminant(A, 1, 1)


# -- small cases ----------------------------------------------------------
def test_one_by_one_grid_is_its_block():
    B = Matrix([[1, 2], [3, 4]])
    assert quasideterminant(BlockMatrix([[B]]), 1, 1) == B


def test_two_by_two_grid_closed_form():
    rng = random.Random(31)
    for _ in range(20):
        G = random_grid(rng, 2, 3, exact=True)
        a11, a12, a21, a22 = G.grid[0][0], G.grid[0][1], G.grid[1][0], G.grid[1][1]
        if det(a22) == 0 or det(a21) == 0:
            continue
        assert quasideterminant(G, 1, 1) == a11 - a12 @ inverse(a22) @ a21
        # The trailing factor is taken from column q, here q = 2.
        assert quasideterminant(G, 1, 2) == a12 - a11 @ inverse(a21) @ a22


def test_scalar_example():
    A = scalar_grid([[1, 2], [3, 4]])
    assert quasideterminant(A, 1, 1) == Matrix([[Fraction(-1, 2)]])
    assert quasideterminant(A, 2, 2) == Matrix([[Fraction(-2)]])


# -- commutative ratio law ------------------------------------------------
def test_ratio_law_rational_exact():
    rng = random.Random(32)
    for m in (2, 3, 4):
        for _ in range(10):
            a = frac_matrix(rng, m)
            A = scalar_grid(a)
            for p in range(m):
                for q in range(m):
                    dm = cofactor_det(minor(a, p, q))
                    if dm == 0:
                        continue
                    try:
                        got = quasideterminant(A, p + 1, q + 1)[0, 0]
                    except QdUndefined:
                        continue
                    assert got == (-1) ** (p + q) * cofactor_det(a) / dm


def test_ratio_law_complex():
    rng = random.Random(33)
    for m in (2, 3, 4):
        for _ in range(20):
            a = complex_matrix(rng, m)
            A = scalar_grid(a)
            p, q = rng.randrange(m), rng.randrange(m)
            want = (-1) ** (p + q) * cofactor_det(a) / cofactor_det(minor(a, p, q))
            assert rel_close(quasideterminant(A, p + 1, q + 1)[0, 0], want, 1e-8)


@given(st.permutations(range(3)), st.permutations(range(3)), st.integers(0, 2), st.integers(0, 2),
       st.integers(0, 2**32))
def test_permutation_invariance(rp, cp, p, q, seed):
    rng = random.Random(seed)
    A = random_grid(rng, 3, 2, exact=True)
    try:
        want = quasideterminant(A, p + 1, q + 1)
    except QdUndefined:
        return
    grid = [[A.grid[r][c] for c in cp] for r in rp]
    B = BlockMatrix(grid, tuple(r + 1 for r in rp), tuple(c + 1 for c in cp))
    assert quasideterminant(B, p + 1, q + 1) == want


def test_undefined_names_offending_index():
    A = scalar_grid([[1, 1, 1], [1, 0, 1], [1, 1, 0]])
    with pytest.raises(QdUndefined) as exc:
        quasideterminant(A, 1, 1)
    assert exc.value.index is not None


# -- Cramer rule ----------------------------------------------------------
def test_kramer_scalar_multiple_blocks():
    I2 = Matrix.identity(2, Field.RATIONAL)
    A = BlockMatrix([[I2 * 2, I2], [I2, I2 * 3]])
    x = [Matrix([[1, 2], [3, 4]]), Matrix([[5, 6], [7, 8]])]
    xi = [x[0] * 2 + x[1], x[0] + x[1] * 3]
    assert kramer_solve(A, xi, 1) == x
    assert kramer_solve(A, xi, 2, side=LEFT) == x


def test_kramer_undefined_on_block_identity():
    I2 = Matrix.identity(2, Field.RATIONAL)
    Z = Matrix.zeros(2, Field.RATIONAL)
    with pytest.raises(QdUndefined):
        kramer_solve(BlockMatrix([[I2, Z], [Z, I2]]), [I2, I2], 1)


def test_kramer_matches_scalar_cramer():
    a = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    xi = [Matrix([[5]]), Matrix([[10]])]
    x = kramer_solve(scalar_grid(a), xi, 1)
    assert [m[0, 0] for m in x] == [1, 3]


@pytest.mark.parametrize("side", [RIGHT, LEFT])
def test_kramer_random_residual(side):
    rng = random.Random(34)
    for _ in range(10):
        A = random_grid(rng, 3, 2)
        xi = [Matrix(complex_matrix(rng, 2)) for _ in range(3)]
        x = kramer_solve(A, xi, 2, side=side)
        for r in range(3):
            if side == RIGHT:
                acc = sum((A.grid[r][c] @ x[c] for c in range(1, 3)), A.grid[r][0] @ x[0])
            else:
                acc = sum((x[c] @ A.grid[c][r] for c in range(1, 3)), x[0] @ A.grid[0][r])
            assert (acc - xi[r]).max_abs() <= 1e-9 * max(1.0, xi[r].max_abs())


def test_kramer_rational_exact_for_every_row_choice():
    rng = random.Random(35)
    A = random_grid(rng, 3, 2, exact=True)
    xi = [Matrix(frac_matrix(rng, 2)) for _ in range(3)]
    first = kramer_solve(A, xi, 1)
    for i in (2, 3):
        assert kramer_solve(A, xi, i) == first


# -- recovery through quasideterminants -----------------------------------
def test_recover_examples():
    I2 = Matrix.identity(2, Field.RATIONAL)
    X = (I2, -I2)
    assert recover_via_quasidet(X, 1, 1) == Matrix.zeros(2, Field.RATIONAL)
    assert recover_via_quasidet(X, 2, 2) == -I2
    X = (Matrix.diag([1, 2]), Matrix.diag([3, 4]))
    assert recover_via_quasidet(X, 1, 1) == -Matrix.diag([4, 6])
    assert recover_via_quasidet(X, 2, 2) == Matrix.diag([3, 8])


@pytest.mark.parametrize("n,k", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_agrees_with_linear_recovery_rational(n, k):
    rng = random.Random(36 + n * k)
    X = tuple(Matrix(frac_matrix(rng, k, -4, 4, 3)) for _ in range(n))
    P = recover_coefficients(X)
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            assert recover_via_quasidet(X, j, i) == P.coeffs[j - 1]


@pytest.mark.parametrize("side", [LEFT, RIGHT])
def test_agrees_with_linear_recovery_complex(side):
    rng = random.Random(37)
    for n, k in [(2, 2), (3, 2), (2, 3)]:
        X = tuple(Matrix(complex_matrix(rng, k)) for _ in range(n))
        P = recover_coefficients(X, side=side)
        for j in range(1, n + 1):
            for i in range(1, n + 1):
                got = recover_via_quasidet(X, j, i, side=side)
                want = P.coeffs[j - 1]
                assert (got - want).max_abs() <= 1e-7 * max(1.0, want.max_abs())


def test_left_and_right_coefficients_differ_in_general():
    rng = random.Random(38)
    X = tuple(Matrix(frac_matrix(rng, 2)) for _ in range(2))
    assert recover_via_quasidet(X, 1, 1, side=LEFT) != recover_via_quasidet(X, 1, 1, side=RIGHT)


def test_recover_index_errors():
    X = (Matrix.diag([1, 2]), Matrix.diag([3, 4]))
    with pytest.raises(IndexError):
        recover_via_quasidet(X, 3, 1)
    with pytest.raises(IndexError):
        recover_via_quasidet(X, 1, 0)

"""Dense square matrices over one scalar field.

Everything here is written once and works for both ``complex`` and
``Fraction`` entries; the only field-specific code paths are pivoting
(magnitude thresholds vs exact nonzero search) and determinant evaluation
(partial pivoting vs fraction-free Bareiss).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, Singular, VariantMismatch
from .numeric import (
    DEFAULT_DISTRIBUTION,
    Field,
    Scalar,
    ScalarDistribution,
    Tolerance,
    check_finite,
    coerce,
    random_scalar,
)


class Matrix:
    """Immutable k x k matrix. Rows are stored as a tuple of tuples."""

    __slots__ = ("k", "field", "rows")

    def __init__(self, rows: Iterable[Iterable], field: Field | str | None = None):
        rows = [list(r) for r in rows]
        k = len(rows)
        if k < 1 or any(len(r) != k for r in rows):
            raise DimensionMismatch("a matrix must be square with order >= 1")
        if field is None:
            field = _infer_field(rows)
        field = Field(field)
        self.k = k
        self.field = field
        self.rows = tuple(tuple(coerce(x, field) for x in r) for r in rows)

    @classmethod
    def _raw(cls, rows, field: Field) -> "Matrix":
        # Trusted constructor: entries are already of the right type.
        m = object.__new__(cls)
        m.k = len(rows)
        m.field = field
        m.rows = tuple(tuple(r) for r in rows)
        if field is Field.COMPLEX:
            for r in m.rows:
                for z in r:
                    check_finite(z)
        return m

    # -- constructors -----------------------------------------------------
    @classmethod
    def identity(cls, k: int, field: Field | str = Field.COMPLEX) -> "Matrix":
        field = Field(field)
        one, zero = field.one(), field.zero()
        return cls._raw([[one if i == j else zero for j in range(k)] for i in range(k)], field)

    @classmethod
    def zeros(cls, k: int, field: Field | str = Field.COMPLEX) -> "Matrix":
        field = Field(field)
        return cls._raw([[field.zero()] * k for _ in range(k)], field)

    @classmethod
    def diag(cls, values: Sequence, field: Field | str | None = None) -> "Matrix":
        if field is None:
            field = _infer_field([values])
        field = Field(field)
        vals = [coerce(v, field) for v in values]
        k = len(vals)
        zero = field.zero()
        return cls._raw([[vals[i] if i == j else zero for j in range(k)] for i in range(k)], field)

    @classmethod
    def scalar(cls, value, k: int, field: Field | str | None = None) -> "Matrix":
        return cls.diag([value] * k, field)

    @classmethod
    def random(
        cls, rng, k: int, field: Field | str = Field.COMPLEX,
        dist: ScalarDistribution = DEFAULT_DISTRIBUTION,
    ) -> "Matrix":
        field = Field(field)
        return cls._raw([[random_scalar(rng, field, dist) for _ in range(k)] for _ in range(k)], field)

    # -- views ------------------------------------------------------------
    @property
    def entries(self) -> list:
        return [x for r in self.rows for x in r]

    def __getitem__(self, ij):
        if isinstance(ij, tuple):
            i, j = ij
            return self.rows[i][j]
        return self.rows[ij]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def diagonal(self) -> list:
        return [self.rows[i][i] for i in range(self.k)]

    def transpose(self) -> "Matrix":
        return Matrix._raw(list(zip(*self.rows)), self.field)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def to_complex(self) -> "Matrix":
        if self.field is Field.COMPLEX:
            return self
        return Matrix._raw([[complex(float(x)) for x in r] for r in self.rows], Field.COMPLEX)

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.rows]

    def max_abs(self) -> float:
        return max(float(abs(x)) for r in self.rows for x in r)

    def norm(self) -> float:
        """Frobenius norm (as a float, also for rational matrices)."""
        return math.sqrt(sum(float(abs(x)) ** 2 for r in self.rows for x in r))

    # -- operators --------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field is other.field and self.rows == other.rows

    def __hash__(self):
        return hash((self.field, self.rows))

    def __repr__(self):
        return f"Matrix({self.to_lists()!r}, field={self.field.value!r})"

    def __add__(self, other):
        return mat_add(self, other)

    def __sub__(self, other):
        return mat_sub(self, other)

    def __neg__(self):
        return mat_scale(self, -1)

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return NotImplemented
        return mat_scale(self, c)

    __rmul__ = __mul__

    def __pow__(self, m: int):
        return mat_pow(self, m)


def _infer_field(rows) -> Field:
    for r in rows:
        for x in r:
            if isinstance(x, (float, complex)):
                return Field.COMPLEX
    return Field.RATIONAL


def _same_shape(A: Matrix, B: Matrix):
    if A.k != B.k:
        raise DimensionMismatch(f"orders differ: {A.k} vs {B.k}")
    if A.field is not B.field:
        raise VariantMismatch(f"fields differ: {A.field.value} vs {B.field.value}")


# -- ring operations ------------------------------------------------------
def mat_add(A: Matrix, B: Matrix) -> Matrix:
    _same_shape(A, B)
    return Matrix._raw([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A.rows, B.rows)], A.field)


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    _same_shape(A, B)
    return Matrix._raw([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A.rows, B.rows)], A.field)


def mat_scale(A: Matrix, c) -> Matrix:
    c = coerce(c, A.field)
    return Matrix._raw([[c * a for a in r] for r in A.rows], A.field)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    _same_shape(A, B)
    cols = list(zip(*B.rows))
    zero = A.field.zero()
    return Matrix._raw(
        [[sum((a * b for a, b in zip(r, c)), zero) for c in cols] for r in A.rows], A.field
    )


def mat_pow(A: Matrix, m: int) -> Matrix:
    """A**m by repeated squaring; A**0 is the identity."""
    if m < 0:
        raise ValueError("negative powers are not supported; use inverse()")
    result = Matrix.identity(A.k, A.field)
    base = A
    while m:
        if m & 1:
            result = mat_mul(result, base)
        m >>= 1
        if m:
            base = mat_mul(base, base)
    return result


def powers(A: Matrix, top: int) -> list[Matrix]:
    """[I, A, A^2, ..., A^top] by successive multiplication."""
    out = [Matrix.identity(A.k, A.field)]
    for _ in range(top):
        out.append(mat_mul(out[-1], A))
    return out


def matvec(A: Matrix, v: Sequence) -> list:
    zero = A.field.zero()
    return [sum((a * x for a, x in zip(r, v)), zero) for r in A.rows]


def from_columns(cols: Sequence[Sequence], field: Field) -> Matrix:
    return Matrix._raw(list(zip(*cols)), Field(field))


# -- linear solves --------------------------------------------------------
def _solve_dense(a: list[list], b: list[list], field: Field, tol: Tolerance) -> list[list]:
    """Solve a x = b for generic n x n ``a`` and n x m ``b`` (lists, consumed)."""
    if field.exact:
        return _solve_bareiss(a, b)
    return _solve_partial_pivot(a, b, tol)


def _solve_partial_pivot(a, b, tol: Tolerance):
    n = len(a)
    m = len(b[0]) if b else 0
    scale = max(abs(x) for r in a for x in r)
    threshold = tol.bound(scale)
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if abs(a[piv][col]) <= threshold or a[piv][col] == 0:
            raise Singular(f"pivot {abs(a[piv][col]):.3e} at column {col} below {threshold:.3e}")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
        p = a[col][col]
        rowp, bp = a[col], b[col]
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f == 0:
                continue
            ar = a[r]
            for c in range(col + 1, n):
                ar[c] -= f * rowp[c]
            ar[col] = 0j
            br = b[r]
            for c in range(m):
                br[c] -= f * bp[c]
    x = [[0j] * m for _ in range(n)]
    for r in range(n - 1, -1, -1):
        ar = a[r]
        for c in range(m):
            s = b[r][c]
            for j in range(r + 1, n):
                s -= ar[j] * x[j][c]
            x[r][c] = s / ar[r]
    return x


def _integer_rows(rows: list[list[Fraction]]) -> tuple[list[list[int]], list[int]]:
    """Scale each row by the lcm of its denominators; return rows and scales."""
    out, mults = [], []
    for r in rows:
        d = 1
        for x in r:
            d = d * x.denominator // math.gcd(d, x.denominator)
        out.append([int(x * d) for x in r])
        mults.append(d)
    return out, mults


def _bareiss(M: list[list[int]], ncols_pivot: int) -> tuple[int, bool]:
    """In-place fraction-free elimination on the first ``ncols_pivot`` columns.

    Returns (sign of row permutation, full rank?). All entries stay integers.
    """
    n = len(M)
    width = len(M[0])
    sign = 1
    prev = 1
    for col in range(min(n, ncols_pivot)):
        if M[col][col] == 0:
            for r in range(col + 1, n):
                if M[r][col] != 0:
                    M[col], M[r] = M[r], M[col]
                    sign = -sign
                    break
            else:
                return sign, False
        p = M[col][col]
        rowp = M[col]
        for r in range(col + 1, n):
            rr = M[r]
            f = rr[col]
            for c in range(col + 1, width):
                rr[c] = (rr[c] * p - f * rowp[c]) // prev
            rr[col] = 0
        prev = p
    return sign, True


def _solve_bareiss(a, b):
    n = len(a)
    m = len(b[0]) if b else 0
    M, _ = _integer_rows([ra + rb for ra, rb in zip(a, b)])
    _, full = _bareiss(M, n)
    if not full:
        raise Singular("exact pivot search found only zeros")
    x = [[Fraction(0)] * m for _ in range(n)]
    for r in range(n - 1, -1, -1):
        row = M[r]
        for c in range(m):
            s = Fraction(row[n + c])
            for j in range(r + 1, n):
                s -= row[j] * x[j][c]
            x[r][c] = s / row[r]
    return x


def lu_solve(A: Matrix, B: Matrix, tol: Tolerance | None = None) -> Matrix:
    """X with A X = B.

    Complex: partial pivoting, ``Singular`` once the best pivot drops to
    ``tol.abs + tol.rel * max|A_ij|``. Rational: fraction-free, exact.
    """
    _same_shape(A, B)
    tol = (tol or Tolerance.default(A.field)).for_field(A.field)
    x = _solve_dense(A.to_lists(), B.to_lists(), A.field, tol)
    return Matrix._raw(x, A.field)


def inverse(A: Matrix, tol: Tolerance | None = None) -> Matrix:
    return lu_solve(A, Matrix.identity(A.k, A.field), tol)


def solve_rows(a: list[list], b: list[list], field: Field, tol: Tolerance | None = None) -> list[list]:
    """Plain-list solve for systems that are not k x k (e.g. flattened blocks)."""
    field = Field(field)
    tol = (tol or Tolerance.default(field)).for_field(field)
    n = len(a)
    if any(len(r) != n for r in a) or len(b) != n:
        raise DimensionMismatch("coefficient matrix must be square and match the right-hand side")
    return _solve_dense([list(r) for r in a], [list(r) for r in b], field, tol)


# -- determinant, trace, characteristic polynomial ------------------------
def det_rows(rows: list[list], field: Field) -> Scalar:
    """Determinant of a square list-of-lists over ``field``."""
    field = Field(field)
    n = len(rows)
    if field.exact:
        M, mults = _integer_rows([list(r) for r in rows])
        sign, full = _bareiss(M, n)
        if not full:
            return Fraction(0)
        scale = 1
        for d in mults:
            scale *= d
        return Fraction(sign * M[n - 1][n - 1], scale)
    a = [list(r) for r in rows]
    d = 1 + 0j
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[piv][col] == 0:
            return 0j
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            d = -d
        p = a[col][col]
        d *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f == 0:
                continue
            ar, ac = a[r], a[col]
            for c in range(col + 1, n):
                ar[c] -= f * ac[c]
    return check_finite(d)


def det(A: Matrix) -> Scalar:
    return det_rows(A.to_lists(), A.field)


def trace(A: Matrix) -> Scalar:
    return sum(A.diagonal(), A.field.zero())


def sigma2(A: Matrix) -> Scalar:
    """Second elementary symmetric function of the eigenvalues."""
    if A.k == 1:
        return A.field.zero()
    t = trace(A)
    return (t * t - trace(mat_mul(A, A))) / 2


@dataclass(frozen=True)
class CharPoly:
    """Coefficients of det(lambda I - A), lowest degree first; monic."""

    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc


def char_poly(A: Matrix) -> CharPoly:
    """Faddeev-LeVerrier recurrence; exact over the rationals."""
    k = A.k
    c = [A.field.zero()] * (k + 1)
    c[k] = A.field.one()
    M = Matrix.zeros(k, A.field)
    ident = Matrix.identity(k, A.field)
    for m in range(1, k + 1):
        M = mat_add(mat_mul(A, M), mat_scale(ident, c[k - m + 1]))
        c[k - m] = -trace(mat_mul(A, M)) / m
    return CharPoly(tuple(c))

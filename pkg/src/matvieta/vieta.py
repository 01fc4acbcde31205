"""Monic matrix polynomials, independence, coefficient recovery and the
trace/determinant identities relating coefficients to solutions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple, Sequence

from .errors import (
    DimensionMismatch,
    NotASolution,
    NotIndependent,
    PreconditionFailed,
    Singular,
    VariantMismatch,
)
from .matrix import (
    Matrix,
    det,
    det_rows,
    inverse,
    lu_solve,
    mat_mul,
    powers,
    sigma2,
    solve_rows,
    trace,
)
from .numeric import Field, Scalar, Tolerance

SolutionTuple = tuple  # tuple[Matrix, ...]

LEFT, RIGHT = "left", "right"

# Identity tags used in reports.
TRACE_A1 = "TraceA1"
DET_AN = "DetAn"
EQ12 = "Eq12"
EQ13 = "Eq13"

# Reading of the lambda^1 identity that survives the scalar k=1 check:
# det(A_n) tr(A_n^{-1} A_{n-1}) = (-1)^{kn-1} prod det X_i sum tr X_i^{-1}.
EQ13_CONVENTION = "det(A_n)*tr(A_n^-1*A_{n-1}) = (-1)^(kn-1)*prod(det X_i)*sum(tr X_i^-1)"
EQ12_CONVENTION = "sigma2 = sum_{i<j} lambda_i*lambda_j = ((tr M)^2 - tr(M^2))/2"


def _check_uniform(mats: Sequence[Matrix]):
    if not mats:
        raise DimensionMismatch("need at least one matrix")
    k, fld = mats[0].k, mats[0].field
    for M in mats:
        if M.k != k:
            raise DimensionMismatch("all matrices must share one order")
        if M.field is not fld:
            raise VariantMismatch("all matrices must share one scalar field")
    return k, fld


@dataclass(frozen=True)
class MatrixPolynomial:
    """X^n + A_1 X^{n-1} + ... + A_n with coefficients acting from the left.

    ``side="right"`` describes X^n + X^{n-1} A_1 + ... + A_n instead.
    """

    coeffs: tuple
    side: str = LEFT

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        _check_uniform(self.coeffs)
        if self.side not in (LEFT, RIGHT):
            raise ValueError("side must be 'left' or 'right'")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def k(self) -> int:
        return self.coeffs[0].k

    @property
    def field(self) -> Field:
        return self.coeffs[0].field

    def coefficient(self, j: int) -> Matrix:
        """A_j for 0 <= j <= n, with A_0 = I."""
        if j == 0:
            return Matrix.identity(self.k, self.field)
        return self.coeffs[j - 1]

    def evaluate(self, X: Matrix) -> Matrix:
        # Horner: ((X + A_1) X + A_2) X + ... for left coefficients.
        acc = Matrix.identity(self.k, self.field)
        for A in self.coeffs:
            acc = (acc @ X + A) if self.side == LEFT else (X @ acc + A)
        return acc

    def at_scalar(self, lam) -> Matrix:
        """lam^n I + lam^{n-1} A_1 + ... + A_n."""
        acc = Matrix.identity(self.k, self.field)
        for A in self.coeffs:
            acc = acc * lam + A
        return acc

    def residual_scale(self, X: Matrix) -> float:
        """||X||^n + sum ||A_j|| ||X||^{n-j}: the size of the terms summed."""
        x = X.norm()
        return x**self.n + sum(A.norm() * x ** (self.n - j) for j, A in enumerate(self.coeffs, 1))

    def residual(self, X: Matrix) -> float:
        return self.evaluate(X).norm()

    def to_complex(self) -> "MatrixPolynomial":
        return MatrixPolynomial(tuple(A.to_complex() for A in self.coeffs), self.side)


# -- independence ---------------------------------------------------------
def block_vandermonde(X: Sequence[Matrix]):
    """n x n block grid with block (r, c) = X_c^(r-1); identities on top."""
    from .quasidet import BlockMatrix

    _check_uniform(X)
    n = len(X)
    pw = [powers(Xc, n - 1) for Xc in X]
    grid = [[pw[c][r] for c in range(n)] for r in range(n)]
    return BlockMatrix(grid)


class Independence(NamedTuple):
    independent: bool
    det: Scalar
    threshold: float


def is_independent(X: Sequence[Matrix], tol: Tolerance | None = None) -> Independence:
    """Nonvanishing of the block Vandermonde determinant.

    Complex: |det W| must exceed ``tol.abs + tol.rel * prod(row norms)``
    (the Hadamard bound, so the verdict does not depend on scaling).
    """
    k, fld = _check_uniform(X)
    tol = (tol or Tolerance.default(fld)).for_field(fld)
    rows = block_vandermonde(X).flatten()
    d = det_rows(rows, fld)
    if fld.exact:
        return Independence(d != 0, d, 0.0)
    hadamard = 1.0
    for r in rows:
        hadamard *= math.sqrt(sum(abs(x) ** 2 for x in r))
    threshold = tol.bound(hadamard)
    return Independence(abs(d) > threshold, d, threshold)


# -- recovery -------------------------------------------------------------
def recover_coefficients(
    X: Sequence[Matrix], tol: Tolerance | None = None, side: str = LEFT
) -> MatrixPolynomial:
    """The unique monic polynomial of degree n = len(X) vanishing at every X_i.

    Left coefficients solve [A_1 ... A_n] W = -[X_1^n ... X_n^n], where block
    column i of W is (X_i^{n-1}; ...; X_i; I). Solved as one transposed
    nk x nk system.
    """
    k, fld = _check_uniform(X)
    n = len(X)
    tol = (tol or Tolerance.default(fld)).for_field(fld)
    pw = [powers(Xi, n) for Xi in X]
    if side == LEFT:
        # Row (i, b) of W^T holds column b of X_i^{n-j} across block j.
        a = [[pw[i][n - j][r][b] for j in range(1, n + 1) for r in range(k)]
             for i in range(n) for b in range(k)]
        rhs = [[-pw[i][n][a_][b] for a_ in range(k)] for i in range(n) for b in range(k)]
    elif side == RIGHT:
        a = [[pw[i][n - j][r][c] for j in range(1, n + 1) for c in range(k)]
             for i in range(n) for r in range(k)]
        rhs = [[-pw[i][n][r][c] for c in range(k)] for i in range(n) for r in range(k)]
    else:
        raise ValueError("side must be 'left' or 'right'")
    try:
        sol = solve_rows(a, rhs, fld, tol)
    except Singular as exc:
        raise NotIndependent(f"solutions are not independent ({exc})") from None
    coeffs = []
    for j in range(n):
        block = sol[j * k:(j + 1) * k]  # nk x k slab: rows index (j, r)
        if side == LEFT:
            # sol[(j, b)][a] = (A_j)[a][b]
            coeffs.append(Matrix._raw([[block[b][a_] for b in range(k)] for a_ in range(k)], fld))
        else:
            coeffs.append(Matrix._raw([list(r) for r in block], fld))
    return MatrixPolynomial(tuple(coeffs), side)


def right_divide(S: Matrix, D: Matrix, tol: Tolerance | None = None) -> Matrix:
    """S D^{-1}."""
    return lu_solve(D.T, S.T, tol).T


def n2_closed_form(X: Matrix, Y: Matrix, tol: Tolerance | None = None) -> tuple[Matrix, Matrix]:
    """(A, B) with X^2 + A X + B = Y^2 + A Y + B = 0, from
    A = -(X^2 - Y^2)(X - Y)^{-1}, B = -X^2 + (X^2 - Y^2)(X - Y)^{-1} X."""
    _check_uniform([X, Y])
    X2, Y2 = X @ X, Y @ Y
    Z = right_divide(X2 - Y2, X - Y, tol)
    return -Z, Z @ X - X2


# -- identity reports -----------------------------------------------------
@dataclass(frozen=True)
class IdentityReport:
    identity: str
    lhs: Scalar | None
    rhs: Scalar | None
    abs_err: object  # float, or Fraction on the exact path
    rel_err: float
    passed: bool
    preconditions_met: bool
    scale: float = 0.0
    note: str = ""

    @property
    def skipped(self) -> bool:
        return not self.preconditions_met and self.lhs is None


def _compare(tag, lhs, rhs, scale, tol: Tolerance, fld: Field, pre_ok=True, note=""):
    diff = abs(lhs - rhs)
    if fld.exact:
        passed = lhs == rhs
        abs_err = diff
    else:
        passed = diff <= tol.bound(scale)
        abs_err = float(diff)
    if scale > 0:
        rel_err = float(diff) / float(scale)
    else:
        rel_err = 0.0 if diff == 0 else math.inf
    return IdentityReport(tag, lhs, rhs, abs_err, rel_err, passed and pre_ok, pre_ok, float(scale), note)


def _skipped(tag, note):
    return IdentityReport(tag, None, None, None, math.nan, False, False, 0.0, note)


@dataclass(frozen=True)
class SolutionCheck:
    index: int
    residual: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.residual <= self.bound


def solution_residuals(X: Sequence[Matrix], P: MatrixPolynomial, tol: Tolerance | None = None):
    """Residual of every X_i in P, with its pass bound (exact zero on the
    rational path)."""
    tol = (tol or Tolerance.default(P.field)).for_field(P.field)
    out = []
    for i, Xi in enumerate(X, 1):
        if P.field.exact:
            R = P.evaluate(Xi)
            res = 0.0 if all(x == 0 for x in R.entries) else max(R.norm(), math.ulp(0.0))
            out.append(SolutionCheck(i, res, 0.0))
        else:
            out.append(SolutionCheck(i, P.residual(Xi), tol.bound(P.residual_scale(Xi))))
    return out


def _preflight(X, P, tol, strict):
    if len(X) != P.n:
        raise DimensionMismatch(f"need n = {P.n} solutions, got {len(X)}")
    _check_uniform(list(X) + list(P.coeffs))
    checks = solution_residuals(X, P, tol)
    bad = [c for c in checks if not c.ok]
    if bad and strict:
        raise NotASolution(bad[0].index, bad[0].residual, bad[0].bound)
    return not bad, ("" if not bad else f"X_{bad[0].index} is not a solution")


def _sign(e: int):
    return -1 if e % 2 else 1


def check_vieta(
    X: Sequence[Matrix], P: MatrixPolynomial, tol: Tolerance | None = None, strict: bool = True
) -> tuple[IdentityReport, IdentityReport]:
    """tr A_1 = -sum tr X_i and det A_n = (-1)^{nk} prod det X_i.

    With ``strict`` a non-solution raises ``NotASolution``; otherwise both
    reports come back failed with ``preconditions_met=False``.
    """
    fld = P.field
    tol = (tol or Tolerance.default(fld)).for_field(fld)
    ok, note = _preflight(X, P, tol, strict)
    n, k = P.n, P.k

    A1 = P.coefficient(1)
    lhs = trace(A1)
    rhs = -sum((trace(Xi) for Xi in X), fld.zero())
    scale = max(abs(lhs), abs(rhs), sum(abs(x) for x in A1.diagonal()),
                sum(abs(x) for Xi in X for x in Xi.diagonal()))
    r1 = _compare(TRACE_A1, lhs, rhs, scale, tol, fld, ok, note)

    lhs = det(P.coefficient(n))
    prod = fld.one()
    for Xi in X:
        prod *= det(Xi)
    rhs = _sign(n * k) * prod
    r2 = _compare(DET_AN, lhs, rhs, max(abs(lhs), abs(rhs)), tol, fld, ok, note)
    return r1, r2


def _invertible(M: Matrix, tol: Tolerance) -> Matrix | None:
    try:
        return inverse(M, tol)
    except Singular:
        return None


def eq13_inverses(X: Sequence[Matrix], P: MatrixPolynomial, tol: Tolerance | None = None):
    """Inverses needed by the lambda^1 identity; raises ``PreconditionFailed``
    naming the first singular matrix."""
    tol = (tol or Tolerance.default(P.field)).for_field(P.field)
    An_inv = _invertible(P.coefficient(P.n), tol)
    if An_inv is None:
        raise PreconditionFailed(f"A_{P.n}")
    X_inv = []
    for i, Xi in enumerate(X, 1):
        inv = _invertible(Xi, tol)
        if inv is None:
            raise PreconditionFailed(f"X_{i}")
        X_inv.append(inv)
    return An_inv, X_inv


def check_extras(
    X: Sequence[Matrix], P: MatrixPolynomial, tol: Tolerance | None = None, strict: bool = True
) -> tuple[IdentityReport, IdentityReport]:
    """Coefficients of lambda^{kn-2} and lambda^1 in det P(lambda).

    Eq12: tr A_2 + sigma2(A_1) = sum_{i<j} tr X_i tr X_j + sum sigma2(X_i)
    Eq13: det A_n tr(A_n^{-1} A_{n-1}) = (-1)^{kn-1} prod det X_i sum tr X_i^{-1}

    A_0 = I and A_2 = 0 when n = 1. Eq13 is reported as skipped (not failed)
    when A_n or some X_i is singular.
    """
    fld = P.field
    tol = (tol or Tolerance.default(fld)).for_field(fld)
    ok, note = _preflight(X, P, tol, strict)
    n, k = P.n, P.k
    zero = fld.zero()

    trA2 = trace(P.coefficient(2)) if n >= 2 else zero
    s2A1 = sigma2(P.coefficient(1))
    lhs = trA2 + s2A1
    traces = [trace(Xi) for Xi in X]
    s2X = [sigma2(Xi) for Xi in X]
    cross = sum((a * b for a, b in combinations(traces, 2)), zero)
    rhs = cross + sum(s2X, zero)
    scale = max(abs(trA2) + abs(s2A1),
                sum(abs(a) * abs(b) for a, b in combinations(traces, 2)) + sum(abs(s) for s in s2X))
    r12 = _compare(EQ12, lhs, rhs, scale, tol, fld, ok, note)

    try:
        An_inv, X_inv = eq13_inverses(X, P, tol)
    except PreconditionFailed as exc:
        r13 = _skipped(EQ13, f"skipped: precondition ({exc.which} is singular)")
        return r12, r13
    lhs = det(P.coefficient(n)) * trace(mat_mul(An_inv, P.coefficient(n - 1)))
    prod = fld.one()
    for Xi in X:
        prod *= det(Xi)
    inv_traces = [trace(Y) for Y in X_inv]
    rhs = _sign(k * n - 1) * prod * sum(inv_traces, zero)
    scale = max(abs(lhs), abs(rhs), abs(prod) * sum(abs(t) for t in inv_traces))
    r13 = _compare(EQ13, lhs, rhs, scale, tol, fld, ok, note)
    return r12, r13

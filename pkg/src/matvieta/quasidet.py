"""Quasideterminants of block matrices and the noncommutative Cramer rule.

Row and column labels travel with their blocks, so a submatrix keeps the
labels of the rows/columns it retains and every quasideterminant is
addressed by labels, not positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from .errors import DimensionMismatch, QdUndefined, Singular
from .matrix import Matrix, lu_solve
from .numeric import Tolerance
from .vieta import LEFT, RIGHT, _check_uniform, block_vandermonde


@dataclass(frozen=True)
class BlockMatrix:
    """m x m grid of k x k blocks with row labels I and column labels J."""

    grid: tuple
    row_labels: tuple = None
    col_labels: tuple = None

    def __post_init__(self):
        grid = tuple(tuple(r) for r in self.grid)
        m = len(grid)
        if m < 1 or any(len(r) != m for r in grid):
            raise DimensionMismatch("block grid must be square and non-empty")
        _check_uniform([b for r in grid for b in r])
        rows = tuple(range(1, m + 1)) if self.row_labels is None else tuple(self.row_labels)
        cols = tuple(range(1, m + 1)) if self.col_labels is None else tuple(self.col_labels)
        if len(rows) != m or len(cols) != m or len(set(rows)) != m or len(set(cols)) != m:
            raise DimensionMismatch("need m distinct row labels and m distinct column labels")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "row_labels", rows)
        object.__setattr__(self, "col_labels", cols)

    @property
    def m(self) -> int:
        return len(self.grid)

    @property
    def k(self) -> int:
        return self.grid[0][0].k

    @property
    def field(self):
        return self.grid[0][0].field

    def _pos(self, p, q):
        try:
            return self.row_labels.index(p), self.col_labels.index(q)
        except ValueError:
            raise IndexError(f"label ({p}, {q}) not in rows {self.row_labels} / cols {self.col_labels}") from None

    def block(self, p, q) -> Matrix:
        i, j = self._pos(p, q)
        return self.grid[i][j]

    def flatten(self) -> list[list]:
        """The mk x mk scalar matrix as a list of rows."""
        k = self.k
        return [[self.grid[bi][bj].rows[r][c] for bj in range(self.m) for c in range(k)]
                for bi in range(self.m) for r in range(k)]

    def with_column(self, q, blocks: Sequence[Matrix]) -> "BlockMatrix":
        """Replace column ``q`` by ``blocks`` (given in row-label order)."""
        _, j = self._pos(self.row_labels[0], q)
        grid = [list(r) for r in self.grid]
        for i, b in enumerate(blocks):
            grid[i][j] = b
        return BlockMatrix(grid, self.row_labels, self.col_labels)

    def with_row(self, p, blocks: Sequence[Matrix]) -> "BlockMatrix":
        """Replace row ``p`` by ``blocks`` (given in column-label order)."""
        i, _ = self._pos(p, self.col_labels[0])
        grid = [list(r) for r in self.grid]
        grid[i] = list(blocks)
        return BlockMatrix(grid, self.row_labels, self.col_labels)


def submatrix(A: BlockMatrix, p, q) -> BlockMatrix:
    """A^{pq}: drop row ``p`` and column ``q``, keeping the other labels."""
    if A.m < 2:
        raise IndexError("cannot remove a row and column from a 1 x 1 grid")
    i, j = A._pos(p, q)
    grid = [[b for c, b in enumerate(row) if c != j] for r, row in enumerate(A.grid) if r != i]
    rows = tuple(x for x in A.row_labels if x != p)
    cols = tuple(x for x in A.col_labels if x != q)
    return BlockMatrix(grid, rows, cols)


def quasideterminant(A: BlockMatrix, p: Hashable, q: Hashable, tol: Tolerance | None = None) -> Matrix:
    """|A|_pq = a_pq - sum_{i != p, j != q} a_pj |A^{pq}|_ij^{-1} a_iq.

    Inner quasideterminants are memoized per (row labels, column labels, i, j)
    for the duration of this call. Raises ``QdUndefined`` naming the inner
    (i, j) whose quasideterminant could not be inverted.
    """
    A._pos(p, q)
    tol = (tol or Tolerance.default(A.field)).for_field(A.field)
    ridx = {lab: r for r, lab in enumerate(A.row_labels)}
    cidx = {lab: c for c, lab in enumerate(A.col_labels)}
    g = A.grid
    memo: dict = {}

    def qd(rows: tuple, cols: tuple, p, q) -> Matrix:
        key = (rows, cols, p, q)
        if key in memo:
            return memo[key]
        a_pq = g[ridx[p]][cidx[q]]
        if len(rows) == 1:
            memo[key] = a_pq
            return a_pq
        sub_rows = tuple(x for x in rows if x != p)
        sub_cols = tuple(x for x in cols if x != q)
        acc = a_pq
        for i in sub_rows:
            a_iq = g[ridx[i]][cidx[q]]
            for j in sub_cols:
                inner = qd(sub_rows, sub_cols, i, j)
                try:
                    y = lu_solve(inner, a_iq, tol)
                except Singular:
                    raise QdUndefined((i, j), (sub_rows, sub_cols)) from None
                acc = acc - g[ridx[p]][cidx[j]] @ y
        memo[key] = acc
        return acc

    return qd(A.row_labels, A.col_labels, p, q)


def _left_div(Q: Matrix, R: Matrix, tol) -> Matrix:
    return lu_solve(Q, R, tol)


def _right_div(R: Matrix, Q: Matrix, tol) -> Matrix:
    return lu_solve(Q.T, R.T, tol).T


def kramer_solve(
    A: BlockMatrix, xi: Sequence[Matrix], i: Hashable, tol: Tolerance | None = None,
    side: str = RIGHT,
) -> list[Matrix]:
    """Solve a block linear system with quasideterminants.

    ``side="right"``: sum_j a_ij x_j = xi_i, x_j = |A|_ij^{-1} |A_j(xi)|_ij,
    where A_j(xi) has column j replaced by xi and ``i`` is a row label.

    ``side="left"``: sum_j x_j a_ji = xi_i, x_j = |A^j(xi)|_ji |A|_ji^{-1},
    where A^j(xi) has row j replaced by xi and ``i`` is a column label.
    """
    if len(xi) != A.m:
        raise DimensionMismatch(f"right-hand side needs {A.m} blocks, got {len(xi)}")
    tol = (tol or Tolerance.default(A.field)).for_field(A.field)
    out = []
    if side == RIGHT:
        for j in A.col_labels:
            den = quasideterminant(A, i, j, tol)
            num = quasideterminant(A.with_column(j, xi), i, j, tol)
            out.append(_left_div(den, num, tol))
    elif side == LEFT:
        for j in A.row_labels:
            den = quasideterminant(A, j, i, tol)
            num = quasideterminant(A.with_row(j, xi), j, i, tol)
            out.append(_right_div(num, den, tol))
    else:
        raise ValueError("side must be 'left' or 'right'")
    return out


def vandermonde_rows(X: Sequence[Matrix]) -> BlockMatrix:
    """Grid with block (r, c) = X_r^c: row labels 1..n, column labels are
    the powers 0..n-1."""
    W = block_vandermonde(X)
    n = W.m
    grid = [[W.grid[c][r] for c in range(n)] for r in range(n)]
    return BlockMatrix(grid, tuple(range(1, n + 1)), tuple(range(n)))


def recover_via_quasidet(
    X: Sequence[Matrix], j: int, i: int, tol: Tolerance | None = None, side: str = LEFT
) -> Matrix:
    """A_j of the monic equation through X_1..X_n, as a ratio of two
    quasideterminants of the block Vandermonde matrix.

    ``i`` in 1..n picks the solution X_i whose block line the
    quasideterminants are expanded at (both factors use the same i).

    ``side="left"`` (equation X^n + A_1 X^{n-1} + ... + A_n = 0): the grid has
    rows = powers 0..n-1 and columns = solutions, and
        -A_j = |W'|_{n-j, i} |W|_{n-j, i}^{-1}
    with W' = W whose power-(n-j) row is replaced by (X_1^n ... X_n^n).

    ``side="right"`` (equation X^n + X^{n-1} A_1 + ... + A_n = 0): the grid
    has rows = solutions and columns = powers, and
        -A_j = |V|_{i, n-j}^{-1} |V'|_{i, n-j}
    with the power-(n-j) column of V replaced by (X_1^n ... X_n^n).
    """
    n = len(X)
    if not 1 <= j <= n:
        raise IndexError(f"coefficient index {j} outside 1..{n}")
    if not 1 <= i <= n:
        raise IndexError(f"row label {i} outside 1..{n}")
    k, fld = _check_uniform(X)
    tol = (tol or Tolerance.default(fld)).for_field(fld)
    top = [Xr**n for Xr in X]
    if side == LEFT:
        W = block_vandermonde(X)
        W = BlockMatrix(W.grid, tuple(range(n)), tuple(range(1, n + 1)))
        den = quasideterminant(W, n - j, i, tol)
        num = quasideterminant(W.with_row(n - j, top), n - j, i, tol)
        return -_right_div(num, den, tol)
    if side == RIGHT:
        V = vandermonde_rows(X)
        den = quasideterminant(V, i, n - j, tol)
        num = quasideterminant(V.with_column(n - j, top), i, n - j, tol)
        return -_left_div(den, num, tol)
    raise ValueError("side must be 'left' or 'right'")

"""Solvents of a monic matrix polynomial from its polynomial eigenpairs,
plus seeded instance generation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Sequence

from .eigen import eigenpairs, normalize, vec_norm
from .errors import DependentEigenvectors, EigenFailure, NotIndependent, RetryExhausted, Singular
from .matrix import Matrix, det_rows, from_columns, inverse, matvec
from .numeric import (
    DEFAULT_DISTRIBUTION,
    Field,
    ScalarDistribution,
    Tolerance,
    make_rng,
    random_scalar,
)
from .vieta import MatrixPolynomial, is_independent, recover_coefficients

FROM_SOLVENTS = "from-solvents"
FROM_SPECTRUM = "from-spectrum"
MAX_RETRIES = 100


@dataclass(frozen=True)
class PolyEigenPair:
    value: complex
    vector: tuple
    residual: float


@dataclass(frozen=True)
class Solvent:
    X: Matrix
    residual: float
    rel_residual: float
    indices: tuple


@dataclass
class SolventSet:
    solvents: list
    eigenpairs: list
    skipped: list = dc_field(default_factory=list)  # (indices, reason)
    dedup_rel: float = 1e-6
    degenerate: bool = False
    min_gap: float = math.inf

    def __len__(self):
        return len(self.solvents)

    def __iter__(self):
        return iter(self.solvents)

    @property
    def matrices(self) -> list[Matrix]:
        return [s.X for s in self.solvents]


def companion(P: MatrixPolynomial) -> Matrix:
    """nk x nk block companion matrix: identities on the block superdiagonal,
    last block row (-A_n, ..., -A_1)."""
    n, k, fld = P.n, P.k, P.field
    N = n * k
    zero, one = fld.zero(), fld.one()
    rows = [[zero] * N for _ in range(N)]
    for b in range(n - 1):
        for r in range(k):
            rows[b * k + r][(b + 1) * k + r] = one
    for c in range(n):
        A = P.coeffs[n - 1 - c]
        for r in range(k):
            for s in range(k):
                rows[(n - 1) * k + r][c * k + s] = -A.rows[r][s]
    return Matrix._raw(rows, fld)


def _poly_scale(P: MatrixPolynomial, lam: complex) -> float:
    a = abs(lam)
    return math.sqrt(P.k) * a**P.n + sum(A.norm() * a ** (P.n - j) for j, A in enumerate(P.coeffs, 1))


def polynomial_eigenpairs(P: MatrixPolynomial, residual_rel: float = 1e-8) -> list[PolyEigenPair]:
    """The nk pairs (lambda, v) with (lambda^n + lambda^{n-1} A_1 + ... + A_n) v = 0.

    Computed from the companion matrix; v is read off the block of the
    companion eigenvector (which has the form (v, lambda v, ..., lambda^{n-1} v))
    with the largest norm. Residuals are recomputed against P itself.
    """
    Pc = P.to_complex()
    n, k = Pc.n, Pc.k
    out = []
    for ep in eigenpairs(companion(Pc)):
        lam = ep.value
        blocks = [ep.vector[b * k:(b + 1) * k] for b in range(n)]
        b = max(range(n), key=lambda i: vec_norm(blocks[i]))
        v = normalize(blocks[b])
        res = vec_norm(matvec(Pc.at_scalar(lam), v))
        bound = residual_rel * max(1.0, _poly_scale(Pc, lam))
        if res > bound:
            raise EigenFailure(f"polynomial eigenpair residual {res:.3e} exceeds {bound:.3e}")
        out.append(PolyEigenPair(lam, v, res))
    out.sort(key=lambda e: (e.value.real, e.value.imag))
    return out


def min_separation(values: Sequence[complex]) -> float:
    return min((abs(a - b) for a, b in combinations(values, 2)), default=math.inf)


def build_solvent(pairs: Sequence, independence_rel: float = 1e-8) -> Matrix:
    """X = V diag(lambda) V^{-1} from k eigenpairs (columns of V are the vectors).

    ``DependentEigenvectors`` when |det V| / prod ||v_i|| < ``independence_rel``.
    """
    k = len(pairs)
    vecs = [tuple(complex(x) for x in p.vector) for p in pairs]
    if any(len(v) != k for v in vecs):
        raise ValueError("need exactly k eigenpairs of length-k vectors")
    V = from_columns(vecs, Field.COMPLEX)
    colprod = math.prod(vec_norm(v) for v in vecs)
    d = det_rows(V.to_lists(), Field.COMPLEX)
    if colprod == 0 or abs(d) < independence_rel * colprod:
        raise DependentEigenvectors(f"|det V| = {abs(d):.3e} below threshold")
    VD = from_columns([[p.value * x for x in v] for p, v in zip(pairs, vecs)], Field.COMPLEX)
    try:
        Vinv = inverse(V, Tolerance(0.0, 0.0))
    except Singular as exc:
        raise DependentEigenvectors(str(exc)) from None
    return VD @ Vinv


def _distance(X: Matrix, Y: Matrix) -> float:
    return max(abs(a - b) for a, b in zip(X.entries, Y.entries))


def enumerate_solvents(
    P: MatrixPolynomial,
    residual_rel: float = 1e-7,
    dedup_rel: float = 1e-6,
    cluster_rel: float = 1e-6,
    independence_rel: float = 1e-8,
) -> SolventSet:
    """Every solvent obtainable from a k-subset of the nk polynomial eigenpairs.

    Subsets are visited in lexicographic order over eigenpairs sorted by
    (Re, Im) of lambda. A subset is skipped when its vectors are dependent,
    its solvent's residual exceeds ``residual_rel`` times the size of the
    summed terms, or it duplicates an earlier solvent within
    ``dedup_rel * (1 + larger norm)`` in max-entry distance.
    """
    Pc = P.to_complex()
    pairs = polynomial_eigenpairs(Pc)
    values = [p.value for p in pairs]
    gap = min_separation(values)
    spread = max((abs(v) for v in values), default=0.0)
    result = SolventSet([], pairs, dedup_rel=dedup_rel, min_gap=gap,
                        degenerate=gap <= cluster_rel * (1 + spread))
    for idx in combinations(range(len(pairs)), Pc.k):
        try:
            X = build_solvent([pairs[i] for i in idx], independence_rel)
        except DependentEigenvectors:
            result.skipped.append((idx, "dependent eigenvectors"))
            continue
        res = Pc.residual(X)
        rel = res / max(Pc.residual_scale(X), 1e-300)
        if rel > residual_rel:
            result.skipped.append((idx, f"residual {rel:.2e}"))
            continue
        nX = X.norm()
        dup = next((s for s in result.solvents
                    if _distance(s.X, X) <= dedup_rel * (1 + max(nX, s.X.norm()))), None)
        if dup is not None:
            result.skipped.append((idx, f"duplicate of {dup.indices}"))
            continue
        result.solvents.append(Solvent(X, res, rel, idx))
    return result


# -- instance generation --------------------------------------------------
def _sample_spectrum(rng, count: int, field: Field, dist: ScalarDistribution, gap: float):
    vals = []
    tries = 0
    while len(vals) < count:
        tries += 1
        if tries > MAX_RETRIES * count:
            raise RetryExhausted("could not place eigenvalues with the requested gap")
        z = random_scalar(rng, field, dist)
        if all(abs(z - w) >= gap for w in vals):
            vals.append(z)
    return vals


def _well_conditioned(V: Matrix, ratio: float) -> bool:
    cols = [V.column(j) for j in range(V.k)]
    colprod = math.prod(math.sqrt(sum(float(abs(x)) ** 2 for x in c)) for c in cols)
    d = det_rows(V.to_lists(), V.field)
    return colprod > 0 and float(abs(d)) >= ratio * colprod


def random_instance(
    seed: int,
    n: int,
    k: int,
    mode: str = FROM_SOLVENTS,
    field: Field | str = Field.COMPLEX,
    dist: ScalarDistribution = DEFAULT_DISTRIBUTION,
    tol: Tolerance | None = None,
    gap: float = 0.1,
    vector_ratio: float = 0.05,
) -> tuple[tuple, MatrixPolynomial]:
    """A seeded independent solution tuple and the polynomial it determines.

    ``from-solvents``: entries of each X_i drawn from ``dist``.
    ``from-spectrum``: nk eigenvalues at pairwise distance >= ``gap``;
    X_i = V_i diag(lambda_i1..lambda_ik) V_i^{-1} with random V_i whose
    |det| / prod(column norms) >= ``vector_ratio``.
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    field = Field(field)
    tol = (tol or Tolerance.default(field)).for_field(field)
    rng = make_rng(seed)
    for _ in range(MAX_RETRIES):
        if mode == FROM_SOLVENTS:
            X = tuple(Matrix.random(rng, k, field, dist) for _ in range(n))
        elif mode == FROM_SPECTRUM:
            lams = _sample_spectrum(rng, n * k, field, dist, gap)
            X = []
            for i in range(n):
                for _ in range(MAX_RETRIES):
                    V = Matrix.random(rng, k, field, dist)
                    if _well_conditioned(V, vector_ratio):
                        break
                else:
                    raise RetryExhausted("could not draw well-conditioned eigenvectors")
                D = Matrix.diag(lams[i * k:(i + 1) * k], field)
                X.append(V @ D @ inverse(V, tol))
            X = tuple(X)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        if not is_independent(X, tol).independent:
            continue
        try:
            P = recover_coefficients(X, tol)
        except NotIndependent:
            continue
        return X, P
    raise RetryExhausted(f"no independent instance after {MAX_RETRIES} draws")

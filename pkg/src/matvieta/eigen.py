"""Eigenpairs of small complex matrices.

Eigenvalues are the roots of the characteristic polynomial (Aberth-Ehrlich
simultaneous iteration, Newton polish). Eigenvectors come from the null
space of A - lambda I by complete-pivoting elimination, followed by a few
inverse-iteration steps on the matrix itself. Adequate for k <= ~12; not a
substitute for a QR eigensolver at larger sizes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DefectiveMatrix, EigenFailure, Singular, VariantMismatch
from .matrix import Matrix, char_poly, matvec, solve_rows
from .numeric import Field, Tolerance

EPS = 2.0**-52
MAX_SWEEPS = 500


@dataclass(frozen=True)
class EigenPair:
    value: complex
    vector: tuple
    residual: float


def vec_norm(v: Sequence[complex]) -> float:
    return math.sqrt(sum(abs(x) ** 2 for x in v))


def normalize(v: Sequence[complex]) -> tuple:
    """Unit 2-norm, phase fixed so the largest component is real positive."""
    nrm = vec_norm(v)
    big = max(v, key=abs)
    phase = big / abs(big)
    return tuple(x / (nrm * phase) for x in v)


def _horner(coeffs, z):
    p = 0j
    dp = 0j
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _abs_horner(coeffs, r):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * r + abs(c)
    return acc


def poly_roots(coeffs: Sequence, max_sweeps: int = MAX_SWEEPS) -> list[complex]:
    """All roots of the polynomial with coefficients ``coeffs`` (low to high).

    A root is converged once |p(z)| is within a few ulps of the rounding
    error bound of Horner evaluation, which also terminates cleanly on
    multiple roots.
    """
    c = [complex(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    lead = c[-1]
    c = [x / lead for x in c]
    d = len(c) - 1
    if d < 1:
        return []
    if d == 1:
        return [-c[0]]

    center = -c[d - 1] / d
    radius = max(abs(c[i]) ** (1.0 / (d - i)) for i in range(d)) or 1.0
    z = [center + radius * cmath.exp(1j * (2 * math.pi * j / d + 0.4)) for j in range(d)]
    done = [False] * d
    for _ in range(max_sweeps):
        for j in range(d):
            if done[j]:
                continue
            p, dp = _horner(c, z[j])
            if abs(p) <= 4 * d * EPS * _abs_horner(c, abs(z[j])):
                done[j] = True
                continue
            if dp == 0:
                z[j] += radius * 1e-8 * (1 + 1j)
                continue
            ratio = p / dp
            s = sum(1 / (z[j] - z[l]) for l in range(d) if l != j and z[j] != z[l])
            denom = 1 - ratio * s
            z[j] -= ratio / denom if denom != 0 else ratio
        if all(done):
            break
    else:
        raise EigenFailure(f"root iteration did not converge in {max_sweeps} sweeps")
    return [_newton_polish(c, zj) for zj in z]


def _newton_polish(c, z, steps: int = 3):
    p, dp = _horner(c, z)
    for _ in range(steps):
        if dp == 0 or p == 0:
            break
        cand = z - p / dp
        pc, dpc = _horner(c, cand)
        if abs(pc) >= abs(p):
            break
        z, p, dp = cand, pc, dpc
    return z


def null_space(rows: list[list[complex]], threshold: float, min_dim: int = 1) -> list[tuple]:
    """Null-space basis of a square matrix by complete pivoting.

    Elimination stops once every remaining entry is <= ``threshold`` or when
    only ``min_dim`` columns are left; the leftover columns are the free
    variables. Raises ``DefectiveMatrix`` when fewer than ``min_dim`` columns
    could be freed.
    """
    a = [list(r) for r in rows]
    n = len(a)
    cols = list(range(n))
    rank = 0
    for s in range(n - min_dim):
        best, br, bc = -1.0, s, s
        for r in range(s, n):
            for cc in range(s, n):
                m = abs(a[r][cc])
                if m > best:
                    best, br, bc = m, r, cc
        if best <= threshold:
            break
        a[s], a[br] = a[br], a[s]
        for r in a:
            r[s], r[bc] = r[bc], r[s]
        cols[s], cols[bc] = cols[bc], cols[s]
        p = a[s][s]
        for r in range(s + 1, n):
            f = a[r][s] / p
            if f == 0:
                continue
            for cc in range(s + 1, n):
                a[r][cc] -= f * a[s][cc]
            a[r][s] = 0j
        rank += 1
    if n - rank < min_dim:
        raise DefectiveMatrix("could not extract a null-space vector")
    # A leftover column only counts as free if its remaining entries are small.
    leftover = max((abs(a[r][cc]) for r in range(rank, n) for cc in range(rank, n)), default=0.0)
    if leftover > threshold:
        raise DefectiveMatrix("null space is smaller than required")
    basis = []
    for f in range(rank, n):
        y = [0j] * n
        y[f] = 1 + 0j
        for r in range(rank - 1, -1, -1):
            s = -sum(a[r][cc] * y[cc] for cc in range(r + 1, n))
            y[r] = s / a[r][r]
        x = [0j] * n
        for pos, col in enumerate(cols):
            x[col] = y[pos]
        basis.append(normalize(x))
    return basis


def _residual(A: Matrix, lam: complex, v) -> float:
    Av = matvec(A, v)
    return vec_norm([a - lam * x for a, x in zip(Av, v)])


def _rayleigh(A: Matrix, v) -> complex:
    Av = matvec(A, v)
    return sum(x.conjugate() * y for x, y in zip(v, Av)) / sum(abs(x) ** 2 for x in v)


def _refine(A: Matrix, lam: complex, v, guard: float, steps: int = 3):
    """Inverse iteration with Rayleigh-quotient updates. ``guard`` bounds how
    far lambda may drift, keeping it from jumping to a neighbour."""
    res = _residual(A, lam, v)
    target = 4 * EPS * max(1.0, A.norm())
    origin = lam
    for _ in range(steps):
        if res <= target:
            break
        shifted = [[A.rows[i][j] - (lam if i == j else 0) for j in range(A.k)] for i in range(A.k)]
        try:
            w = solve_rows(shifted, [[x] for x in v], Field.COMPLEX, Tolerance(0.0, 0.0))
        except Singular:
            break
        w = normalize([r[0] for r in w])
        new_lam = _rayleigh(A, w)
        new_res = _residual(A, new_lam, w)
        if new_res >= res or abs(new_lam - origin) > guard:
            break
        lam, v, res = new_lam, w, new_res
    return lam, v, res


def _inverse_iteration_start(A: Matrix, z: complex) -> tuple:
    # Deterministic, generic right-hand side.
    b = [[complex(1.0, 0.1 * (i + 1))] for i in range(A.k)]
    shifted = [[A.rows[i][j] - (z if i == j else 0) for j in range(A.k)] for i in range(A.k)]
    try:
        w = solve_rows(shifted, b, Field.COMPLEX, Tolerance(0.0, 0.0))
    except Singular:
        return null_space(shifted, math.inf)[0]
    return normalize([r[0] for r in w])


def eigenpairs(
    A: Matrix, max_sweeps: int = MAX_SWEEPS, residual_rel: float = 1e-8,
    cluster_rel: float = 1e-3,
) -> list[EigenPair]:
    """All k eigenpairs of a complex matrix, sorted by (Re, Im) of lambda.

    Raises ``EigenFailure`` if root iteration does not converge or a final
    residual exceeds ``residual_rel * max(1, ||A||_F)``.
    """
    if A.field is not Field.COMPLEX:
        raise VariantMismatch("eigenpairs needs a complex matrix")
    k = A.k
    scale = max(1.0, A.norm())
    roots = poly_roots(char_poly(A).coeffs, max_sweeps)
    roots.sort(key=lambda z: (z.real, z.imag))

    # Multiple roots come back spread by ~eps**(1/m); group them (single
    # linkage) so they can share one null space.
    clusters: list[list[complex]] = []
    for z in roots:
        near = [cl for cl in clusters if any(abs(w - z) <= cluster_rel * scale for w in cl)]
        merged = [z]
        for cl in near:
            clusters.remove(cl)
            merged.extend(cl)
        clusters.append(merged)

    relaxed = 1e-6 * scale
    bound = residual_rel * scale
    pairs = []
    for cl in clusters:
        mu = sum(cl) / len(cl)
        if len(cl) > 1:
            spread = max(abs(z - mu) for z in cl)
            shifted = [[A.rows[i][j] - (mu if i == j else 0) for j in range(k)] for i in range(k)]
            try:
                basis = null_space(shifted, max(relaxed, 100 * spread), min_dim=len(cl))
            except DefectiveMatrix:
                basis = []
            cand = [(_rayleigh(A, v), v) for v in basis]
            if cand and all(_residual(A, lam, v) <= bound for lam, v in cand):
                pairs.extend(cand)
                continue
        others = [z for z in roots if z not in cl]
        for z in cl:
            shifted = [[A.rows[i][j] - (z if i == j else 0) for j in range(k)] for i in range(k)]
            try:
                v = null_space(shifted, relaxed, min_dim=1)[0]
            except DefectiveMatrix:
                v = _inverse_iteration_start(A, z)
            gap = min((abs(z - o) for o in others), default=scale)
            pairs.append(_refine(A, z, v, gap / 2)[:2])

    out = []
    for lam, v in pairs:
        v = normalize(v)
        res = _residual(A, lam, v)
        if res > bound:
            raise EigenFailure(f"eigenpair residual {res:.3e} exceeds {bound:.3e}")
        out.append(EigenPair(complex(lam), v, res))
    out.sort(key=lambda e: (e.value.real, e.value.imag))
    return out

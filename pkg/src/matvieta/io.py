"""JSON encodings of matrices, instances, block matrices, solvent sets and
verification reports.

Complex entries are ``[re, im]`` floats (Python's shortest round-trip repr);
rational entries are ``["num", "den"]`` decimal strings.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from .errors import FormatError
from .matrix import Matrix
from .numeric import Field, Tolerance
from .quasidet import BlockMatrix
from .solvents import SolventSet
from .vieta import (
    EQ12_CONVENTION,
    EQ13_CONVENTION,
    IdentityReport,
    Independence,
    MatrixPolynomial,
    SolutionCheck,
)

INSTANCE_FORMAT = "matvieta-instance"


# -- scalars and matrices -------------------------------------------------
def encode_scalar(x):
    if isinstance(x, Fraction):
        return [str(x.numerator), str(x.denominator)]
    x = complex(x)
    return [x.real, x.imag]


def decode_scalar(obj, field: Field):
    if not (isinstance(obj, list) and len(obj) == 2):
        raise FormatError(f"scalar must be a 2-element list, got {obj!r}")
    if field.exact:
        try:
            num, den = (int(s) if isinstance(s, str) else None for s in obj)
        except ValueError:
            raise FormatError(f"rational entry must hold decimal strings: {obj!r}") from None
        if num is None or den is None or den == 0:
            raise FormatError(f"invalid rational entry {obj!r}")
        return Fraction(num, den)
    re, im = obj
    if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
        raise FormatError(f"complex entry must hold two numbers: {obj!r}")
    z = complex(float(re), float(im))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise FormatError("non-finite complex entry")
    return z


def encode_matrix(M: Matrix) -> dict:
    return {"k": M.k, "data": [[encode_scalar(x) for x in r] for r in M.rows]}


def decode_matrix(obj, field: Field, k: Optional[int] = None) -> Matrix:
    if not isinstance(obj, dict) or "k" not in obj or "data" not in obj:
        raise FormatError("matrix must be an object with 'k' and 'data'")
    mk, data = obj["k"], obj["data"]
    if not isinstance(mk, int) or mk < 1:
        raise FormatError("matrix order 'k' must be a positive integer")
    if k is not None and mk != k:
        raise FormatError(f"matrix order {mk} does not match k = {k}")
    if not isinstance(data, list) or len(data) != mk or any(
        not isinstance(r, list) or len(r) != mk for r in data
    ):
        raise FormatError(f"matrix data must be {mk} rows of {mk} entries")
    return Matrix._raw([[decode_scalar(x, field) for x in r] for r in data], field)


def _field(obj) -> Field:
    try:
        return Field(obj.get("scalar", "complex"))
    except ValueError:
        raise FormatError(f"unknown scalar variant {obj.get('scalar')!r}") from None


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


# -- instances ------------------------------------------------------------
@dataclass
class Instance:
    field: Field
    n: int
    k: int
    solutions: Optional[tuple] = None
    coefficients: Optional[MatrixPolynomial] = None
    seed: Optional[int] = None
    mode: Optional[str] = None

    def __post_init__(self):
        if self.solutions is None and self.coefficients is None:
            raise FormatError("an instance needs solutions or coefficients")
        if self.solutions is not None:
            self.solutions = tuple(self.solutions)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        mine = None if self.coefficients is None else self.coefficients.coeffs
        theirs = None if other.coefficients is None else other.coefficients.coeffs
        return (self.field, self.n, self.k, self.solutions, mine, self.seed, self.mode) == (
            other.field, other.n, other.k, other.solutions, theirs, other.seed, other.mode)


def instance_to_json(inst: Instance) -> dict:
    return {
        "format": INSTANCE_FORMAT,
        "scalar": inst.field.value,
        "n": inst.n,
        "k": inst.k,
        "solutions": None if inst.solutions is None else [encode_matrix(X) for X in inst.solutions],
        "coefficients": None if inst.coefficients is None
        else [encode_matrix(A) for A in inst.coefficients.coeffs],
        "seed": inst.seed,
        "mode": inst.mode,
    }


def instance_from_json(obj) -> Instance:
    if not isinstance(obj, dict):
        raise FormatError("instance file must hold a JSON object")
    fld = _field(obj)
    n, k = obj.get("n"), obj.get("k")
    if not (isinstance(n, int) and isinstance(k, int) and n >= 1 and k >= 1):
        raise FormatError("'n' and 'k' must be positive integers")
    sols = obj.get("solutions")
    coeffs = obj.get("coefficients")
    if sols is None and coeffs is None:
        raise FormatError("instance needs 'solutions' or 'coefficients'")
    X = P = None
    if sols is not None:
        if not isinstance(sols, list) or len(sols) != n:
            raise FormatError(f"expected {n} solutions")
        X = tuple(decode_matrix(m, fld, k) for m in sols)
    if coeffs is not None:
        if not isinstance(coeffs, list) or len(coeffs) != n:
            raise FormatError(f"expected {n} coefficients")
        P = MatrixPolynomial(tuple(decode_matrix(m, fld, k) for m in coeffs))
    seed = obj.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise FormatError("'seed' must be an integer or null")
    return Instance(fld, n, k, X, P, seed, obj.get("mode"))


def read_instance(path: str) -> Instance:
    return instance_from_json(_load_json(path))


# -- block matrices -------------------------------------------------------
def block_matrix_to_json(A: BlockMatrix) -> dict:
    return {
        "scalar": A.field.value,
        "m": A.m,
        "k": A.k,
        "blocks": [[encode_matrix(b) for b in r] for r in A.grid],
        "row_labels": list(A.row_labels),
        "col_labels": list(A.col_labels),
    }


def block_matrix_from_json(obj) -> BlockMatrix:
    if not isinstance(obj, dict) or "blocks" not in obj:
        raise FormatError("block-matrix file needs a 'blocks' grid")
    fld = _field(obj)
    blocks = obj["blocks"]
    if not isinstance(blocks, list) or not blocks:
        raise FormatError("'blocks' must be a non-empty grid")
    m = obj.get("m", len(blocks))
    k = obj.get("k")
    if len(blocks) != m or any(not isinstance(r, list) or len(r) != m for r in blocks):
        raise FormatError(f"'blocks' must be {m} x {m}")
    grid = [[decode_matrix(b, fld, k) for b in r] for r in blocks]
    try:
        return BlockMatrix(grid, obj.get("row_labels"), obj.get("col_labels"))
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc)) from None


def read_block_matrix(path: str) -> BlockMatrix:
    return block_matrix_from_json(_load_json(path))


# -- solvent sets ---------------------------------------------------------
def solvent_set_to_json(S: SolventSet, n: int, k: int) -> dict:
    return {
        "scalar": "complex",
        "n": n,
        "k": k,
        "count": len(S.solvents),
        "generic_count": comb(n * k, k),
        "solvents": [
            {"X": encode_matrix(s.X), "residual": s.residual, "rel_residual": s.rel_residual,
             "indices": list(s.indices)}
            for s in S.solvents
        ],
        "eigenvalues": [encode_scalar(p.value) for p in S.eigenpairs],
        "skipped_count": len(S.skipped),
        "skipped": [{"indices": list(idx), "reason": why} for idx, why in S.skipped],
        "dedup_rel": S.dedup_rel,
        "degenerate_spectrum": S.degenerate,
        "min_gap": None if math.isinf(S.min_gap) else S.min_gap,
    }


# -- reports --------------------------------------------------------------
def _status(r: IdentityReport) -> str:
    if r.skipped:
        return "skipped"
    return "pass" if r.passed else "fail"


def identity_report_to_json(r: IdentityReport) -> dict:
    if isinstance(r.abs_err, Fraction):
        abs_err = encode_scalar(r.abs_err)
    else:
        abs_err = r.abs_err
    rel = r.rel_err
    return {
        "identity": r.identity,
        "status": _status(r),
        "lhs": None if r.lhs is None else encode_scalar(r.lhs),
        "rhs": None if r.rhs is None else encode_scalar(r.rhs),
        "abs_err": abs_err,
        "rel_err": None if rel is None or not math.isfinite(rel) else rel,
        "scale": r.scale,
        "passed": r.passed,
        "preconditions_met": r.preconditions_met,
        "note": r.note,
    }


def verify_report_to_json(
    version: str, field: Field, n: int, k: int, tol: Tolerance, indep: Independence,
    residuals: list[SolutionCheck], reports: list[IdentityReport], ok: bool,
) -> dict:
    return {
        "tool": "matvieta",
        "version": version,
        "scalar": field.value,
        "n": n,
        "k": k,
        "tolerances": {"rel": tol.rel, "abs": tol.abs, "exact": field.exact},
        "independence": {"independent": indep.independent, "det": encode_scalar(indep.det),
                         "threshold": indep.threshold},
        "residuals": [{"index": c.index, "residual": c.residual, "bound": c.bound, "ok": c.ok}
                      for c in residuals],
        "identities": [identity_report_to_json(r) for r in reports],
        "conventions": {"Eq12": EQ12_CONVENTION, "Eq13": EQ13_CONVENTION},
        "all_passed": ok,
    }

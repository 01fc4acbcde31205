"""Monic matrix polynomial equations: coefficient recovery from independent
solutions, solvent enumeration, and trace/determinant identities checked over
complex floats and exact rationals."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .numeric import EXACT, Field, ScalarDistribution, Tolerance, approx_eq, random_scalar, scalar_inv
from .matrix import (
    CharPoly,
    Matrix,
    char_poly,
    det,
    inverse,
    lu_solve,
    mat_add,
    mat_mul,
    mat_pow,
    mat_scale,
    mat_sub,
    sigma2,
    trace,
)
from .eigen import EigenPair, eigenpairs
from .vieta import (
    IdentityReport,
    MatrixPolynomial,
    block_vandermonde,
    check_extras,
    check_vieta,
    is_independent,
    n2_closed_form,
    recover_coefficients,
)
from .quasidet import BlockMatrix, kramer_solve, quasideterminant, recover_via_quasidet, submatrix
from .solvents import (
    PolyEigenPair,
    SolventSet,
    build_solvent,
    companion,
    enumerate_solvents,
    polynomial_eigenpairs,
    random_instance,
)

"""Exception hierarchy shared by every layer of the package."""


class MatVietaError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(MatVietaError, ValueError):
    pass


class VariantMismatch(MatVietaError, TypeError):
    """Raised when complex and rational scalars meet in one computation."""


class NonFiniteError(MatVietaError, ArithmeticError):
    """A floating operation produced NaN or Inf."""


class NotInvertible(MatVietaError, ArithmeticError):
    pass


class Singular(NotInvertible):
    """A pivot fell below the singularity threshold during elimination."""


class EigenFailure(MatVietaError, ArithmeticError):
    pass


class DefectiveMatrix(MatVietaError, ArithmeticError):
    pass


class QdUndefined(MatVietaError, ArithmeticError):
    """An inner quasideterminant was not invertible.

    ``index`` holds the (row label, column label) of the offending inner
    quasideterminant, ``labels`` the row/column label sets of the submatrix
    it was taken in.
    """

    def __init__(self, index, labels=None, message=None):
        self.index = index
        self.labels = labels
        if message is None:
            message = f"quasideterminant undefined: inner |A|_{index} is singular"
            if labels is not None:
                message += f" (rows {list(labels[0])}, cols {list(labels[1])})"
        super().__init__(message)


class NotIndependent(MatVietaError, ArithmeticError):
    pass


class NotASolution(MatVietaError, ValueError):
    def __init__(self, index, residual, bound):
        self.index = index
        self.residual = residual
        self.bound = bound
        super().__init__(
            f"X_{index} is not a solution: residual {residual:.3e} > bound {bound:.3e}"
        )


class PreconditionFailed(MatVietaError, ValueError):
    def __init__(self, which, message=None):
        self.which = which
        super().__init__(message or f"precondition failed: {which} is singular")


class DependentEigenvectors(MatVietaError, ArithmeticError):
    pass


class RetryExhausted(MatVietaError, RuntimeError):
    pass


class FormatError(MatVietaError, ValueError):
    """Malformed or inconsistent input file."""

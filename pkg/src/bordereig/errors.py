"""Exception hierarchy shared by every module of the package."""


class BorderEigError(Exception):
    """Base class for all package errors."""


class DimensionError(BorderEigError, ValueError):
    """Raised when operand shapes are incompatible."""


class NotSquareError(DimensionError):
    """Raised when an operation needs a square matrix."""


class PermutationError(BorderEigError, ValueError):
    """Raised when a sequence is not a permutation of ``range(n)``."""


class ConvergenceError(BorderEigError, ArithmeticError):
    """Raised when an iterative method exhausts its budget.

    ``best_residual`` holds the smallest residual reached before giving up.
    """

    def __init__(self, msg, best_residual=None):
        super().__init__(msg)
        self.best_residual = best_residual


class DegreeError(BorderEigError, ValueError):
    """Raised when a polynomial has the wrong degree for an operation."""


class NotARootError(BorderEigError, ValueError):
    """Raised when deflating a polynomial by a value that is not its root."""


class SizeCapError(BorderEigError, ValueError):
    """Raised when a matrix exceeds a size cap of an operation."""


class NonOrthonormalBasisError(BorderEigError):
    """Raised when an operation requires an orthonormal eigenbasis."""


class InvalidDecompositionError(BorderEigError):
    """Raised when an eigendecomposition does not describe its matrix."""


class LiftError(BorderEigError):
    """Raised when a lifted eigenvector fails its residual check."""


class NotHermitianError(BorderEigError, ValueError):
    """Raised when a Hermitian input is required."""


class GrowthError(BorderEigError, ValueError):
    """Raised for invalid growth steps (zero coupling, bad indices)."""


class MatrixFormatError(BorderEigError, ValueError):
    """Raised when a matrix or trace file cannot be parsed."""


class ZeroCouplingError(BorderEigError, ValueError):
    """Raised when a border coefficient that must be nonzero vanishes."""

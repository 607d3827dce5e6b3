"""Sharp constants of isoperimetric, Sobolev, Gagliardo-Nirenberg and
Rayleigh-Faber-Krahn inequalities on spaces with nonnegative Ricci curvature
and Euclidean volume growth, plus verification of the inequalities on
explicitly computable model spaces."""

__version__ = "0.1.0"

from .errors import (ConvergenceError, DomainError, InvariantViolation,
                     UnsupportedOperationError)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "InvariantViolation",
    "UnsupportedOperationError",
    "__version__",
]

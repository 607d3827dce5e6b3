"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the admissible region of an operation."""


class ConvergenceError(RuntimeError):
    """An iteration failed to converge.

    ``bracket`` holds the last enclosing interval when one exists, so a
    caller can restart or widen the search.
    """

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class UnsupportedOperationError(RuntimeError):
    """The operation is not defined for this space."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed (dual routes disagree, bad shape)."""

"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument is outside the range an operation accepts."""


class DomainError(ValueError):
    """An evaluation point lies outside the function's domain."""


class DegenerateMatrixError(ValueError):
    """A matrix is zero (or numerically zero) where a nonzero one is needed."""


class BudgetExceededError(RuntimeError):
    """Exhaustive enumeration would exceed the configured combinatorial budget."""

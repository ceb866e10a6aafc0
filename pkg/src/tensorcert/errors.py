"""Exception types shared across the package."""


class BudgetExceeded(RuntimeError):
    """A requested object would exceed the configured size budget."""


class NotSoSSymmetric(ValueError):
    """A matrix that must be SoS-symmetric is not, at the given tolerance."""


class ConvergenceError(RuntimeError):
    """An iterative eigensolver failed to reach its residual target."""

"""Exception types raised across the package."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class SolverError(RuntimeError):
    """Base class for failures of the per-step nonlinear solve."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats


class ConvergenceError(SolverError):
    """Newton iteration hit its iteration cap without meeting the tolerance."""


class SingularJacobianError(SolverError):
    """The Newton linear system could not be factorized."""

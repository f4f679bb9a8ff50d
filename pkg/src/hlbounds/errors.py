"""Exception types shared across the package."""


class HlboundsError(Exception):
    """Base class for all package-specific errors."""


class InvalidArgumentError(HlboundsError, ValueError):
    """An argument violates a documented precondition."""


class ResourceLimitError(HlboundsError):
    """A request exceeds the desk-scale resource caps (dimension, grid size)."""


class UnsupportedConfigurationError(HlboundsError):
    """A computation was requested outside its supported regime."""


class ConvergenceError(HlboundsError):
    """An iterative solver failed to reach its tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NumericalError(HlboundsError):
    """A numerical routine could not certify its accuracy target."""

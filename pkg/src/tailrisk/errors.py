"""Exception types shared across the package.

Numerical failures derive from :class:`TailRiskError`; malformed arguments
raise the builtin :class:`ValueError` instead.
"""


class TailRiskError(Exception):
    """Base class for numerical failures."""


class InfiniteQuantileError(TailRiskError):
    """A requested quantile or support endpoint is infinite."""


class NonIntegrableError(TailRiskError):
    """An integral needed by a risk measure or score diverges."""


class BracketError(TailRiskError):
    """A grid search found its optimum on the boundary of the grid."""


class FitError(TailRiskError):
    """Likelihood maximisation failed; ``best`` holds the best point seen."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ConfigError(ValueError):
    """A user-supplied configuration or spec string could not be parsed."""

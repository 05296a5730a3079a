"""Exception types shared across the package."""


class AgingMimoError(Exception):
    """Base class for all package errors."""


class IllConditionedError(AgingMimoError):
    """A matrix solve hit the condition-number guard."""


class FixedPointError(AgingMimoError):
    """The SINR fixed point did not converge within the iteration budget."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class BoundUnavailableError(AgingMimoError):
    """The SINR upper bound is undefined for the given parameters."""


class SearchCeilingError(AgingMimoError):
    """A bracketing search hit its configured ceiling."""

    def __init__(self, message, ceiling):
        super().__init__(message)
        self.ceiling = ceiling


class ConfigError(AgingMimoError):
    """An experiment configuration failed to parse or validate."""

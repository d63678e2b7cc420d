"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(ValueError):
    """An experiment or numerical configuration is invalid."""


class UnsupportedShapeError(ValueError):
    """The requested analysis is only defined for some shape functions."""


class InsufficientSampleError(RuntimeError):
    """Too few Monte-Carlo draws fall in the conditioning event."""


class ConsistencyError(RuntimeError):
    """An analytic result and its numerical cross-check disagree."""

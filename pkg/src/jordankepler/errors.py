"""Exception types shared across the package."""


class JordanKeplerError(Exception):
    """Base class for all package errors."""


class ConfigError(JordanKeplerError):
    """Invalid run configuration or structure constants."""


class DomainError(JordanKeplerError):
    """Input outside the mathematical domain of an operation."""


class RankMismatchError(DomainError):
    """An element does not have the rank an operation requires."""


class OutOfChartError(DomainError):
    """A point lies outside the range of the requested chart."""


class ConvergenceError(JordanKeplerError):
    """A truncated series did not meet the requested tail tolerance."""

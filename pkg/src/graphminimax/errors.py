"""Exception types shared across the package."""


class GraphMinimaxError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(GraphMinimaxError):
    """Bad input: sizes, parameters, file contents, or domain violations."""


class NumericError(GraphMinimaxError):
    """A numeric procedure failed or produced an inconsistent result."""

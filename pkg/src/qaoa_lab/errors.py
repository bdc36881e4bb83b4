"""Exception types shared across the package."""


class QaoaLabError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(QaoaLabError, ValueError):
    """Arguments violate an operation's preconditions."""


class DimensionMismatchError(QaoaLabError, ValueError):
    """A bit sequence or state does not match the graph size."""


class SizeLimitError(QaoaLabError, ValueError):
    """Problem size exceeds a documented enumeration or simulation cap."""


class GenerationError(QaoaLabError, RuntimeError):
    """Random graph generation gave up after its retry cap."""


class GraphFormatError(QaoaLabError, ValueError):
    """Malformed graph or cut file.  ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InconsistentHeaderError(GraphFormatError):
    """Header edge count disagrees with the number of edge lines."""

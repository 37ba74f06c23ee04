"""Exception hierarchy shared by the library and the command line."""


class QdilError(Exception):
    """Base class for all errors raised by qdil."""


class DimensionError(QdilError, ValueError):
    """Shapes are inconsistent, or an instance exceeds the size limit."""


class ValidationError(QdilError, ValueError):
    """An object violates a defining invariant (e.g. a trace-increasing map)."""


class PreconditionError(QdilError, ValueError):
    """A construction was requested for inputs it does not apply to."""


class DilationMismatchError(QdilError):
    """A dilation does not realize the quantum operation it was paired with."""


class FormatError(QdilError):
    """A channel or dilation file cannot be parsed."""

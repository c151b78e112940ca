class ScaleSpaceError(Exception):
    """Base class for errors raised by this package."""


class DegenerateError(ScaleSpaceError, ValueError):
    """A quantity needed as a divisor or normalizer is (numerically) zero."""


class NonConvergenceError(ScaleSpaceError, RuntimeError):
    """An optimizer failed to converge within its budget."""


class BankFormatError(ScaleSpaceError, ValueError):
    """Malformed filter-bank file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

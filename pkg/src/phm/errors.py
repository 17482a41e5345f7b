"""Exception types shared across the engine."""


class PhmError(Exception):
    """Base class for all engine errors."""


class ValidationError(PhmError, ValueError):
    """Invalid input: malformed document, bad parameter, unresolved reference."""


class DomainError(PhmError, ValueError):
    """Value outside the mathematical domain of an operation (t < 0, x <= 0, ...)."""


class SystemFailedError(PhmError, RuntimeError):
    """System reliability is below the numerical floor; the quantity is undefined."""


class NumericError(PhmError, RuntimeError):
    """A numeric routine exceeded its budget; carries the partial value when known."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial

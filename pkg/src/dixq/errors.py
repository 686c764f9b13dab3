"""Exception hierarchy shared by every dixq module."""


class DixqError(Exception):
    """Base class for all library errors."""


class DomainError(DixqError, ValueError):
    """Degenerate parameters or evaluation at a pole."""


class InterpolationError(DixqError, ArithmeticError):
    """Sampled data is inconsistent with the requested degree bound."""


class LinearSystemError(DixqError, ArithmeticError):
    """A linear system was singular or inconsistent."""


class SeriesPrecisionError(DixqError, ArithmeticError):
    """A truncated series does not carry enough terms to answer the query."""


class VerificationError(DixqError, AssertionError):
    """An exact identity that must hold was found to fail."""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}

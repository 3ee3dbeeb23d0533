"""Exception types shared across the package."""


class SoftFocusError(Exception):
    """Base class for all package-specific errors."""


class DegenerateFieldError(SoftFocusError, ValueError):
    """Raised when a potential field is constant and cannot be normalized."""


class EmptyMaskError(SoftFocusError, ValueError):
    """Raised when an operation requires a nonempty foreground."""


class FormatError(SoftFocusError, ValueError):
    """Raised when a file does not match its documented layout or schema."""


class ConvergenceError(SoftFocusError, RuntimeError):
    """Raised when the focal-point solver hits the iteration limit.

    Carries the best iterate found so far in ``best`` and the number of
    iterations performed in ``iterations``.
    """

    def __init__(self, message, best, iterations):
        super().__init__(message)
        self.best = best
        self.iterations = iterations

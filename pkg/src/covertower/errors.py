"""Shared exception types."""


class MalformedWordError(ValueError):
    """A word contains a zero or out-of-range generator index."""


class ParameterError(ValueError):
    """An argument is outside the supported range (non-prime modulus, bad class bound, ...)."""


class DomainError(ValueError):
    """The operation is undefined for this input (inverse of a singular matrix, order of 0, ...)."""


class ResourceError(RuntimeError):
    """A width/size guard tripped.  Partial results may be attached."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InternalInvariantError(AssertionError):
    """A condition that must hold for verified inputs failed; indicates a bug, not bad input."""

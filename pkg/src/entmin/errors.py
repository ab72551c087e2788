"""Exception types shared by all entmin modules."""


class EntminError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(EntminError, ValueError):
    """An input violates a documented precondition or invariant."""


class CapacityError(EntminError, ValueError):
    """A request exceeds the dense-representation size limits."""

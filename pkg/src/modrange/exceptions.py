"""Exception types shared across the package."""


class ModRangeError(Exception):
    """Base class for all package errors."""


class InputError(ModRangeError, ValueError):
    """Malformed or mismatched arguments (shapes, spaces, indices)."""


class DomainError(ModRangeError, ValueError):
    """Arguments outside the domain of an operation, e.g. a zero fiber norm."""


class PreconditionError(ModRangeError, ValueError):
    """A theorem check was called on an instance violating its hypothesis."""

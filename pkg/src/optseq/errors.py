"""Exception types shared across the package."""


class OptseqError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(OptseqError, ValueError):
    """An argument or descriptor is outside its valid range."""


class ResourceLimitError(OptseqError, RuntimeError):
    """A configured size cap would be exceeded."""


class UnsupportedOperationError(OptseqError, NotImplementedError):
    """The operation is not defined for the given space family."""


class InternalError(OptseqError, RuntimeError):
    """A numerical guarantee was violated; indicates a bug."""

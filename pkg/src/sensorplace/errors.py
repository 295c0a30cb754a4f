"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """A caller passed an argument outside an operation's domain."""


class ValidationError(ValueError):
    """An instance or placement violates a structural invariant."""


class InstanceFormatError(ValueError):
    """An instance file could not be parsed."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class TooLargeError(ValueError):
    """An exhaustive computation would exceed its configured cap."""


class InternalError(RuntimeError):
    """An internal consistency check failed; indicates a bug."""


class InfeasibleError(ValueError):
    """No placement satisfies the requested flow bound."""

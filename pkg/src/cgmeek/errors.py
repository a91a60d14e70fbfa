"""Exception hierarchy.

The CLI maps these onto exit codes: input and domain errors exit with 1,
internal-invariant violations exit with 2.
"""


class CGError(Exception):
    """Base class for all errors raised by cgmeek."""


class InputError(CGError, ValueError):
    """Malformed input: unknown nodes, bad sets, parse failures."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(CGError, ValueError):
    """Well-formed input outside an operation's domain (e.g. not a chain graph)."""


class ResourceError(CGError):
    """A configured size bound was exceeded."""


class InternalInvariantError(CGError, RuntimeError):
    """A guarantee that should hold by construction was violated."""


class CorruptTraceError(CGError):
    """A trace cannot be replayed against its recorded graphs."""

"""Exception types shared across the package."""


class VerifierError(Exception):
    """Base class for all errors raised by this package."""


class SieveRangeError(VerifierError):
    """A query fell outside the range covered by the sieve table."""


class TableExhaustedError(VerifierError):
    """The zero table cannot answer at the requested height."""


class DomainError(VerifierError, ValueError):
    """An argument violates a formula gate or domain restriction."""


class ZeroFileError(VerifierError):
    """Problem ingesting a zero-ordinate file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ZeroParseError(ZeroFileError):
    """Malformed entry in a zero-ordinate file."""


class ZeroOrderError(ZeroFileError):
    """Ordinates are not strictly ascending."""


class EmptyInputError(ZeroFileError):
    """The zero-ordinate file contained no data lines."""


class ConfigError(VerifierError, ValueError):
    """Invalid run configuration."""

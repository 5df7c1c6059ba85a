"""Exception types shared across the package."""


class RangeError(ValueError):
    """An argument lies outside the range a table or formula supports."""


class ResourceExhaustedError(MemoryError):
    """A requested sieve would exceed the configured size limit."""


class CorruptCacheError(ValueError):
    """A cache file failed its magic, version, length, or checksum test."""


class UnsupportedRangeError(OverflowError):
    """A value does not fit the fixed-width storage format."""


class FormatError(ValueError):
    """A text import could not be parsed.

    Attributes:
        line: 1-based line number of the offending line, or None.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CrossCheckError(ValueError):
    """Imported coefficients disagree with the bundled sieve."""

"""Exception types shared across the toolkit.

The CLI maps RectaError (and subclasses) to exit code 2; argparse usage
problems exit 1.
"""


class RectaError(Exception):
    """Base class for all toolkit errors."""

    code = "error"


class InvalidInputError(RectaError, ValueError):
    """A precondition on an argument was violated."""

    code = "invalid-input"


class RangeError(RectaError, ValueError):
    """An offset/length fell outside the addressable data."""

    code = "range"


class InsufficientDataError(RectaError, ValueError):
    """A statistic was requested on a sample too short to support it."""

    code = "insufficient-data"


class KeyFileError(RectaError, ValueError):
    """A key file could not be parsed or failed validation."""

    code = "key-file"


class DigestMismatchError(RectaError):
    """A stored key digest does not match the supplied key material."""

    code = "digest-mismatch"

"""Exception types shared across the package."""


class BisbmError(Exception):
    """Base class for all data and validation errors raised by this package."""


class GraphFormatError(BisbmError):
    """Malformed input file; carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GraphValidationError(BisbmError):
    """Structurally invalid graph (same-type edge, self-loop, bad vertex id, ...)."""


class PartitionError(BisbmError):
    """Invalid partition for the requested operation or model."""

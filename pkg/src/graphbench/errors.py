"""Exception hierarchy shared by every graphbench module."""


class GraphBenchError(Exception):
    """Base class for all graphbench errors."""


class MalformedInputError(GraphBenchError, ValueError):
    """Input data violates a structural invariant (e.g. vertex id out of range)."""


class CapacityError(GraphBenchError, OverflowError):
    """Requested size overflows index arithmetic."""


class InvalidStateError(GraphBenchError, ValueError):
    """Operation is not valid for the object's current state."""


class InfeasibleError(GraphBenchError, ValueError):
    """Request cannot be satisfied by the given graph."""


class IneligibleRootError(GraphBenchError, ValueError):
    """Search root is out of range or has no outgoing arcs."""


class UnsupportedInputError(GraphBenchError, ValueError):
    """Input is well-formed but outside what the kernel supports."""


class ParseError(GraphBenchError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FormatError(GraphBenchError, ValueError):
    """Binary stream is truncated, has a bad magic, or a version mismatch."""


class SchemaError(GraphBenchError, ValueError):
    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class ValidationError(GraphBenchError):
    """A kernel produced a result that failed validation."""


class ProbeUnavailableError(GraphBenchError, RuntimeError):
    """Energy counters cannot be read on this platform."""

"""Exception hierarchy shared by every module of the package."""


class SpcaError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class InvalidInput(SpcaError, ValueError):
    """Malformed or out-of-contract arguments."""


class ZeroMatrixError(SpcaError, ValueError):
    """The input matrix carries no variance at all."""


class InfeasibleSparsity(SpcaError, ValueError):
    """``s * k`` exceeds the number of variables, so no feasible point exists."""


class CapacityExceeded(SpcaError):
    """An enumeration or materialization guard was tripped."""

    exit_code = 3

    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count


class ParseError(SpcaError, ValueError):
    """Input file could not be parsed."""

    def __init__(self, message, line=None, col=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {col})" if col is not None else ")")
        super().__init__(message + loc)
        self.line = line
        self.col = col


class InternalInvariantViolation(SpcaError, AssertionError):
    """A result failed a self-check; indicates a bug."""

    exit_code = 4

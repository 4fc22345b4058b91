"""Exception types raised across the package."""


class SepdimError(Exception):
    """Base class for all errors raised by sepdim."""


class GraphError(SepdimError, ValueError):
    """Invalid graph data (self-loop, parallel edge, out-of-range vertex)."""


class ParseError(GraphError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimensionMismatchError(SepdimError, ValueError):
    """A permutation family and a graph disagree on the vertex count."""


class CapExceededError(SepdimError):
    """A configured resource cap (size, attempts, search depth) was exceeded."""


class NonConvergenceError(CapExceededError):
    """Randomized resampling did not converge within its iteration budget."""


class ConstructionError(SepdimError):
    """A construction precondition failed or its output did not verify."""


class CertificateError(SepdimError, ValueError):
    """A certificate does not meet the precondition of the step consuming it."""

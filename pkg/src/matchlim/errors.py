"""Exception types shared across the package."""


class MatchlimError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(MatchlimError, ValueError):
    """A parameter violates an operation's precondition."""


class BudgetError(MatchlimError):
    """An exact computation would exceed its size budget.

    Raised by the polynomial-based oracles above 24 vertices and by
    path-tree construction past the node budget.  Callers should fall
    back to the Monte-Carlo / estimator path.
    """


class GraphParseError(MatchlimError, ValueError):
    """Malformed edge-list input; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

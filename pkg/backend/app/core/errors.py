"""
Exception hierarchy shared by the services and the CLI.

The CLI maps input errors to exit 2, budget exhaustion to exit 3 and
inconsistencies (bugs) to exit 4.
"""


class GolayKSError(Exception):
    """Base class for every error raised by this package."""
    pass


class CodeInputError(GolayKSError, ValueError):
    """Malformed generator matrix, coefficient vector, label or matrix file."""
    pass


class EnumerationLimitError(GolayKSError):
    """Raised when q^k exceeds the configured enumeration limit."""
    pass


class RayInputError(GolayKSError, ValueError):
    """Unknown ray label, dimension mismatch or invalid anchor set."""
    pass


class BasisError(GolayKSError, ValueError):
    """A basis failed the independent orthogonality checker."""
    pass


class BudgetExhaustedError(GolayKSError):
    """A search that must be complete ran out of nodes."""

    def __init__(self, message: str, nodes: int):
        super().__init__(message)
        self.nodes = nodes


class ExpensiveOperationError(GolayKSError):
    """A gated computation was requested without the override flag."""
    pass


class InconsistencyError(GolayKSError):
    """Internal bookkeeping contradiction; always an implementation bug."""
    pass

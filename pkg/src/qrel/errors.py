"""Exception types shared across the package."""


class QrelError(Exception):
    """Base class for all qrel errors."""


class ValidationError(QrelError, ValueError):
    """Malformed input: bad shapes, non-finite entries, schema violations."""


class PreconditionError(QrelError, ValueError):
    """Input is well-formed but violates a mathematical precondition."""


class ConvergenceError(QrelError, RuntimeError):
    """An iterative kernel failed to converge within its sweep budget."""

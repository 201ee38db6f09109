# errors.py

from typing import Any

__all__ = [
    "DimensionError",
    "DegenerateInputError",
    "DomainError",
    "ConvergenceError",
    "InsufficientPrecisionError",
    "WorkLimitError",
    "UnsupportedAmbientError",
    "InconsistentTargetsError",
    "InconsistentSystemError",
    "NeedsMoreDataError",
    "GenerationError",
    "ConjectureFalsifiedError",
    "CorruptRecordError"
]

class DimensionError(ValueError):
    """Raised when shapes or index ranges do not fit together."""

class DegenerateInputError(ValueError):
    """Raised when an input is zero, repeated or otherwise degenerate."""

class DomainError(ValueError):
    """Raised when a value is outside the domain of an operation."""

class ConvergenceError(ValueError):
    """Raised when an iteration exceeds its cap before converging."""

    def __init__(self, message: str, best: Any = None) -> None:
        """
        Defines the attributes of the error.

        :param message: The error message.
        :param best: The best result reached before giving up.
        """

        super().__init__(message)

        self.best = best

class InsufficientPrecisionError(ValueError):
    """Raised when the working precision cannot support a requested bound."""

class WorkLimitError(ValueError):
    """Raised when an exhaustive search grows beyond its work limit."""

class UnsupportedAmbientError(ValueError):
    """Raised when no coefficient table exists for a matrix shape."""

class InconsistentTargetsError(ValueError):
    """Raised when row and column target sums differ."""

class InconsistentSystemError(ValueError):
    """Raised when a linear system has no solution."""

    def __init__(self, message: str, row: int = None) -> None:
        """
        Defines the attributes of the error.

        :param message: The error message.
        :param row: The index of the equation that exposed the inconsistency.
        """

        super().__init__(message)

        self.row = row

class NeedsMoreDataError(ValueError):
    """Raised when a dataset holds too few records to assemble a system."""

    def __init__(self, message: str, required: int = None, available: int = None) -> None:
        """
        Defines the attributes of the error.

        :param message: The error message.
        :param required: The number of records needed.
        :param available: The number of records present.
        """

        super().__init__(message)

        self.required = required
        self.available = available

class GenerationError(ValueError):
    """Raised when random matrix generation keeps rejecting samples."""

class ConjectureFalsifiedError(ValueError):
    """Raised when recognized data contradicts the conjectured polynomial form."""

    def __init__(self, message: str, k: int = None) -> None:
        """
        Defines the attributes of the error.

        :param message: The error message.
        :param k: The subset size whose system was inconsistent.
        """

        super().__init__(message)

        self.k = k

class CorruptRecordError(ValueError):
    """Raised when a stored record fails to parse or fails its checksum."""

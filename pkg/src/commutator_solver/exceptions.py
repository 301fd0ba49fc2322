"""
Custom exception classes for the commutator equation toolkit.
"""

from __future__ import annotations

from typing import Any


class CommutatorError(Exception):
    """Base exception for all toolkit errors."""

    details: dict[str, Any]

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        """Machine-readable form printed by the CLI."""
        return {"error": type(self).__name__, "message": str(self), **self.details}


class InputValidationError(CommutatorError):
    """Raised for malformed input: bad JSON, non-rational entries, wrong shapes, exceeded caps."""


class DimensionMismatchError(InputValidationError):
    """Raised when operands are not conformable."""


class RejectedInputError(CommutatorError):
    """Raised when well-formed input is mathematically rejected (e.g. f(P) != 0)."""


class PreconditionError(RejectedInputError):
    """Raised when the precondition of a checker does not hold."""


class InfeasibleExtensionError(RejectedInputError):
    """Raised when back-substitution meets an inconsistent affine system."""

    distance: int
    row_rung: int
    col_rung: int

    def __init__(self, message: str, *, distance: int, row_rung: int, col_rung: int) -> None:
        super().__init__(message, distance=distance, row_rung=row_rung, col_rung=col_rung)
        self.distance = distance
        self.row_rung = row_rung
        self.col_rung = col_rung

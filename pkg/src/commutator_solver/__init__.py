# pyright: reportImportCycles=false
"""
Commutator Solver

Exact rational toolkit for the matrix equation XA - AX = f(X): two-eigenvalue solution families,
spectrum ladders, the eigenspace recurrences and solution-variety dimensions.
"""

from __future__ import annotations

from .cli import main
from .equation import EquationInstance, ResidualReport, residual
from .exceptions import (
    CommutatorError,
    DimensionMismatchError,
    InfeasibleExtensionError,
    InputValidationError,
    PreconditionError,
    RejectedInputError,
)
from .matrix import RatMatrix
from .polynomial import DensePoly, FactoredPoly
from .utils import setup_logging

__version__ = "0.1.0"

__all__ = [
    "CommutatorError",
    "DensePoly",
    "DimensionMismatchError",
    "EquationInstance",
    "FactoredPoly",
    "InfeasibleExtensionError",
    "InputValidationError",
    "PreconditionError",
    "RatMatrix",
    "RejectedInputError",
    "ResidualReport",
    "main",
    "residual",
    "setup_logging",
]

"""
Polynomial recurrences behind the eigenspace-support bounds for XA - AX = X^2 - X^3.

P_0 = 1, P_s = x^2 P_{s-1}' + (s x + 2 x + s) P_{s-1}
phi_0 = -1, phi_s = -x^2 phi_{s-1}' - 2 x phi_{s-1} - s (x + 1) phi_{s-1}

so that phi_s = (-1)^(s+1) P_s, and (A - sI)...(A - I) A X u = phi_s(X) X^2 (I - X)^(s+1) u for
every solution X and every u in ker(A).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Any

from .equation import cubic_instance, require_solution
from .exceptions import DimensionMismatchError, InputValidationError, PreconditionError
from .matrix import RatMatrix
from .polynomial import DensePoly, poly_eval_matrix
from .rational import format_rational

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator

logger: logging.Logger = logging.getLogger(__name__)

_X2 = DensePoly.of(0, 0, 1)
_ONE_MINUS_X = DensePoly.of(1, -1)


def _p_step(prev: DensePoly, s: int) -> DensePoly:
    return _X2 * prev.derivative() + DensePoly.of(s, s + 2) * prev


def _phi_step(prev: DensePoly, s: int) -> DensePoly:
    return -(_X2 * prev.derivative()) - DensePoly.of(0, 2) * prev - DensePoly.of(s, s) * prev


def _iterate(start: DensePoly, step: Callable[[DensePoly, int], DensePoly], s_max: int) -> Iterator[DensePoly]:
    if s_max < 0:
        msg = f"s_max must be non-negative, got {s_max}"
        raise InputValidationError(msg)
    current = start
    yield current
    for s in range(1, s_max + 1):
        current = step(current, s)
        yield current


@dataclass(frozen=True)
class RecurrenceRow:
    s: int
    p_s: DensePoly
    phi_s: DensePoly
    p_s_at_1: Fraction

    def to_dict(self) -> dict[str, Any]:
        # Coefficients of P_s and phi_s are integers.
        return {
            "s": self.s,
            "P_s": [int(c) for c in self.p_s.coeffs],
            "phi_s": [int(c) for c in self.phi_s.coeffs],
            "P_s_at_1": int(self.p_s_at_1),
        }


@dataclass(frozen=True)
class RecurrenceTable:
    entries: tuple[RecurrenceRow, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"rows": [row.to_dict() for row in self.entries]}


def iter_recurrence(s_max: int) -> Iterator[RecurrenceRow]:
    """Stream the rows s = 0..s_max; coefficients grow quickly, so callers may consume lazily."""
    p_seq = _iterate(DensePoly.constant(1), _p_step, s_max)
    phi_seq = _iterate(DensePoly.constant(-1), _phi_step, s_max)
    for s, (p_s, phi_s) in enumerate(zip(p_seq, phi_seq, strict=True)):
        yield RecurrenceRow(s=s, p_s=p_s, phi_s=phi_s, p_s_at_1=p_s(1))


def compute_p(s_max: int) -> RecurrenceTable:
    return RecurrenceTable(entries=tuple(iter_recurrence(s_max)))


def compute_phi(s_max: int) -> list[DensePoly]:
    return list(_iterate(DensePoly.constant(-1), _phi_step, s_max))


def compute_psi(phi: DensePoly, s: int, t: int) -> DensePoly:
    """psi = -phi' x^2 (1 - x) - 2 phi x (1 - x) + t phi x^2 - s phi, with psi(1) = (t - s) phi(1)."""
    if s == t:
        msg = f"s and t must be distinct, got s = t = {s}"
        raise InputValidationError(msg)
    if s < 0 or t < 0:
        msg = f"s and t must be non-negative, got s={s}, t={t}"
        raise InputValidationError(msg)
    psi = (
        -(phi.derivative() * _X2 * _ONE_MINUS_X)
        - DensePoly.of(0, 2) * phi * _ONE_MINUS_X
        + (_X2 * phi).scale(t)
        - phi.scale(s)
    )
    logger.debug(f"psi(1) = {format_rational(psi(1))} for s={s}, t={t}")
    return psi


def check_rec1_identity(a: RatMatrix, x: RatMatrix, u: RatMatrix, s: int) -> bool:
    """Whether (A - sI)...(A - I) A X u = phi_s(X) X^2 (I - X)^(s+1) u.

    Requires A diagonal, u in ker(A) and X a solution of XA - AX = X^2 - X^3.
    """
    if not a.is_diagonal():
        msg = "A must be diagonal"
        raise InputValidationError(msg)
    if u.shape != (a.rows, 1):
        msg = f"u must be a {a.rows}x1 column, got {u.rows}x{u.cols}"
        raise DimensionMismatchError(msg)
    if s < 0:
        msg = f"s must be non-negative, got {s}"
        raise InputValidationError(msg)
    if not (a @ u).is_zero():
        msg = "u is not in ker(A)"
        raise PreconditionError(msg)
    require_solution(cubic_instance(a), x)

    n = a.rows
    identity = RatMatrix.identity(n)
    lhs = a @ x @ u
    for k in range(1, s + 1):
        lhs = (a - identity.scale(k)) @ lhs
    phi_s = compute_phi(s)[-1]
    rhs = poly_eval_matrix(phi_s * _X2 * _ONE_MINUS_X ** (s + 1), x) @ u
    return lhs == rhs

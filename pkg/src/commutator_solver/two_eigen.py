"""
Solution families of XA - AX = f(X) when A = diag(mu I_p, lambda I_q) has two distinct eigenvalues.

Writing X = [[P, Q], [R, S]], the diagonal blocks satisfy f(P) = 0 and f(S) = 0, and the
off-diagonal blocks lie in eigenspaces of the block operator. Which of Q, R may be nonzero is
decided by the membership of +-(lambda - mu) in the critical set of f.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from typing import TYPE_CHECKING, Any

from . import linalg
from .equation import EquationInstance, block_poly_operator
from .exceptions import InputValidationError, RejectedInputError
from .matrix import RatMatrix
from .polynomial import FactoredPoly, critical_set, expand, poly_eval_matrix
from .rational import format_rational
from .serialization import matrix_to_json

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

logger: logging.Logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 10_000
DEFAULT_SAMPLE_COUNT = 20
DEFAULT_SAMPLE_SEED = 0
DEFAULT_COEFFICIENT_BOUND = 9


class Regime(StrEnum):
    TRIVIAL_ONLY = "TrivialOnly"
    UPPER_TRIANGULAR = "UpperTriangular"
    LOWER_TRIANGULAR = "LowerTriangular"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class TwoEigInstance:
    """A = diag(mu I_p, lambda I_q) together with f."""

    p: int
    q: int
    mu: Fraction
    lam: Fraction
    f: FactoredPoly

    def __post_init__(self) -> None:
        if self.p < 1 or self.q < 1:
            msg = f"Block sizes must be positive, got p={self.p}, q={self.q}"
            raise InputValidationError(msg)
        if self.mu == self.lam:
            msg = f"Eigenvalues must be distinct, got mu = lambda = {format_rational(self.mu)}"
            raise InputValidationError(msg)

    @property
    def gap(self) -> Fraction:
        """lambda - mu."""
        return self.lam - self.mu

    @property
    def a(self) -> RatMatrix:
        return RatMatrix.diagonal([self.mu] * self.p + [self.lam] * self.q)

    def equation(self) -> EquationInstance:
        return EquationInstance(a=self.a, f=self.f)


def classify(inst: TwoEigInstance) -> Regime:
    crit = critical_set(inst.f)
    up = inst.gap in crit
    down = -inst.gap in crit
    if up and down:
        return Regime.DEGENERATE
    if up:
        return Regime.UPPER_TRIANGULAR
    if down:
        return Regime.LOWER_TRIANGULAR
    return Regime.TRIVIAL_ONLY


@dataclass(frozen=True)
class SolutionFamily:
    """Fixed diagonal blocks (P, S) and bases for the off-diagonal blocks Q (p x q) and R (q x p).

    Every X = [[P, Q], [R, S]] with Q in span(q_basis) and R in span(r_basis) solves the equation,
    subject to QR = 0 and RQ = 0 when ``bilinear_constrained`` is set.
    """

    p_block: RatMatrix
    s_block: RatMatrix
    q_basis: tuple[RatMatrix, ...]
    r_basis: tuple[RatMatrix, ...]
    bilinear_constrained: bool = False

    @property
    def dim_linear(self) -> int:
        return len(self.q_basis) + len(self.r_basis)

    def combine(self, basis: Sequence[RatMatrix], coeffs: Sequence[Fraction], rows: int, cols: int) -> RatMatrix:
        if len(coeffs) != len(basis):
            msg = f"Expected {len(basis)} coefficients, got {len(coeffs)}"
            raise InputValidationError(msg)
        total = RatMatrix.zeros(rows, cols)
        for c, b in zip(coeffs, basis, strict=True):
            if c:
                total += b.scale(c)
        return total

    def off_diagonal(
        self, q_coeffs: Sequence[Fraction] = (), r_coeffs: Sequence[Fraction] = ()
    ) -> tuple[RatMatrix, RatMatrix]:
        p, q = self.p_block.rows, self.s_block.rows
        return (
            self.combine(self.q_basis, q_coeffs or [Fraction(0)] * len(self.q_basis), p, q),
            self.combine(self.r_basis, r_coeffs or [Fraction(0)] * len(self.r_basis), q, p),
        )

    def assemble(self, q_coeffs: Sequence[Fraction] = (), r_coeffs: Sequence[Fraction] = ()) -> RatMatrix:
        """X = [[P, Q], [R, S]] for the given basis coefficients (missing ones are zero)."""
        q_block, r_block = self.off_diagonal(q_coeffs, r_coeffs)
        return RatMatrix.block([[self.p_block, q_block], [r_block, self.s_block]])

    def representative(self) -> RatMatrix:
        """Member with every basis coefficient 1, dropping R when that breaks QR = RQ = 0."""
        ones_q = [Fraction(1)] * len(self.q_basis)
        ones_r = [Fraction(1)] * len(self.r_basis)
        q_block, r_block = self.off_diagonal(ones_q, ones_r)
        if self.bilinear_constrained and not check_bilinear(q_block, r_block):
            return self.assemble(ones_q)
        return self.assemble(ones_q, ones_r)

    def to_dict(self) -> dict[str, Any]:
        return {
            "P": matrix_to_json(self.p_block),
            "S": matrix_to_json(self.s_block),
            "Q_basis": [matrix_to_json(b) for b in self.q_basis],
            "R_basis": [matrix_to_json(b) for b in self.r_basis],
            "dim_linear": self.dim_linear,
            "bilinear_constrained": self.bilinear_constrained,
            "representative": matrix_to_json(self.representative()),
        }


def _require_roots_of_f(inst: TwoEigInstance, p_block: RatMatrix, s_block: RatMatrix) -> None:
    if p_block.shape != (inst.p, inst.p) or s_block.shape != (inst.q, inst.q):
        msg = f"P must be {inst.p}x{inst.p} and S {inst.q}x{inst.q}, got {p_block.shape} and {s_block.shape}"
        raise InputValidationError(msg)
    f = expand(inst.f)
    if not poly_eval_matrix(f, p_block).is_zero():
        msg = "f(P) is not zero"
        raise RejectedInputError(msg)
    if not poly_eval_matrix(f, s_block).is_zero():
        msg = "f(S) is not zero"
        raise RejectedInputError(msg)


def _eigen_blocks(f: FactoredPoly, left: RatMatrix, right: RatMatrix, eigenvalue: Fraction) -> tuple[RatMatrix, ...]:
    """Basis of {Z : Phi_{left,right}(Z) = eigenvalue * Z}, Z of size left.rows x right.rows."""
    operator = block_poly_operator(f, left, right)
    shifted = operator - RatMatrix.identity(operator.rows).scale(eigenvalue)
    return tuple(linalg.unvec(v, left.rows, right.rows) for v in linalg.nullspace(shifted))


def solve_triangular(inst: TwoEigInstance, p_block: RatMatrix, s_block: RatMatrix) -> SolutionFamily:
    """Family of block-triangular solutions with diagonal blocks (P, S).

    Upper regime: Q ranges over ker(M_Phi(P,S) - (lambda - mu) I); lower regime: R ranges over
    ker(M_Phi(S,P) - (mu - lambda) I); trivial regime: both are empty.
    """
    _require_roots_of_f(inst, p_block, s_block)
    regime = classify(inst)
    if regime is Regime.DEGENERATE:
        msg = "Both +-(lambda - mu) are critical values of f; use solve_degenerate"
        raise RejectedInputError(msg, regime=str(regime))
    q_basis: tuple[RatMatrix, ...] = ()
    r_basis: tuple[RatMatrix, ...] = ()
    if regime is Regime.UPPER_TRIANGULAR:
        q_basis = _eigen_blocks(inst.f, p_block, s_block, inst.gap)
    elif regime is Regime.LOWER_TRIANGULAR:
        r_basis = _eigen_blocks(inst.f, s_block, p_block, -inst.gap)
    logger.debug(f"{regime} family: dim Q = {len(q_basis)}, dim R = {len(r_basis)}")
    return SolutionFamily(p_block=p_block, s_block=s_block, q_basis=q_basis, r_basis=r_basis)


def _intertwiner(left: RatMatrix, right: RatMatrix) -> RatMatrix:
    """Matrix of Z -> left Z - Z right on vec(Z)."""
    return linalg.kron(RatMatrix.identity(right.rows), left) - linalg.kron(right.T, RatMatrix.identity(left.rows))


def _degenerate_blocks(f: FactoredPoly, left: RatMatrix, right: RatMatrix, eigenvalue: Fraction) -> tuple[RatMatrix, ...]:
    """Basis of {Z : left Z = Z right, f'(left) Z = eigenvalue * Z}."""
    df_left = poly_eval_matrix(expand(f).derivative(), left)
    size = left.rows * right.rows
    scaled = linalg.kron(RatMatrix.identity(right.rows), df_left) - RatMatrix.identity(size).scale(eigenvalue)
    system = linalg.vstack([_intertwiner(left, right), scaled])
    return tuple(linalg.unvec(v, left.rows, right.rows) for v in linalg.nullspace(system))


def solve_degenerate(inst: TwoEigInstance, p_block: RatMatrix, s_block: RatMatrix) -> SolutionFamily:
    """Linear hull of the non-triangular solutions with diagonal blocks (P, S).

    Q satisfies PQ = QS and f'(P) Q = (lambda - mu) Q; R satisfies SR = RP and f'(S) R = (mu - lambda) R.
    Members must additionally satisfy QR = 0 and RQ = 0 (see check_bilinear).
    """
    _require_roots_of_f(inst, p_block, s_block)
    regime = classify(inst)
    if regime is not Regime.DEGENERATE:
        logger.info(f"solve_degenerate called in regime {regime}")
    q_basis = _degenerate_blocks(inst.f, p_block, s_block, inst.gap)
    r_basis = _degenerate_blocks(inst.f, s_block, p_block, -inst.gap)
    logger.debug(f"Degenerate family: dim Q = {len(q_basis)}, dim R = {len(r_basis)}")
    return SolutionFamily(
        p_block=p_block,
        s_block=s_block,
        q_basis=q_basis,
        r_basis=r_basis,
        bilinear_constrained=True,
    )


def solve(inst: TwoEigInstance, p_block: RatMatrix, s_block: RatMatrix) -> SolutionFamily:
    """Dispatch on the regime: degenerate instances get the non-triangular hull."""
    if classify(inst) is Regime.DEGENERATE:
        return solve_degenerate(inst, p_block, s_block)
    return solve_triangular(inst, p_block, s_block)


def check_bilinear(q_block: RatMatrix, r_block: RatMatrix) -> bool:
    """Whether QR = 0 and RQ = 0."""
    return (q_block @ r_block).is_zero() and (r_block @ q_block).is_zero()


def enumeration_count(inst: TwoEigInstance) -> int:
    r = len(inst.f.roots)
    return math.comb(r + inst.p - 1, inst.p) * math.comb(r + inst.q - 1, inst.q)


def enumerate_diagonal_ps(
    inst: TwoEigInstance, *, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[tuple[RatMatrix, RatMatrix]]:
    """All diagonal (P, S) with diagonal entries among the roots of f, one per multiset of roots.

    Diagonals are nondecreasing. Raises InputValidationError when more than ``cap`` pairs would be produced.
    """
    count = enumeration_count(inst)
    if count > cap:
        msg = f"Enumeration would produce {count} (P, S) pairs, above the cap of {cap}"
        raise InputValidationError(msg, count=count, cap=cap)
    logger.info(f"Enumerating {count} diagonal (P, S) pairs")
    roots = sorted(inst.f.root_values)
    p_choices = [RatMatrix.diagonal(c) for c in itertools.combinations_with_replacement(roots, inst.p)]
    for s_diag in itertools.combinations_with_replacement(roots, inst.q):
        s_block = RatMatrix.diagonal(s_diag)
        for p_block in p_choices:
            yield p_block, s_block


def witness_pair(inst: TwoEigInstance) -> tuple[RatMatrix, RatMatrix] | None:
    """(alpha I_p, alpha I_q) for a root alpha with f'(alpha) = lambda - mu, if any."""
    df = expand(inst.f).derivative()
    for alpha in sorted(inst.f.root_values):
        if df(alpha) == inst.gap and inst.gap != 0:
            return RatMatrix.identity(inst.p).scale(alpha), RatMatrix.identity(inst.q).scale(alpha)
    return None


@dataclass(frozen=True)
class SampledMember:
    """A random (Q, R) drawn from a family's linear hull."""

    q_block: RatMatrix
    r_block: RatMatrix
    bilinear_ok: bool
    x: RatMatrix | None
    """Assembled solution when the member passes the bilinear constraint."""

    def to_dict(self) -> dict[str, Any]:
        return {
            "Q": matrix_to_json(self.q_block),
            "R": matrix_to_json(self.r_block),
            "bilinear_ok": self.bilinear_ok,
            "X": matrix_to_json(self.x) if self.x is not None else None,
        }


def sample_members(
    family: SolutionFamily,
    *,
    count: int = DEFAULT_SAMPLE_COUNT,
    seed: int = DEFAULT_SAMPLE_SEED,
    bound: int = DEFAULT_COEFFICIENT_BOUND,
) -> list[SampledMember]:
    """Draw members with integer coefficients in [-bound, bound] from a seeded generator."""
    rng = random.Random(seed)
    members: list[SampledMember] = []
    for _ in range(count):
        q_coeffs = [Fraction(rng.randint(-bound, bound)) for _ in family.q_basis]
        r_coeffs = [Fraction(rng.randint(-bound, bound)) for _ in family.r_basis]
        q_block, r_block = family.off_diagonal(q_coeffs, r_coeffs)
        ok = not family.bilinear_constrained or check_bilinear(q_block, r_block)
        x = RatMatrix.block([[family.p_block, q_block], [r_block, family.s_block]]) if ok else None
        members.append(SampledMember(q_block=q_block, r_block=r_block, bilinear_ok=ok, x=x))
    return members

"""
Spectrum ladders for XA - AX = X^2 - X^3 with diagonal A.

A ladder is a maximal chain of eigenvalues base, base + 1, ..., base + height all present in the
spectrum. Ordering the eigenvalues ladder by ladder, each in descending rung order, makes every
solution block-diagonal across ladders and block upper-triangular within each one, with diagonal
blocks Y satisfying Y^2 = Y^3.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Any

from . import linalg
from .equation import block_poly_operator, cubic_instance, is_solution
from .exceptions import CommutatorError, InfeasibleExtensionError, InputValidationError, RejectedInputError
from .matrix import RatMatrix
from .polynomial import CUBIC, poly_eval_matrix
from .rational import format_rational, to_rational
from .serialization import matrix_to_json

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from .rational import RationalLike

logger: logging.Logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ladder:
    """Consecutive eigenvalues base + height, ..., base + 1, base with their multiplicities."""

    base: Fraction
    rungs: tuple[tuple[Fraction, int], ...]
    """(value, multiplicity) in descending value order."""

    def __post_init__(self) -> None:
        if not self.rungs:
            msg = "A ladder needs at least one rung"
            raise InputValidationError(msg)
        for i, (value, mult) in enumerate(self.rungs):
            if mult < 1:
                msg = f"Rung {format_rational(value)} has multiplicity {mult}"
                raise InputValidationError(msg)
            if value != self.base + (len(self.rungs) - 1 - i):
                msg = f"Rungs of the ladder based at {format_rational(self.base)} are not consecutive"
                raise InputValidationError(msg)

    @property
    def height(self) -> int:
        return len(self.rungs) - 1

    @property
    def size(self) -> int:
        return sum(m for _, m in self.rungs)

    @property
    def rung_sizes(self) -> list[int]:
        return [m for _, m in self.rungs]

    def values(self) -> list[Fraction]:
        """Diagonal of U = diag(B) in ladder order."""
        return [v for v, m in self.rungs for _ in range(m)]

    def to_dict(self) -> dict[str, Any]:
        return {
            "base": format_rational(self.base),
            "height": self.height,
            "rungs": [{"value": format_rational(v), "multiplicity": m} for v, m in self.rungs],
        }


@dataclass(frozen=True)
class LadderPartition:
    """Ladders sorted by base, plus the input positions listed in ladder order."""

    ladders: tuple[Ladder, ...]
    permutation: tuple[int, ...]
    """permutation[i] is the input index placed at position i."""

    def ordered_spectrum(self) -> list[Fraction]:
        return [v for ladder in self.ladders for v in ladder.values()]

    def ladder_offsets(self) -> list[int]:
        offsets = [0]
        for ladder in self.ladders:
            offsets.append(offsets[-1] + ladder.size)
        return offsets

    def to_dict(self) -> dict[str, Any]:
        return {
            "ladders": [ladder.to_dict() for ladder in self.ladders],
            "permutation": list(self.permutation),
            "ordered_spectrum": [format_rational(v) for v in self.ordered_spectrum()],
        }


def partition_spectrum(values: Iterable[RationalLike]) -> LadderPartition:
    """Split a spectrum into ladders.

    Values whose difference is an integer fall in the same class; within a class the sorted distinct
    values are cut into maximal runs of step exactly 1. Ladders are ordered by ascending base.
    """
    spectrum = [to_rational(v) for v in values]
    counts = Counter(spectrum)
    classes: dict[Fraction, list[Fraction]] = defaultdict(list)
    for value in sorted(counts):
        classes[value - math.floor(value)].append(value)

    ladders: list[Ladder] = []
    for members in classes.values():
        run = [members[0]]
        for value in members[1:]:
            if value - run[-1] == 1:
                run.append(value)
            else:
                ladders.append(_make_ladder(run, counts))
                run = [value]
        ladders.append(_make_ladder(run, counts))
    ladders.sort(key=lambda ladder: ladder.base)

    positions: dict[Fraction, list[int]] = defaultdict(list)
    for i, value in enumerate(spectrum):
        positions[value].append(i)
    permutation = [i for ladder in ladders for value, _ in ladder.rungs for i in positions[value]]
    logger.debug(f"Partitioned {len(spectrum)} eigenvalues into {len(ladders)} ladders")
    return LadderPartition(ladders=tuple(ladders), permutation=tuple(permutation))


def _make_ladder(run: list[Fraction], counts: Counter[Fraction]) -> Ladder:
    return Ladder(base=run[0], rungs=tuple((v, counts[v]) for v in reversed(run)))


def order_by_partition(a_diag: RatMatrix, x: RatMatrix, part: LadderPartition) -> tuple[RatMatrix, RatMatrix]:
    """Conjugate A and X by the partition's permutation so that A lists eigenvalues ladder by ladder."""
    return a_diag.permuted(part.permutation), x.permuted(part.permutation)


@dataclass(frozen=True)
class LadderCertificate:
    """Structural checks on one ladder's block X_r."""

    base: Fraction
    isolated: bool
    """No coupling with other ladders in X."""
    upper_triangular: bool
    rung_certificates: tuple[bool, ...]
    """Y^2 - Y^3 = 0 for each diagonal block, top rung first."""

    @property
    def conforms(self) -> bool:
        return self.isolated and self.upper_triangular and all(self.rung_certificates)

    def to_dict(self) -> dict[str, Any]:
        return {
            "base": format_rational(self.base),
            "isolated": self.isolated,
            "upper_triangular": self.upper_triangular,
            "rung_certificates": list(self.rung_certificates),
        }


@dataclass(frozen=True)
class DecompositionReport:
    per_ladder: tuple[LadderCertificate, ...]

    @property
    def conforms(self) -> bool:
        return all(c.conforms for c in self.per_ladder)

    def to_dict(self) -> dict[str, Any]:
        return {"conforms": self.conforms, "per_ladder": [c.to_dict() for c in self.per_ladder]}


def verify_decomposition(a_diag: RatMatrix, x: RatMatrix, part: LadderPartition) -> DecompositionReport:
    """Check the ladder decomposition of a solution of XA - AX = X^2 - X^3.

    A must be diagonal and already ordered as ``part.ordered_spectrum()``; X is rejected before any
    structural check when it is not a solution.
    """
    if not a_diag.is_diagonal():
        msg = "A must be diagonal"
        raise InputValidationError(msg)
    if list(a_diag.diagonal_entries()) != part.ordered_spectrum():
        msg = "Diagonal of A is not in ladder order; reorder it with order_by_partition first"
        raise InputValidationError(msg)
    if not is_solution(cubic_instance(a_diag), x):
        msg = "X does not solve XA - AX = X^2 - X^3"
        raise RejectedInputError(msg)

    n = a_diag.rows
    offsets = part.ladder_offsets()
    owner = [r for r, ladder in enumerate(part.ladders) for _ in range(ladder.size)]
    certificates: list[LadderCertificate] = []
    for r, ladder in enumerate(part.ladders):
        lo, hi = offsets[r], offsets[r + 1]
        isolated = all(
            x[i, j] == 0 and x[j, i] == 0 for i in range(lo, hi) for j in range(n) if owner[j] != r
        )
        rung_of = [k for k, m in enumerate(ladder.rung_sizes) for _ in range(m)]
        upper = all(x[lo + i, lo + j] == 0 for i in range(hi - lo) for j in range(hi - lo) if rung_of[i] > rung_of[j])
        rung_checks: list[bool] = []
        start = lo
        for m in ladder.rung_sizes:
            y = x.submatrix(start, start + m, start, start + m)
            rung_checks.append(poly_eval_matrix(CUBIC, y).is_zero())
            start += m
        certificates.append(
            LadderCertificate(
                base=ladder.base,
                isolated=isolated,
                upper_triangular=upper,
                rung_certificates=tuple(rung_checks),
            )
        )
    report = DecompositionReport(per_ladder=tuple(certificates))
    logger.debug(f"Decomposition over {len(certificates)} ladders conforms={report.conforms}")
    return report


@dataclass(frozen=True)
class Extension:
    """Solution built by back-substitution, with the kernel dimension met at each distance."""

    x: RatMatrix
    free_dims: tuple[int, ...]
    """free_dims[d - 1] sums the kernel dimensions of the distance-d block systems."""

    def to_dict(self) -> dict[str, Any]:
        return {"X": matrix_to_json(self.x), "free_dims": list(self.free_dims)}


def _single_ladder_rungs(ladder_a: RatMatrix) -> list[tuple[Fraction, int]]:
    if not ladder_a.is_diagonal():
        msg = "Ladder matrix must be diagonal"
        raise InputValidationError(msg)
    rungs: list[tuple[Fraction, int]] = []
    for v in ladder_a.diagonal_entries():
        if rungs and rungs[-1][0] == v:
            rungs[-1] = (v, rungs[-1][1] + 1)
        else:
            rungs.append((v, 1))
    for (upper, _), (lower, _) in itertools.pairwise(rungs):
        if upper - lower != 1:
            msg = "Ladder matrix must be diag((l+c) I, ..., (l+1) I, l I) with consecutive descending rungs"
            raise InputValidationError(msg)
    return rungs


def extend_diagonal_to_solution(ladder_a: RatMatrix, y_blocks: Sequence[RatMatrix]) -> Extension:
    """Extend diagonal blocks Y_c, ..., Y_0 (top rung first) to a full solution for a single ladder.

    At distance d the block (i, i + d) solves -d Z - Phi_{Y_i, Y_j}(Z) = C, where C collects the
    products of shorter-distance blocks; the particular solution with free parameters at zero is kept.
    Raises InfeasibleExtensionError when some system is inconsistent.
    """
    rungs = _single_ladder_rungs(ladder_a)
    if len(y_blocks) != len(rungs):
        msg = f"Expected {len(rungs)} diagonal blocks, got {len(y_blocks)}"
        raise InputValidationError(msg)
    for k, ((value, mult), y) in enumerate(zip(rungs, y_blocks, strict=True)):
        if y.shape != (mult, mult):
            msg = f"Block {k} for eigenvalue {format_rational(value)} must be {mult}x{mult}, got {y.rows}x{y.cols}"
            raise InputValidationError(msg)
        if not poly_eval_matrix(CUBIC, y).is_zero():
            msg = f"Block {k} does not satisfy Y^2 = Y^3"
            raise RejectedInputError(msg)

    sizes = [m for _, m in rungs]
    count = len(rungs)
    blocks: list[list[RatMatrix]] = [
        [y_blocks[i] if i == j else RatMatrix.zeros(sizes[i], sizes[j]) for j in range(count)] for i in range(count)
    ]
    offsets = [sum(sizes[:i]) for i in range(count + 1)]
    free_dims: list[int] = []
    for d in range(1, count):
        current = RatMatrix.block(blocks)
        constant = poly_eval_matrix(CUBIC, current)
        dim_at_distance = 0
        for i in range(count - d):
            j = i + d
            gap = rungs[j][0] - rungs[i][0]
            operator = block_poly_operator(CUBIC, y_blocks[i], y_blocks[j])
            system = RatMatrix.identity(operator.rows).scale(gap) - operator
            rhs = constant.submatrix(offsets[i], offsets[i + 1], offsets[j], offsets[j + 1])
            solution = linalg.solve_affine(system, linalg.vec(rhs))
            if solution is None:
                msg = f"Inconsistent block system at distance {d} between rungs {i} and {j}"
                raise InfeasibleExtensionError(msg, distance=d, row_rung=i, col_rung=j)
            blocks[i][j] = linalg.unvec(solution.particular, sizes[i], sizes[j])
            dim_at_distance += solution.kernel_dim
        free_dims.append(dim_at_distance)
        logger.debug(f"Distance {d}: kernel dimension {dim_at_distance}")

    x = RatMatrix.block(blocks)
    if not is_solution(cubic_instance(ladder_a), x):
        msg = "Back-substitution produced a non-solution"
        raise CommutatorError(msg)
    return Extension(x=x, free_dims=tuple(free_dims))

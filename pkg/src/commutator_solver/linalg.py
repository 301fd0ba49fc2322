"""
Exact linear algebra over the rationals.

Fraction-free Gauss-Jordan elimination, nullspaces, affine solves, Kronecker products and the column-stacking
vectorization used by every Kronecker system in the package: vec(A X B) = (B^T kron A) vec(X).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from .exceptions import DimensionMismatchError, InputValidationError, RejectedInputError
from .matrix import RatMatrix

if TYPE_CHECKING:
    from collections.abc import Sequence

logger: logging.Logger = logging.getLogger(__name__)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class EchelonForm:
    """Reduced row echelon form with its pivot columns."""

    rows: list[list[Fraction]]
    pivots: list[int]
    cols: int

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def free_columns(self) -> list[int]:
        pivot_set = set(self.pivots)
        return [c for c in range(self.cols) if c not in pivot_set]


@dataclass(frozen=True)
class AffineSolution:
    """Particular solution of M x = b (free parameters at zero) and dim ker(M)."""

    particular: RatMatrix
    kernel_dim: int


def mat_mul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    return a @ b


def _integer_row(values: Sequence[Fraction]) -> list[int]:
    scale = math.lcm(*(v.denominator for v in values))
    return [int(v * scale) for v in values]


def _primitive(row: list[int]) -> list[int]:
    g = math.gcd(*row)
    return [v // g for v in row] if g > 1 else row


def rref(m: RatMatrix, rhs: RatMatrix | None = None) -> tuple[EchelonForm, list[Fraction] | None]:
    """Fraction-free Gauss-Jordan elimination to reduced row echelon form.

    Rows are scaled to integers and eliminated by cross-multiplication, each row kept primitive
    (content divided out); pivot rows are divided by their pivots only once, at the end. Pivots are
    the first nonzero entry in column order, so the result is unique for a given matrix. When
    ``rhs`` (a column) is given it is carried along as an extra column and returned reduced.
    """
    if rhs is not None and (rhs.rows != m.rows or rhs.cols != 1):
        msg = f"Right-hand side must be a {m.rows}x1 column, got {rhs.rows}x{rhs.cols}"
        raise DimensionMismatchError(msg)
    augmented = m.to_rows()
    if rhs is not None:
        for row, value in zip(augmented, rhs.entries, strict=True):
            row.append(value)
    work = [_primitive(_integer_row(row)) for row in augmented]
    pivots: list[int] = []
    piv_r = 0
    for piv_c in range(m.cols):
        if piv_r == m.rows:
            break
        pick = next((r for r in range(piv_r, m.rows) if work[r][piv_c] != 0), None)
        if pick is None:
            continue
        if pick != piv_r:
            work[piv_r], work[pick] = work[pick], work[piv_r]
        pivot_row = work[piv_r]
        fp = pivot_row[piv_c]
        for r in range(m.rows):
            fr = work[r][piv_c]
            if r == piv_r or fr == 0:
                continue
            work[r] = _primitive([fp * a - fr * b for a, b in zip(work[r], pivot_row, strict=True)])
        pivots.append(piv_c)
        piv_r += 1

    rows: list[list[Fraction]] = []
    for r, row in enumerate(work):
        d = row[pivots[r]] if r < len(pivots) else 1
        rows.append([Fraction(v, d) for v in row])
    if rhs is None:
        return EchelonForm(rows=rows, pivots=pivots, cols=m.cols), None
    t = [row.pop() for row in rows]
    return EchelonForm(rows=rows, pivots=pivots, cols=m.cols), t


def rank(m: RatMatrix) -> int:
    return rref(m)[0].rank


def nullspace(m: RatMatrix) -> list[RatMatrix]:
    """Exact basis of ker(m) in reduced-echelon parameter form.

    One column vector per free (non-pivot) column c: entry 1 at c, zero at the other free columns,
    and minus the reduced coefficients at the pivot columns. Empty iff m is injective.
    """
    form, _ = rref(m)
    basis: list[RatMatrix] = []
    for free in form.free_columns:
        v = [_ZERO] * m.cols
        v[free] = _ONE
        for r, piv in enumerate(form.pivots):
            v[piv] = -form.rows[r][free]
        basis.append(RatMatrix.column(v))
    return basis


def solve_affine(m: RatMatrix, b: RatMatrix) -> AffineSolution | None:
    """Solve m x = b exactly; None when inconsistent."""
    form, t = rref(m, b)
    assert t is not None
    if any(t[r] != 0 for r in range(form.rank, m.rows)):
        return None
    x = [_ZERO] * m.cols
    for r, piv in enumerate(form.pivots):
        x[piv] = t[r]
    return AffineSolution(particular=RatMatrix.column(x), kernel_dim=len(form.free_columns))


def inverse(m: RatMatrix) -> RatMatrix:
    if not m.is_square:
        msg = f"Cannot invert a non-square {m.rows}x{m.cols} matrix"
        raise DimensionMismatchError(msg)
    n = m.rows
    augmented = hstack([m, RatMatrix.identity(n)])
    form, _ = rref(augmented)
    if form.pivots[:n] != list(range(n)):
        msg = "Matrix is singular"
        raise RejectedInputError(msg)
    return RatMatrix.from_rows([row[n:] for row in form.rows])


def hstack(blocks: Sequence[RatMatrix]) -> RatMatrix:
    return RatMatrix.block([list(blocks)])


def vstack(blocks: Sequence[RatMatrix]) -> RatMatrix:
    return RatMatrix.block([[b] for b in blocks])


def columns_matrix(vectors: Sequence[RatMatrix], length: int) -> RatMatrix:
    """Place column vectors side by side; an empty sequence gives a length x 0 matrix."""
    if not vectors:
        return RatMatrix.zeros(length, 0)
    return hstack(vectors)


def in_column_span(basis: Sequence[RatMatrix], vectors: Sequence[RatMatrix], length: int) -> bool:
    """Whether every vector lies in span(basis), by an exact rank comparison."""
    base = columns_matrix(basis, length)
    base_rank = rank(base) if basis else 0
    return all(rank(hstack([base, v])) == base_rank for v in vectors)


def kron(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    """Kronecker product: block (i, j) equals a[i, j] * b."""
    entries: list[Fraction] = []
    for i in range(a.rows):
        a_row = a.row(i)
        for k in range(b.rows):
            b_row = b.row(k)
            for x in a_row:
                entries.extend(x * y for y in b_row)
    return RatMatrix(a.rows * b.rows, a.cols * b.cols, tuple(entries))


def vec(m: RatMatrix) -> RatMatrix:
    """Column-stacking vectorization: vec([[a, b], [c, d]]) = (a, c, b, d)^T."""
    return RatMatrix(m.rows * m.cols, 1, tuple(v for j in range(m.cols) for v in m.col(j)))


def unvec(v: RatMatrix, rows: int, cols: int) -> RatMatrix:
    """Inverse of vec for a rows x cols matrix."""
    if v.cols != 1 or v.rows != rows * cols:
        msg = f"Cannot reshape a {v.rows}x{v.cols} vector into a {rows}x{cols} matrix"
        raise InputValidationError(msg)
    return RatMatrix(rows, cols, tuple(v.entries[j * rows + i] for i in range(rows) for j in range(cols)))

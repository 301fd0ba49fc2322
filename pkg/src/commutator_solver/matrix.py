"""
Dense matrices of exact rationals.

Entries are stored row-major in an immutable tuple of Fractions. Vectors are column matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, overload

from .exceptions import DimensionMismatchError, InputValidationError
from .rational import format_rational, to_rational

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

    from .rational import RationalLike

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True, slots=True)
class RatMatrix:
    """Immutable dense matrix over the rationals."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            msg = f"Negative matrix shape {self.rows}x{self.cols}"
            raise InputValidationError(msg)
        if len(self.entries) != self.rows * self.cols:
            msg = f"Matrix {self.rows}x{self.cols} needs {self.rows * self.cols} entries, got {len(self.entries)}"
            raise InputValidationError(msg)

    # Construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> RatMatrix:
        n_rows = len(rows)
        n_cols = len(rows[0]) if n_rows else 0
        entries: list[Fraction] = []
        for i, row in enumerate(rows):
            if len(row) != n_cols:
                msg = f"Ragged matrix: row {i} has {len(row)} entries, expected {n_cols}"
                raise InputValidationError(msg)
            entries.extend(to_rational(v) for v in row)
        return cls(n_rows, n_cols, tuple(entries))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RatMatrix:
        return cls(rows, cols, (_ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls.diagonal([_ONE] * n)

    @classmethod
    def diagonal(cls, values: Sequence[RationalLike]) -> RatMatrix:
        n = len(values)
        entries = [_ZERO] * (n * n)
        for i, v in enumerate(values):
            entries[i * n + i] = to_rational(v)
        return cls(n, n, tuple(entries))

    @classmethod
    def column(cls, values: Sequence[RationalLike]) -> RatMatrix:
        return cls(len(values), 1, tuple(to_rational(v) for v in values))

    @classmethod
    def unit(cls, n: int, index: int) -> RatMatrix:
        """Standard basis column vector e_index of length n."""
        return cls.column([_ONE if i == index else _ZERO for i in range(n)])

    @classmethod
    def elementary(cls, rows: int, cols: int, i: int, j: int) -> RatMatrix:
        """Matrix unit E_ij."""
        entries = [_ZERO] * (rows * cols)
        entries[i * cols + j] = _ONE
        return cls(rows, cols, tuple(entries))

    @classmethod
    def block(cls, blocks: Sequence[Sequence[RatMatrix]]) -> RatMatrix:
        """Assemble a block matrix; block rows must share heights, block columns widths."""
        heights = [row[0].rows for row in blocks]
        widths = [b.cols for b in blocks[0]]
        for bi, row in enumerate(blocks):
            if len(row) != len(widths):
                msg = f"Block row {bi} has {len(row)} blocks, expected {len(widths)}"
                raise DimensionMismatchError(msg)
            for bj, b in enumerate(row):
                if b.rows != heights[bi] or b.cols != widths[bj]:
                    msg = f"Block ({bi},{bj}) is {b.rows}x{b.cols}, expected {heights[bi]}x{widths[bj]}"
                    raise DimensionMismatchError(msg)
        entries: list[Fraction] = []
        for bi, row in enumerate(blocks):
            for r in range(heights[bi]):
                for b in row:
                    entries.extend(b.row(r))
        return cls(sum(heights), sum(widths), tuple(entries))

    @classmethod
    def block_diagonal(cls, blocks: Sequence[RatMatrix]) -> RatMatrix:
        return cls.block(
            [[b if i == j else cls.zeros(b.rows, c.cols) for j, c in enumerate(blocks)] for i, b in enumerate(blocks)]
        )

    # Access

    @overload
    def __getitem__(self, key: tuple[int, int]) -> Fraction: ...
    @overload
    def __getitem__(self, key: int) -> Fraction: ...
    def __getitem__(self, key: tuple[int, int] | int) -> Fraction:
        if isinstance(key, int):
            return self.entries[key]
        i, j = key
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return self.entries[j :: self.cols] if self.cols else ()

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> Iterator[RatMatrix]:
        """Iterate over the columns as column vectors."""
        for j in range(self.cols):
            yield RatMatrix(self.rows, 1, self.col(j))

    def submatrix(self, row_start: int, row_stop: int, col_start: int, col_stop: int) -> RatMatrix:
        entries: list[Fraction] = []
        for i in range(row_start, row_stop):
            entries.extend(self.entries[i * self.cols + col_start : i * self.cols + col_stop])
        return RatMatrix(row_stop - row_start, col_stop - col_start, tuple(entries))

    def diagonal_entries(self) -> tuple[Fraction, ...]:
        return tuple(self[i, i] for i in range(min(self.rows, self.cols)))

    # Predicates

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_diagonal(self) -> bool:
        return self.is_square and all(
            self.entries[i * self.cols + j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j
        )

    # Arithmetic

    @property
    def T(self) -> RatMatrix:  # noqa: N802
        return RatMatrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def _check_same_shape(self, other: RatMatrix, op: str) -> None:
        if self.shape != other.shape:
            msg = f"Cannot {op} {self.rows}x{self.cols} and {other.rows}x{other.cols} matrices"
            raise DimensionMismatchError(msg)

    def __add__(self, other: RatMatrix) -> RatMatrix:
        self._check_same_shape(other, "add")
        return RatMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries, strict=True)))

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        self._check_same_shape(other, "subtract")
        return RatMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries, strict=True)))

    def __neg__(self) -> RatMatrix:
        return RatMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c: RationalLike) -> RatMatrix:
        factor = to_rational(c)
        return RatMatrix(self.rows, self.cols, tuple(factor * a for a in self.entries))

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        if self.cols != other.rows:
            msg = f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            raise DimensionMismatchError(msg)
        other_cols = [other.col(j) for j in range(other.cols)]
        entries: list[Fraction] = []
        for i in range(self.rows):
            row = self.row(i)
            entries.extend(sum((a * b for a, b in zip(row, col, strict=True) if a and b), _ZERO) for col in other_cols)
        return RatMatrix(self.rows, other.cols, tuple(entries))

    def power(self, k: int) -> RatMatrix:
        if not self.is_square:
            msg = f"Cannot raise a non-square {self.rows}x{self.cols} matrix to a power"
            raise DimensionMismatchError(msg)
        if k < 0:
            msg = f"Negative matrix exponent {k}"
            raise InputValidationError(msg)
        result = RatMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def permuted(self, order: Sequence[int]) -> RatMatrix:
        """Conjugate by the permutation that lists old indices in ``order``: result[i,j] = self[order[i], order[j]]."""
        if sorted(order) != list(range(self.rows)) or not self.is_square:
            msg = f"Invalid permutation of length {len(order)} for a {self.rows}x{self.cols} matrix"
            raise InputValidationError(msg)
        return RatMatrix(self.rows, self.cols, tuple(self[a, b] for a in order for b in order))

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(format_rational(v) for v in self.row(i)) + "]" for i in range(self.rows)) + "]"

"""
Tests for exact scalars, matrices and linear algebra.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commutator_solver import linalg
from commutator_solver.exceptions import DimensionMismatchError, InputValidationError, RejectedInputError
from commutator_solver.matrix import RatMatrix
from commutator_solver.rational import format_rational, to_rational


def small_matrices(rows: int, cols: int) -> st.SearchStrategy[RatMatrix]:
    return st.lists(st.integers(-4, 4), min_size=rows * cols, max_size=rows * cols).map(
        lambda xs: RatMatrix(rows, cols, tuple(Fraction(x) for x in xs))
    )


def rational_matrices(rows: int, cols: int) -> st.SearchStrategy[RatMatrix]:
    return st.lists(
        st.fractions(min_value=-4, max_value=4, max_denominator=6), min_size=rows * cols, max_size=rows * cols
    ).map(lambda xs: RatMatrix(rows, cols, tuple(xs)))


@pytest.mark.unit
class TestRational:
    def test_parses_integers_and_fractions(self) -> None:
        assert to_rational("3/6") == Fraction(1, 2)
        assert to_rational("-7") == Fraction(-7)
        assert to_rational(4) == Fraction(4)
        assert to_rational(Fraction(2, 3)) == Fraction(2, 3)

    @pytest.mark.parametrize("bad", ["1.5", "1e3", "abc", "1/0", "", "2/-3"])
    def test_rejects_malformed_literals(self, bad: str) -> None:
        with pytest.raises(InputValidationError):
            to_rational(bad)

    def test_rejects_floats_and_bools(self) -> None:
        with pytest.raises(InputValidationError):
            to_rational(1.5)  # pyright: ignore[reportArgumentType]
        with pytest.raises(InputValidationError):
            to_rational(True)

    def test_format(self) -> None:
        assert format_rational(Fraction(-3, 4)) == "-3/4"
        assert format_rational(Fraction(10, 5)) == "2"


@pytest.mark.unit
class TestRatMatrix:
    def test_rejects_ragged_rows(self) -> None:
        with pytest.raises(InputValidationError, match="Ragged"):
            RatMatrix.from_rows([[1, 2], [3]])

    def test_rejects_wrong_entry_count(self) -> None:
        with pytest.raises(InputValidationError):
            RatMatrix(2, 2, (Fraction(1),))

    def test_product_and_power(self) -> None:
        n = RatMatrix.from_rows([[0, 1], [0, 0]])
        assert (n @ n).is_zero()
        assert n.power(0) == RatMatrix.identity(2)
        j = RatMatrix.from_rows([[1, 1], [0, 1]])
        assert j.power(5) == RatMatrix.from_rows([[1, 5], [0, 1]])
        assert linalg.mat_mul(j, RatMatrix.from_rows([[1, 2], [0, 1]])) == RatMatrix.from_rows([[1, 3], [0, 1]])
        assert linalg.mat_mul(RatMatrix.identity(2), n) == n

    def test_product_shape_mismatch(self) -> None:
        with pytest.raises(DimensionMismatchError):
            RatMatrix.zeros(2, 3) @ RatMatrix.zeros(2, 3)

    def test_block_assembly(self) -> None:
        a = RatMatrix.identity(2)
        b = RatMatrix.from_rows([[5], [6]])
        c = RatMatrix.from_rows([[7, 8]])
        d = RatMatrix.from_rows([[9]])
        assert RatMatrix.block([[a, b], [c, d]]) == RatMatrix.from_rows([[1, 0, 5], [0, 1, 6], [7, 8, 9]])

    def test_block_rejects_mismatched_heights(self) -> None:
        with pytest.raises(DimensionMismatchError):
            RatMatrix.block([[RatMatrix.identity(2), RatMatrix.identity(3)]])

    def test_permuted_conjugates(self) -> None:
        m = RatMatrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        assert m.permuted([2, 0, 1]) == RatMatrix.from_rows([[9, 7, 8], [3, 1, 2], [6, 4, 5]])

    def test_submatrix_and_diagonal(self) -> None:
        m = RatMatrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        assert m.submatrix(1, 3, 0, 2) == RatMatrix.from_rows([[4, 5], [7, 8]])
        assert m.diagonal_entries() == (1, 5, 9)
        assert not m.is_diagonal()
        assert RatMatrix.diagonal([1, 2]).is_diagonal()


@pytest.mark.unit
class TestElimination:
    def test_nullspace_rank_one(self) -> None:
        basis = linalg.nullspace(RatMatrix.from_rows([[1, 2], [2, 4]]))
        assert basis == [RatMatrix.column([-2, 1])]

    def test_nullspace_of_injective_map_is_empty(self) -> None:
        assert linalg.nullspace(RatMatrix.identity(3)) == []

    @given(small_matrices(3, 4))
    @settings(max_examples=60)
    def test_nullspace_vectors_are_annihilated(self, m: RatMatrix) -> None:
        basis = linalg.nullspace(m)
        assert len(basis) == m.cols - linalg.rank(m)
        for v in basis:
            assert (m @ v).is_zero()

    def test_rref_of_fractional_matrix(self) -> None:
        m = RatMatrix.from_rows([["1/2", "1/3", 1], [1, "2/3", 2]])
        form, t = linalg.rref(m)
        assert t is None
        assert form.pivots == [0]
        assert form.rows == [[1, Fraction(2, 3), 2], [0, 0, 0]]

    def test_rref_carries_rhs(self) -> None:
        form, t = linalg.rref(RatMatrix.from_rows([[2, 1], [1, 1]]), RatMatrix.column(["3/2", 1]))
        assert form.rows == [[1, 0], [0, 1]]
        assert t == [Fraction(1, 2), Fraction(1, 2)]

    @given(rational_matrices(3, 4))
    @settings(max_examples=60)
    def test_rref_is_reduced(self, m: RatMatrix) -> None:
        form, _ = linalg.rref(m)
        for r, piv in enumerate(form.pivots):
            assert form.rows[r][piv] == 1
            assert all(form.rows[i][piv] == 0 for i in range(m.rows) if i != r)
        assert all(v == 0 for row in form.rows[form.rank :] for v in row)
        for v in linalg.nullspace(m):
            assert (m @ v).is_zero()

    def test_solve_affine_consistent(self) -> None:
        m = RatMatrix.from_rows([[1, 1], [2, 2]])
        solution = linalg.solve_affine(m, RatMatrix.column([3, 6]))
        assert solution is not None
        assert solution.particular == RatMatrix.column([3, 0])
        assert solution.kernel_dim == 1

    def test_solve_affine_inconsistent(self) -> None:
        m = RatMatrix.from_rows([[1, 1], [1, 1]])
        assert linalg.solve_affine(m, RatMatrix.column([1, 2])) is None

    def test_inverse(self) -> None:
        m = RatMatrix.from_rows([[2, 1], [1, 1]])
        assert linalg.inverse(m) == RatMatrix.from_rows([[1, -1], [-1, 2]])

    def test_inverse_of_singular_matrix(self) -> None:
        with pytest.raises(RejectedInputError, match="singular"):
            linalg.inverse(RatMatrix.from_rows([[1, 2], [2, 4]]))

    def test_in_column_span(self) -> None:
        basis = [RatMatrix.column([1, 0, 1])]
        assert linalg.in_column_span(basis, [RatMatrix.column([3, 0, 3])], 3)
        assert not linalg.in_column_span(basis, [RatMatrix.column([1, 1, 0])], 3)
        assert linalg.in_column_span([], [RatMatrix.zeros(3, 1)], 3)


@pytest.mark.unit
class TestVectorization:
    def test_vec_stacks_columns(self) -> None:
        m = RatMatrix.from_rows([[1, 2], [3, 4]])
        assert linalg.vec(m) == RatMatrix.column([1, 3, 2, 4])
        assert linalg.unvec(linalg.vec(m), 2, 2) == m

    def test_unvec_rejects_wrong_size(self) -> None:
        with pytest.raises(InputValidationError):
            linalg.unvec(RatMatrix.column([1, 2, 3]), 2, 2)

    @given(small_matrices(2, 3), small_matrices(3, 2), small_matrices(2, 2))
    @settings(max_examples=40)
    def test_vec_of_product_is_kronecker(self, a: RatMatrix, x: RatMatrix, b: RatMatrix) -> None:
        assert linalg.vec(a @ x @ b) == linalg.kron(b.T, a) @ linalg.vec(x)

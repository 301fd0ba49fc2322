"""
Tests for residuals, the off-diagonal block operator and the structural checkers.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commutator_solver import linalg
from commutator_solver.equation import (
    EquationInstance,
    block_poly_operator,
    check_cube_annihilator,
    check_kernel_invariance,
    check_lemma_inva_i,
    check_prop_decomp,
    cubic_instance,
    diagonal_operator_spectrum,
    is_solution,
    nilpotency_index,
    off_diagonal_block,
    require_solution,
    residual,
)
from commutator_solver.exceptions import DimensionMismatchError, InputValidationError, PreconditionError
from commutator_solver.matrix import RatMatrix
from commutator_solver.polynomial import CUBIC, X_POLY, DensePoly, FactoredPoly, critical_set

A_10 = RatMatrix.diagonal([1, 0])


def jordan_like(q: int) -> RatMatrix:
    """[[1, q], [0, 1]], a solution of XA - AX = X^2 - X^3 for A = diag(1, 0)."""
    return RatMatrix.from_rows([[1, q], [0, 1]])


@pytest.mark.unit
class TestResidual:
    def test_zero_is_a_solution(self) -> None:
        inst = cubic_instance(RatMatrix.diagonal([3, -1, 2]))
        report = residual(inst, RatMatrix.zeros(3, 3))
        assert report.is_solution
        assert report.residual.is_zero()

    @pytest.mark.parametrize("q", [0, 1, -7, 12])
    def test_two_by_two_family(self, q: int) -> None:
        report = residual(cubic_instance(A_10), jordan_like(q))
        assert report.is_solution
        assert report.f_of_x_nilpotent
        assert report.nilpotency_index == (1 if q == 0 else 2)

    def test_lower_triangular_candidate_is_rejected(self) -> None:
        x = RatMatrix.from_rows([[1, 0], [4, 1]])
        report = residual(cubic_instance(A_10), x)
        assert not report.is_solution
        with pytest.raises(PreconditionError):
            require_solution(cubic_instance(A_10), x)

    def test_degenerate_family(self, x_squared_minus_one: FactoredPoly, degenerate_member) -> None:
        inst = EquationInstance(a=RatMatrix.diagonal([2, 2, 0, 0]), f=x_squared_minus_one)
        for u, v in [(3, -7), (0, 0), (1, 1), (-5, 2)]:
            assert is_solution(inst, degenerate_member(u, v))

    def test_to_dict(self) -> None:
        payload = residual(cubic_instance(A_10), jordan_like(2)).to_dict()
        assert payload["is_solution"] is True
        assert payload["residual"] == {"rows": 2, "cols": 2, "data": [["0", "0"], ["0", "0"]]}
        assert payload["nilpotency_index"] == 2

    def test_shape_mismatch(self) -> None:
        with pytest.raises(DimensionMismatchError):
            residual(cubic_instance(A_10), RatMatrix.zeros(3, 3))

    def test_nilpotency_index(self) -> None:
        shift = RatMatrix.from_rows([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
        assert nilpotency_index(shift) == 3
        assert nilpotency_index(RatMatrix.identity(2)) is None


@pytest.mark.unit
class TestEquationInstance:
    def test_rejects_non_square_a(self) -> None:
        with pytest.raises(InputValidationError, match="square"):
            EquationInstance(a=RatMatrix.zeros(2, 3), f=CUBIC)

    def test_diagonal_form(self) -> None:
        a = RatMatrix.from_rows([[1, -1], [0, 0]])
        inst = EquationInstance(a=a, f=CUBIC, diagonalizer=RatMatrix.from_rows([[1, 1], [0, 1]]))
        assert inst.diagonal_form == A_10
        assert EquationInstance(a=a, f=CUBIC).diagonal_form is None

    def test_rejects_bad_diagonalizer(self) -> None:
        a = RatMatrix.from_rows([[1, -1], [0, 0]])
        with pytest.raises(InputValidationError, match="diagonalize"):
            EquationInstance(a=a, f=CUBIC, diagonalizer=RatMatrix.identity(2))


@pytest.mark.unit
class TestBlockOperator:
    def test_cubic_at_identity_blocks(self) -> None:
        m = block_poly_operator(CUBIC, RatMatrix.identity(2), RatMatrix.identity(3))
        assert m == RatMatrix.identity(6).scale(-1)

    def test_linear_polynomial(self) -> None:
        m = block_poly_operator(X_POLY, RatMatrix.diagonal([1, 5]), RatMatrix.diagonal([2]))
        assert m == RatMatrix.identity(2)

    def test_kernel_dimension(self) -> None:
        m = block_poly_operator(CUBIC, RatMatrix.diagonal([1, 0]), RatMatrix.identity(1))
        assert len(linalg.nullspace(m + RatMatrix.identity(2))) == 1

    @given(
        st.lists(st.integers(-3, 3), min_size=4, max_size=4),
        st.lists(st.integers(-3, 3), min_size=1, max_size=1),
        st.lists(st.integers(-3, 3), min_size=2, max_size=2),
    )
    @settings(max_examples=40)
    def test_matches_direct_evaluation(self, p_entries: list[int], s_entries: list[int], q_entries: list[int]) -> None:
        p = RatMatrix(2, 2, tuple(Fraction(v) for v in p_entries))
        s = RatMatrix(1, 1, tuple(Fraction(v) for v in s_entries))
        q = RatMatrix(2, 1, tuple(Fraction(v) for v in q_entries))
        via_operator = linalg.unvec(block_poly_operator(CUBIC, p, s) @ linalg.vec(q), 2, 1)
        assert via_operator == off_diagonal_block(CUBIC, p, q, s)

    def test_diagonal_spectrum_is_divided_differences(self, cubic_factored: FactoredPoly) -> None:
        p, s = RatMatrix.diagonal([0, 1, 1]), RatMatrix.diagonal([1, 0])
        spectrum = diagonal_operator_spectrum(cubic_factored, p, s)
        assert spectrum == list(block_poly_operator(cubic_factored, p, s).diagonal_entries())
        allowed = critical_set(cubic_factored) | {Fraction(0)}
        assert set(spectrum) <= allowed

    def test_spectrum_needs_diagonal_blocks(self) -> None:
        with pytest.raises(InputValidationError):
            diagonal_operator_spectrum(CUBIC, jordan_like(1), RatMatrix.identity(1))


@pytest.mark.unit
class TestCheckers:
    def test_lemma_on_two_by_two_family(self) -> None:
        inst = cubic_instance(A_10)
        x = jordan_like(3)
        g = DensePoly.of(1, -1)
        assert check_lemma_inva_i(inst, x, DensePoly.of(0, 0, 1), 2, g)
        assert check_lemma_inva_i(inst, x, DensePoly.constant(7), 2, g)
        assert check_lemma_inva_i(inst, x, X_POLY, 2, g)

    def test_lemma_preconditions(self) -> None:
        inst = cubic_instance(A_10)
        with pytest.raises(PreconditionError, match="at least 2"):
            check_lemma_inva_i(inst, jordan_like(1), X_POLY, 1, DensePoly.of(1, -1))
        with pytest.raises(PreconditionError, match="does not solve"):
            check_lemma_inva_i(inst, RatMatrix.from_rows([[1, 0], [1, 1]]), X_POLY, 2, DensePoly.of(1, -1))

    def test_kernel_invariance(self) -> None:
        inst = cubic_instance(A_10)
        assert check_kernel_invariance(inst, jordan_like(4), 1)
        assert check_kernel_invariance(inst, RatMatrix.zeros(2, 2), 1)
        # ker of [[0, 1], [0, 0]] is span(e1), not invariant under [[0, 0], [1, 0]]
        swap = EquationInstance(a=RatMatrix.from_rows([[0, 0], [1, 0]]), f=CUBIC)
        assert not check_kernel_invariance(swap, RatMatrix.from_rows([[0, 1], [0, 0]]), 1)

    def test_cube_annihilator(self) -> None:
        assert check_cube_annihilator(jordan_like(5))
        assert not check_cube_annihilator(RatMatrix.identity(2).scale(2))

    def test_decomposition_support(self) -> None:
        inst = cubic_instance(A_10)
        check = check_prop_decomp(inst, jordan_like(5), 0, RatMatrix.unit(2, 1))
        assert check.passes
        assert check.support == (Fraction(0), Fraction(1))
        assert check.stop == 2

    def test_decomposition_with_diagonalizer(self) -> None:
        a = RatMatrix.from_rows([[1, -1], [0, 0]])
        inst = EquationInstance(a=a, f=CUBIC, diagonalizer=RatMatrix.from_rows([[1, 1], [0, 1]]))
        check = check_prop_decomp(inst, jordan_like(5), 0, RatMatrix.column([1, 1]))
        assert check.passes
        assert check.support == (Fraction(0), Fraction(1))

    def test_decomposition_preconditions(self) -> None:
        inst = cubic_instance(A_10)
        with pytest.raises(PreconditionError, match="eigenvector"):
            check_prop_decomp(inst, jordan_like(1), 0, RatMatrix.column([1, 1]))
        with pytest.raises(PreconditionError, match="eigenvector"):
            check_prop_decomp(inst, jordan_like(1), 0, RatMatrix.zeros(2, 1))
        no_basis = EquationInstance(a=RatMatrix.from_rows([[1, -1], [0, 0]]), f=CUBIC)
        with pytest.raises(InputValidationError, match="diagonalizer"):
            check_prop_decomp(no_basis, jordan_like(1), 0, RatMatrix.column([1, 1]))

"""
Tests for polynomials and their JSON forms.
"""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commutator_solver.exceptions import DimensionMismatchError, InputValidationError
from commutator_solver.matrix import RatMatrix
from commutator_solver.polynomial import (
    CUBIC,
    DensePoly,
    FactoredPoly,
    critical_set,
    divided_difference,
    expand,
    poly_derivative,
    poly_eval_matrix,
)
from commutator_solver.serialization import (
    dense_poly_from_json,
    dump_json,
    factored_poly_from_json,
    factored_poly_to_json,
    load_json,
    matrix_from_json,
    matrix_to_json,
    poly_from_json,
    rationals_from_json,
)

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@pytest.mark.unit
class TestDensePoly:
    def test_trailing_zeros_are_stripped(self) -> None:
        assert DensePoly.of(1, 0, 0).degree == 0
        assert DensePoly.of(0, 0).degree is None
        assert DensePoly.of(0, 0).is_zero()

    def test_arithmetic(self) -> None:
        p = DensePoly.of(1, 1)
        assert p * p == DensePoly.of(1, 2, 1)
        assert p**3 == DensePoly.of(1, 3, 3, 1)
        assert (p - p).is_zero()
        assert DensePoly.of(0, 0, 1, -1).derivative() == DensePoly.of(0, 2, -3)

    def test_evaluation(self) -> None:
        assert CUBIC(2) == Fraction(-4)
        assert CUBIC(Fraction(1, 2)) == Fraction(1, 8)

    def test_matrix_evaluation(self) -> None:
        x = RatMatrix.from_rows([[1, 1], [0, 1]])
        assert poly_eval_matrix(DensePoly.of(-1, 0, 1), x) == RatMatrix.from_rows([[0, 2], [0, 0]])

    def test_matrix_evaluation_needs_square_matrix(self) -> None:
        with pytest.raises(DimensionMismatchError):
            poly_eval_matrix(CUBIC, RatMatrix.zeros(2, 3))


@pytest.mark.unit
class TestFactoredPoly:
    def test_expand_cubic(self, cubic_factored: FactoredPoly) -> None:
        assert expand(cubic_factored) == CUBIC
        assert poly_derivative(CUBIC) == DensePoly.of(0, 2, -3)
        assert cubic_factored.degree == 3

    def test_validation(self) -> None:
        with pytest.raises(InputValidationError, match="nonzero"):
            FactoredPoly.of(0, [(1, 1)])
        with pytest.raises(InputValidationError, match="twice"):
            FactoredPoly.of(1, [(1, 1), (1, 2)])
        with pytest.raises(InputValidationError, match="multiplicity"):
            FactoredPoly.of(1, [(1, 0)])

    def test_critical_set(self, x_squared_minus_one: FactoredPoly, cubic_factored: FactoredPoly) -> None:
        assert critical_set(x_squared_minus_one) == {Fraction(2), Fraction(-2)}
        # f'(0) = 0 for the double root, f'(1) = -1
        assert critical_set(cubic_factored) == {Fraction(-1)}

    def test_divided_difference(self) -> None:
        square = DensePoly.of(0, 0, 1)
        assert divided_difference(square, 2, 3) == 5
        assert divided_difference(square, 3, 3) == 6

    @given(small_fractions, small_fractions)
    @settings(max_examples=80)
    def test_divided_difference_is_symmetric(self, alpha: Fraction, beta: Fraction) -> None:
        assert divided_difference(CUBIC, alpha, beta) == divided_difference(CUBIC, beta, alpha)


@pytest.mark.unit
class TestSerialization:
    def test_matrix_json(self) -> None:
        m = matrix_from_json({"rows": 2, "cols": 2, "data": [[1, "1/2"], ["-3", 0]]})
        assert m == RatMatrix.from_rows([[1, Fraction(1, 2)], [-3, 0]])
        assert matrix_to_json(m)["data"] == [["1", "1/2"], ["-3", "0"]]

    def test_matrix_rejects_floats(self) -> None:
        with pytest.raises(InputValidationError, match="Floating point"):
            matrix_from_json({"rows": 1, "cols": 1, "data": [[0.5]]})

    def test_matrix_rejects_bad_shape(self) -> None:
        with pytest.raises(InputValidationError, match="shape"):
            matrix_from_json({"rows": 2, "cols": 2, "data": [[1, 2]]})
        with pytest.raises(InputValidationError, match="missing"):
            matrix_from_json({"rows": 1, "data": [[1]]})

    def test_factored_polynomial(self, cubic_factored: FactoredPoly) -> None:
        payload = factored_poly_to_json(cubic_factored)
        assert payload == {"lead": "-1", "roots": [{"root": "0", "mult": 2}, {"root": "1", "mult": 1}]}
        assert factored_poly_from_json(payload) == cubic_factored

    def test_factored_polynomial_rejects_non_integer_multiplicity(self) -> None:
        with pytest.raises(InputValidationError, match="multiplicity"):
            factored_poly_from_json({"lead": "1", "roots": [{"root": "1", "mult": "2"}]})

    def test_poly_dispatch(self, cubic_factored: FactoredPoly) -> None:
        assert poly_from_json({"coeffs": [0, 0, 1, -1]}) == CUBIC
        assert poly_from_json(factored_poly_to_json(cubic_factored)) == cubic_factored
        assert dense_poly_from_json({"coeffs": ["1/2"]}) == DensePoly.of(Fraction(1, 2))

    def test_rationals(self) -> None:
        assert rationals_from_json(["1/2", 3]) == [Fraction(1, 2), Fraction(3)]
        with pytest.raises(InputValidationError):
            rationals_from_json({"not": "a list"})

    def test_load_json_errors(self, tmp_path) -> None:
        with pytest.raises(InputValidationError, match="Cannot read"):
            load_json(tmp_path / "missing.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        with pytest.raises(InputValidationError, match="Invalid JSON"):
            load_json(bad)

    def test_dump_json_is_sorted(self) -> None:
        assert json.loads(dump_json({"b": 1, "a": 2})) == {"a": 2, "b": 1}
        assert dump_json({"b": 1, "a": 2}).index('"a"') < dump_json({"b": 1, "a": 2}).index('"b"')

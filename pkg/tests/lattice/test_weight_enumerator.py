"""
Black-box tests for WeightEnumerator, FloatEnumerator and the coefficient
operations: round_coeffs, eval_poly and the degree formula.
"""

import numpy
import pytest

from src.latqd.lattice.enumerator import (
    FloatEnumerator,
    WeightEnumerator,
    check_box_fits,
    default_tolerance,
    degree_from_coefficients,
    eval_poly,
    round_coeffs,
    trig_degree_from_coeffs,
)
from src.latqd.lattice.errors import BudgetExceeded, InvariantViolation, ResidualTooLarge
from src.latqd.lattice.rule import LatticeRule

# ─── Fixtures ─────────────────────────────────────────────────────────────────


@pytest.fixture
def two_by_two():
    """N = 2, g = (1, 1); d = 1 gives three coefficients."""
    return LatticeRule(2, [1, 1])


@pytest.fixture
def five_one_two():
    return LatticeRule(5, [1, 2])


# ─── WeightEnumerator ─────────────────────────────────────────────────────────


class TestWeightEnumeratorInvariants:
    def test_valid_coefficients_stored(self, two_by_two):
        W = WeightEnumerator(two_by_two, 1, [1, 0, 4])
        assert W.coeffs == (1, 0, 4)
        assert W.d.d == 1
        assert W.total == 5

    def test_wrong_length_rejected(self, two_by_two):
        with pytest.raises(InvariantViolation):
            WeightEnumerator(two_by_two, 1, [1, 0])

    def test_leading_coefficient_must_be_one(self, two_by_two):
        with pytest.raises(InvariantViolation):
            WeightEnumerator(two_by_two, 1, [2, 0, 4])

    def test_negative_coefficient_rejected(self, two_by_two):
        with pytest.raises(InvariantViolation):
            WeightEnumerator(two_by_two, 1, [1, 0, -2])

    def test_odd_coefficient_rejected(self, two_by_two):
        with pytest.raises(InvariantViolation):
            WeightEnumerator(two_by_two, 1, [1, 1, 4])

    def test_equality_ignores_residual(self, two_by_two):
        exact = WeightEnumerator(two_by_two, 1, [1, 0, 4])
        rounded = WeightEnumerator(two_by_two, 1, [1, 0, 4], residual=1e-9)
        assert exact == rounded

    def test_serialization_restores(self, five_one_two):
        W = WeightEnumerator(five_one_two, 2, [1, 0, 0, 4, 0], residual=2.5e-12)
        restored = WeightEnumerator.deserialize(W.serialize())
        assert restored == W
        assert restored.residual == W.residual


class TestCheckBoxFits:
    def test_accepts_largest_fitting_box(self):
        check_box_fits(1, 39)

    def test_rejects_overflowing_box(self):
        with pytest.raises(BudgetExceeded):
            check_box_fits(1, 40)


class TestDefaultTolerance:
    def test_floor_for_sparse_boxes(self):
        assert default_tolerance(LatticeRule(50, [1]), 1) == pytest.approx(1e-6)

    def test_scales_with_average_coefficient(self, five_one_two):
        assert default_tolerance(five_one_two, 2) == pytest.approx(5e-6)


# ─── Degree formula ───────────────────────────────────────────────────────────


class TestDegreeFromCoefficients:
    def test_first_coefficient_nonzero_gives_degree_zero(self):
        degree = degree_from_coefficients([1, 2, 4], 1)
        assert degree.rho == 0
        assert degree.exact

    def test_capped_at_box_radius_is_not_exact(self, two_by_two):
        degree = trig_degree_from_coeffs(WeightEnumerator(two_by_two, 1, [1, 0, 4]))
        assert degree.rho == 1
        assert not degree.exact

    def test_nonzero_beyond_radius_is_not_exact(self, five_one_two):
        degree = trig_degree_from_coeffs(WeightEnumerator(five_one_two, 2, [1, 0, 0, 4, 0]))
        assert degree.rho == 2
        assert not degree.exact

    def test_nonzero_inside_radius_is_exact(self):
        degree = degree_from_coefficients([1, 0, 0, 0, 0, 4] + [0] * 7, 6)
        assert degree.rho == 4
        assert degree.exact
        assert degree.witness is None

    def test_invariant_under_trailing_zeros(self):
        coeffs = [1, 0, 0, 4, 0]
        assert degree_from_coefficients(coeffs, 2) == degree_from_coefficients(coeffs + [0, 0], 2)

    def test_all_zero_scans_whole_list(self):
        degree = degree_from_coefficients([1, 0, 0, 0, 0], 2)
        assert degree.rho == 4
        assert not degree.exact


# ─── Evaluation ───────────────────────────────────────────────────────────────


class TestEvalPoly:
    def test_integer_point(self, two_by_two):
        assert eval_poly(WeightEnumerator(two_by_two, 1, [1, 0, 4]), 2) == 17

    def test_one_gives_total(self, five_one_two):
        W = WeightEnumerator(five_one_two, 2, [1, 0, 0, 4, 0])
        assert eval_poly(W, 1) == W.total == 5

    def test_complex_point(self, two_by_two):
        value = eval_poly(WeightEnumerator(two_by_two, 1, [1, 0, 4]), 1j)
        assert value == pytest.approx(-3 + 0j)


# ─── Rounding ─────────────────────────────────────────────────────────────────


class TestRoundCoeffs:
    def test_rounds_values_within_tolerance(self, two_by_two):
        fe = FloatEnumerator(two_by_two, 1, [1.0000001, -0.0000002, 3.9999998])
        W = round_coeffs(fe, tol=1e-5)
        assert W.coeffs == (1, 0, 4)
        assert W.residual == pytest.approx(2e-7)

    def test_far_from_integer_raises_residual(self, two_by_two):
        fe = FloatEnumerator(two_by_two, 1, [1.0, 0.4, 4.0])
        with pytest.raises(ResidualTooLarge):
            round_coeffs(fe, tol=1e-5)

    def test_odd_after_rounding_raises_invariant(self, two_by_two):
        fe = FloatEnumerator(two_by_two, 1, [1.0, 1.0, 4.0])
        with pytest.raises(InvariantViolation):
            round_coeffs(fe, tol=1e-5)

    def test_negative_after_rounding_raises_invariant(self, two_by_two):
        fe = FloatEnumerator(two_by_two, 1, [1.0, 0.0, -2.0])
        with pytest.raises(InvariantViolation):
            round_coeffs(fe, tol=1e-5)

    def test_large_padding_raises_residual(self, two_by_two):
        fe = FloatEnumerator(two_by_two, 1, [1.0, 0.0, 4.0], padding=[0.0, 0.5])
        with pytest.raises(ResidualTooLarge):
            round_coeffs(fe, tol=1e-5)

    def test_small_padding_is_recorded(self, two_by_two):
        fe = FloatEnumerator(two_by_two, 1, [1.0, 0.0, 4.0], padding=[3e-9])
        assert round_coeffs(fe, tol=1e-5).residual == pytest.approx(3e-9)

    @pytest.mark.parametrize("tol", [0.0, -1e-6, float("nan")])
    def test_non_positive_tolerance_rejected(self, two_by_two, tol):
        fe = FloatEnumerator(two_by_two, 1, [1.0, 0.0, 4.0])
        with pytest.raises(ValueError):
            round_coeffs(fe, tol=tol)

    def test_default_tolerance_applies(self, two_by_two):
        fe = FloatEnumerator(two_by_two, 1, [1.0, 0.0, 4.0 + 1e-9])
        assert round_coeffs(fe).coeffs == (1, 0, 4)


class TestFloatEnumerator:
    def test_wrong_length_rejected(self, two_by_two):
        with pytest.raises(ValueError):
            FloatEnumerator(two_by_two, 1, [1.0, 0.0])

    def test_coefficients_are_read_only(self, two_by_two):
        fe = FloatEnumerator(two_by_two, 1, [1.0, 0.0, 4.0])
        with pytest.raises(ValueError):
            fe.coeffs[0] = 2.0

    def test_max_residual_includes_padding(self, two_by_two):
        fe = FloatEnumerator(two_by_two, 1, [1.0, 1e-10, 4.0], padding=numpy.array([1e-8]))
        assert fe.max_residual == pytest.approx(1e-8)
        assert fe.padding_residual == pytest.approx(1e-8)

"""
Unit tests for Laurent series and counterterm extraction.
"""
import math

import numpy as np
import pytest

from core.errors import InvalidExponent, LogDivergence, UnsupportedOrder
from core.potential import PowerLawPotential, lj12, make_power_law
from core.series import (
    Counterterm,
    LaurentSeries,
    bessel_sq_series,
    born_integrand,
    counterterm,
    default_truncation_order,
    integrand_series,
)


def displayed_coefficients(eta, alpha, beta, k):
    """The five negative-power coefficients of D(r) for lj12, keyed by exponent."""
    pi = math.pi
    return {
        -10: 2 * alpha * eta * k / pi,
        -8: -2 * alpha * eta * k ** 3 / (3 * pi),
        -6: 4 * alpha * eta * k ** 5 / (45 * pi),
        -4: -(2 * alpha * eta * k ** 7 / (315 * pi) + 4 * beta * eta * k / pi),
        -2: 4 * alpha * eta * k ** 9 / (14175 * pi) + 4 * beta * eta * k ** 3 / (3 * pi),
    }


@pytest.mark.unit
class TestLaurentSeries:
    """Tests for the LaurentSeries container."""

    def test_leading_zeros_stripped(self):
        """Test leading zero coefficients move min_exponent up."""
        series = LaurentSeries(-3, (0.0, 0.0, 2.0, 1.0), 0)

        assert series.min_exponent == -1
        assert series.coefficients == (2.0, 1.0)

    def test_zero_series(self):
        """Test the zero series has no terms."""
        series = LaurentSeries.zero(4)

        assert series.is_zero
        assert series.terms() == []
        assert series.evaluate(0.3) == 0.0

    def test_parts(self):
        """Test principal and regular parts split at r^0."""
        series = LaurentSeries(-2, (1.0, 0.0, 3.0, 4.0), 1)

        assert series.principal_part().terms() == [(1.0, -2)]
        assert series.regular_part().terms() == [(3.0, 0), (4.0, 1)]

    def test_evaluate_vectorized(self):
        """Test evaluate() on arrays."""
        series = LaurentSeries(-1, (2.0, 0.0, 1.0), 1)
        r = np.array([0.5, 2.0])

        np.testing.assert_allclose(series.evaluate(r), 2.0 / r + r)

    def test_coefficient_outside_range(self):
        """Test coefficients outside the stored range read as zero."""
        series = LaurentSeries(0, (1.0,), 3)

        assert series.coefficient(-5) == 0.0
        assert series.coefficient(7) == 0.0


@pytest.mark.unit
class TestBesselSqSeries:
    """Tests for bessel_sq_series()."""

    @pytest.mark.parametrize("k", [0.3, 1.0, 2.5])
    def test_half_order_leading_terms(self, k):
        """Test J_{1/2}(kr)^2 = (2k/pi) r - (2k^3/3pi) r^3 + ..."""
        series = bessel_sq_series(0.5, k, 5)

        assert series.min_exponent == 1
        assert series.coefficient(1) == pytest.approx(2 * k / math.pi, rel=1e-14)
        assert series.coefficient(3) == pytest.approx(-2 * k ** 3 / (3 * math.pi), rel=1e-14)

    def test_parity(self):
        """Test only exponents of the parity of 2 nu are present."""
        series = bessel_sq_series(1.5, 1.2, 11)

        assert all(e % 2 == 1 for _, e in series.terms())
        assert series.min_exponent == 3

    def test_order_zero(self):
        """Test J_0(x)^2 = 1 - x^2/2 + 3x^4/32 + ..."""
        series = bessel_sq_series(0.0, 1.0, 4)

        assert series.coefficients == pytest.approx((1.0, 0.0, -0.5, 0.0, 3 / 32), rel=1e-14)

    def test_matches_numerical_function(self):
        """Test the partial sum against 2 sin^2(kr)/(pi k r) at small r."""
        k, r = 1.7, 0.05
        series = bessel_sq_series(0.5, k, 15)

        expected = 2 * math.sin(k * r) ** 2 / (math.pi * k * r)

        assert series.evaluate(r) == pytest.approx(expected, rel=1e-14)

    def test_small_k_limit(self):
        """Test every coefficient vanishes as k -> 0."""
        series = bessel_sq_series(0.5, 1e-8, 9)

        assert max(abs(c) for c in series.coefficients) < 1e-8

    def test_non_integer_grid(self):
        """Test 2 nu not an integer raises UnsupportedOrder."""
        with pytest.raises(UnsupportedOrder):
            bessel_sq_series(0.25, 1.0, 6)


@pytest.mark.unit
class TestIntegrandSeries:
    """Tests for integrand_series()."""

    @pytest.mark.parametrize("params", [(1.0, 1.0, 1.0, 1.0), (2.0, 3.0, 0.5, 1.3)])
    def test_displayed_coefficients(self, params):
        """Test all five counterterm coefficients of the LJ s-wave integrand."""
        eta, alpha, beta, k = params

        series = integrand_series(lj12(eta, alpha, beta), k, 0.5)

        for exponent, expected in displayed_coefficients(eta, alpha, beta, k).items():
            assert series.coefficient(exponent) == pytest.approx(expected, rel=1e-10)

    def test_min_exponent(self):
        """Test min_exponent = 2 nu + 1 - max exponent."""
        series = integrand_series(lj12(1, 1, 1), 1.0, 0.5)

        assert series.min_exponent == -10
        assert series.truncation_order == default_truncation_order(-10) == 4

    def test_zero_potential(self):
        """Test the zero potential gives the zero series."""
        assert integrand_series(PowerLawPotential(), 1.0, 0.5).is_zero

    def test_cancellation_threshold(self):
        """Test exact cancellation between terms leaves no residue coefficient."""
        # alpha and beta chosen so the r^-4 coefficient cancels
        k = 1.0
        beta = -(2 * k ** 7 / (315 * math.pi)) / (4 * k / math.pi)

        series = integrand_series(lj12(1.0, 1.0, beta), k, 0.5)

        assert abs(series.coefficient(-4)) < 1e-14 * 2 / math.pi

    def test_partial_sum_reproduces_integrand(self):
        """Test the series through its truncation order matches g(0.1)."""
        # Arrange
        V, k, r = lj12(1, 1, 1), 1.0, 0.1
        series = integrand_series(V, k, 0.5)
        longer = integrand_series(V, k, 0.5, order=8)
        first_omitted = abs(longer.coefficient(6)) * r ** 6
        scale = sum(abs(c) * r ** e for c, e in series.terms())

        # Act
        difference = abs(series.evaluate(r) - born_integrand(V, k, 0.5)(r))

        # Assert
        assert difference <= first_omitted + 1e-13 * scale

    def test_remainder_bounded_near_origin(self):
        """Test g - D stays finite as r -> 0 and tends to the r^0 coefficient."""
        series = integrand_series(lj12(1, 1, 1), 1.0, 0.5, order=30)
        regular = series.regular_part()

        values = [regular.evaluate(r) for r in (1e-2, 1e-3, 1e-4)]

        assert abs(values[1] - values[2]) <= abs(values[0] - values[1])
        assert values[2] == pytest.approx(series.coefficient(0), rel=1e-6)

    def test_regular_part_matches_direct_subtraction(self):
        """Test the regular part equals g - D where subtraction is safe."""
        V, k, r = lj12(1, 1, 1), 1.0, 0.8
        series = integrand_series(V, k, 0.5, order=30)

        direct = born_integrand(V, k, 0.5)(r) - counterterm(series).evaluate(r)

        assert series.regular_part().evaluate(r) == pytest.approx(direct, rel=1e-10, abs=1e-12)


@pytest.mark.unit
class TestCounterterm:
    """Tests for counterterm() and the Counterterm type."""

    def test_lj_powers(self):
        """Test the LJ s-wave counterterm has powers 10, 8, 6, 4, 2."""
        ct = counterterm(integrand_series(lj12(1, 1, 1), 1.0, 0.5))

        assert ct.powers == [10, 8, 6, 4, 2]
        assert ct.poles[0][0] == pytest.approx(2 / math.pi, rel=1e-14)

    def test_no_negative_powers(self):
        """Test a series starting at r^0 gives an empty counterterm."""
        assert counterterm(LaurentSeries(0, (1.0, 2.0), 1)).is_empty

    def test_log_divergence(self):
        """Test a 1/r term raises LogDivergence."""
        series = integrand_series(make_power_law([(1.0, 3)]), 1.0, 0.5)

        with pytest.raises(LogDivergence):
            counterterm(series)

    def test_power_one_rejected_at_construction(self):
        """Test Counterterm refuses a power-1 entry."""
        with pytest.raises(LogDivergence):
            Counterterm(((1.0, 4), (2.0, 1)))

    def test_powers_must_decrease(self):
        """Test increasing or repeated powers are rejected."""
        with pytest.raises(InvalidExponent):
            Counterterm(((1.0, 2), (2.0, 4)))

    def test_scaled_and_evaluate(self):
        """Test scaled() and evaluate()."""
        ct = Counterterm(((1.0, 4), (-3.0, 2))).scaled(2.0)

        assert ct.poles == ((2.0, 4), (-6.0, 2))
        assert ct.evaluate(2.0) == pytest.approx(2.0 / 16 - 6.0 / 4)

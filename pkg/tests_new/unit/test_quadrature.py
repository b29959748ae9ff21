"""
Unit tests for adaptive and oscillatory-tail quadrature and the s-wave
closed-form tail.
"""
import math

import numpy as np
import pytest
from scipy import special

from core.config import QuadratureSettings
from core.errors import NoConvergence, UnsupportedShape
from core.potential import PowerLawPotential, lj12, lj_general, make_power_law
from core.quadrature import (
    QuadResult,
    integrate_adaptive,
    integrate_tail_oscillatory,
    levin_u,
    swave_tail_form,
    tail_closed_form_swave,
)
from core.series import born_integrand


def lj_tail_integrand(V, k):
    g = born_integrand(V, k, 0.5)
    return lambda r: -0.5 * math.pi * g(r)


@pytest.mark.unit
class TestIntegrateAdaptive:
    """Tests for integrate_adaptive()."""

    def test_polynomial(self):
        """Test x^2 on [0, 1] is 1/3."""
        result = integrate_adaptive(lambda x: x ** 2, 0.0, 1.0, 1e-10)

        assert isinstance(result, QuadResult)
        assert result.value == pytest.approx(1 / 3, abs=1e-14)
        assert result.converged
        assert result.evaluations > 0

    def test_sine(self):
        """Test sin on [0, pi] is 2."""
        result = integrate_adaptive(np.sin, 0.0, math.pi, 1e-10)

        assert result.value == pytest.approx(2.0, abs=1e-12)
        assert result.error_estimate <= 1e-10

    def test_scalar_only_integrand(self):
        """Test integrands that only accept floats are mapped pointwise."""
        result = integrate_adaptive(math.exp, 0.0, 1.0, 1e-12)

        assert result.value == pytest.approx(math.e - 1, rel=1e-13)

    def test_endpoint_singularity(self):
        """Test sqrt(x) on [0, 1] converges by bisection toward 0."""
        result = integrate_adaptive(np.sqrt, 0.0, 1.0, 1e-10)

        assert result.value == pytest.approx(2 / 3, abs=1e-9)
        assert result.diagnostics["cells"] > 5

    def test_empty_interval(self):
        """Test a == b gives zero with no evaluations."""
        result = integrate_adaptive(np.sin, 1.0, 1.0, 1e-10)

        assert result.value == 0.0
        assert result.converged

    def test_budget_exhaustion(self):
        """Test NoConvergence carries the partial result."""
        # Arrange
        f = lambda x: 1 / np.sqrt(x)

        # Act
        with pytest.raises(NoConvergence) as excinfo:
            integrate_adaptive(f, 0.0, 1.0, 1e-14, max_evaluations=100)

        # Assert
        partial = excinfo.value.result
        assert partial is not None
        assert not partial.converged
        assert partial.evaluations <= 100

    def test_reversed_interval_rejected(self):
        """Test a > b is a usage error."""
        with pytest.raises(ValueError):
            integrate_adaptive(np.sin, 1.0, 0.0, 1e-10)

    def test_additivity(self):
        """Test [a, c] + [c, b] = [a, b] within the combined error."""
        f = lambda x: np.exp(-x) * np.cos(5 * x)

        left = integrate_adaptive(f, 0.0, 0.7, 1e-11)
        right = integrate_adaptive(f, 0.7, 2.0, 1e-11)
        whole = integrate_adaptive(f, 0.0, 2.0, 1e-11)

        bound = left.error_estimate + right.error_estimate + whole.error_estimate
        assert abs(left.value + right.value - whole.value) <= max(bound, 1e-15)


@pytest.mark.unit
class TestLevin:
    """Tests for levin_u()."""

    def test_alternating_series(self):
        """Test log 2 = 1 - 1/2 + 1/3 - ... from a dozen terms."""
        terms = [(-1.0) ** n / (n + 1) for n in range(12)]
        partial_sums = list(np.cumsum(terms))

        assert levin_u(partial_sums, terms) == pytest.approx(math.log(2), abs=1e-9)

    def test_zero_terms_fall_back(self):
        """Test a vanishing term returns the plain partial sum."""
        assert levin_u([1.0, 1.0, 1.0], [1.0, 0.0, 0.0]) == 1.0

    def test_empty(self):
        """Test an empty sequence sums to zero."""
        assert levin_u([], []) == 0.0


@pytest.mark.unit
class TestIntegrateTailOscillatory:
    """Tests for integrate_tail_oscillatory()."""

    def test_sine_over_square(self):
        """Test sin(2x)/x^2 on [1, inf) against sin 2 - 2 Ci(2)."""
        # Arrange
        _, ci = special.sici(2.0)
        expected = math.sin(2.0) - 2.0 * ci

        # Act
        result = integrate_tail_oscillatory(lambda x: np.sin(2 * x) / x ** 2, 1.0, math.pi / 2, 1e-11)

        # Assert
        assert result.value == pytest.approx(expected, abs=1e-9)
        assert result.converged

    def test_lj_integrand_matches_closed_form(self):
        """Test the LJ s-wave tail at eps = k = 1 against the closed form."""
        V = lj12(1, 1, 1)

        result = integrate_tail_oscillatory(lj_tail_integrand(V, 1.0), 1.0, math.pi / 2, 1e-11)

        assert result.value == pytest.approx(tail_closed_form_swave(V, 1.0, 1.0), abs=1e-9)

    def test_non_oscillatory_decay(self):
        """Test 1/x^3 on [1, inf) is 1/2."""
        result = integrate_tail_oscillatory(lambda x: x ** -3.0, 1.0, 1.0, 1e-11)

        assert result.value == pytest.approx(0.5, abs=1e-9)

    def test_zero_integrand(self):
        """Test a vanishing integrand converges to 0."""
        result = integrate_tail_oscillatory(lambda x: np.zeros_like(x), 2.0, 1.0, 1e-12)

        assert result.value == 0.0

    def test_alternating_cells_use_alternating_series(self):
        """Test sin(2x)/x^2 is summed cell by cell and its error estimate covers the true error."""
        _, ci = special.sici(2.0)
        expected = math.sin(2.0) - 2.0 * ci

        result = integrate_tail_oscillatory(lambda x: np.sin(2 * x) / x ** 2, 1.0, math.pi / 2, 1e-11)

        assert result.diagnostics["mode"] == "alternating"
        assert result.error_estimate <= 1e-11
        assert abs(result.value - expected) <= 10 * result.error_estimate

    def test_constant_sign_cells_use_pair_sums(self):
        """Test the LJ Born integrand (one sign per cell) is summed by full periods."""
        result = integrate_tail_oscillatory(lj_tail_integrand(lj12(1, 1, 1), 1.0), 1.0, math.pi / 2, 1e-11)

        assert result.diagnostics["mode"] == "pair"
        assert result.diagnostics["order_difference"] <= 1e-11

    def test_converged_error_within_target(self):
        """Test converged results never report an error above max(tol, rtol |value|)."""
        tol = 1e-10

        result = integrate_tail_oscillatory(lambda x: np.cos(3 * x) / x ** 2, 2.0, math.pi / 3, tol)

        assert result.converged
        assert result.error_estimate <= max(tol, 1e-12 * abs(result.value))

    def test_cell_cap(self):
        """Test a slowly decaying integrand stops at the cell cap."""
        settings = QuadratureSettings(max_cells=8)

        with pytest.raises(NoConvergence) as excinfo:
            integrate_tail_oscillatory(lambda x: 1.0 / x, 1.0, 1.0, 1e-12, settings=settings)

        assert excinfo.value.result.diagnostics["cells"] == 8

    def test_half_period_must_be_positive(self):
        """Test a zero half-period is rejected."""
        with pytest.raises(ValueError):
            integrate_tail_oscillatory(np.sin, 1.0, 0.0, 1e-10)


def _sine_tail(a, b):
    si, ci = special.sici(a * b)
    return math.sin(a * b) / a - b * ci


def _cosine_tail(a, b):
    si, _ = special.sici(a * b)
    return math.cos(a * b) / a - b * (math.pi / 2 - si)


ADAPTIVE_CASES = [
    ("x^2", lambda x: x ** 2, 0.0, 1.0, 1 / 3),
    ("sin", np.sin, 0.0, math.pi, 2.0),
    ("exp", np.exp, 0.0, 1.0, math.e - 1),
    ("sqrt", np.sqrt, 0.0, 1.0, 2 / 3),
    ("lorentzian", lambda x: 1 / (1 + x ** 2), 0.0, 1.0, math.pi / 4),
    ("cos(10x)", lambda x: np.cos(10 * x), 0.0, 1.0, math.sin(10) / 10),
    ("gaussian", lambda x: np.exp(-x ** 2), 0.0, 3.0, math.sqrt(math.pi) / 2 * math.erf(3)),
    ("x exp", lambda x: x * np.exp(x), 0.0, 2.0, math.e ** 2 + 1),
    ("runge", lambda x: 1 / (1 + 25 * x ** 2), -1.0, 1.0, 0.4 * math.atan(5)),
]

TAIL_CASES = (
    [
        (f"sin({b}x)/x^2 from {a}", (lambda b: lambda x: np.sin(b * x) / x ** 2)(b), a, math.pi / b, _sine_tail(a, b))
        for a in (0.5, 1.0, 2.0, 5.0) for b in (1.0, 2.0, 3.0)
    ]
    + [
        (f"cos({b}x)/x^2 from {a}", (lambda b: lambda x: np.cos(b * x) / x ** 2)(b), a, math.pi / b, _cosine_tail(a, b))
        for a in (0.5, 1.0, 2.0, 5.0) for b in (1.0, 2.0, 3.0)
    ]
    + [
        ("exp(-x) sin 3x from 0", lambda x: np.exp(-x) * np.sin(3 * x), 0.0, math.pi / 3, 0.3),
        ("x^-6 from 1", lambda x: x ** -6.0, 1.0, 1.0, 0.2),
    ]
)


def _honest(value, error_estimate, truth):
    slack = 50 * np.finfo(float).eps * max(1.0, abs(truth))
    return abs(value - truth) <= 10 * error_estimate + slack


@pytest.mark.unit
class TestErrorEstimateHonesty:
    """Reported error estimates bound the true error on integrals with known values."""

    @pytest.mark.parametrize("tol", [1e-8, 1e-11])
    def test_adaptive_estimates_are_honest(self, tol):
        """Test |value - truth| <= 10 * error_estimate across the adaptive cases."""
        offenders = []
        for name, f, a, b, truth in ADAPTIVE_CASES:
            result = integrate_adaptive(f, a, b, tol)
            if not _honest(result.value, result.error_estimate, truth):
                offenders.append(name)

        assert len(offenders) <= 0.01 * len(ADAPTIVE_CASES), offenders

    @pytest.mark.parametrize("tol", [1e-8, 1e-11])
    def test_tail_estimates_are_honest(self, tol):
        """Test |value - truth| <= 10 * error_estimate across the oscillatory tail cases."""
        offenders = []
        for name, f, a, half_period, truth in TAIL_CASES:
            try:
                result = integrate_tail_oscillatory(f, a, half_period, tol)
            except NoConvergence as e:
                result = e.result
            if not _honest(result.value, result.error_estimate, truth):
                offenders.append(name)

        assert len(offenders) <= 0.01 * len(TAIL_CASES), offenders


@pytest.mark.unit
class TestSwaveTailForm:
    """Tests for swave_tail_form() and tail_closed_form_swave()."""

    @pytest.mark.parametrize("params", [(1.0, 1.0, 1.0, 1.0), (1.5, 0.7, 2.0, 0.6)])
    def test_si_coefficient(self, params):
        """Test the Si(2k eps) coefficient -(4 alpha eta k^10/155925 + 4 beta eta k^4/15)."""
        eta, alpha, beta, k = params

        form = swave_tail_form(lj12(eta, alpha, beta), k)

        expected = -(4 * alpha * eta * k ** 10 / 155925 + 4 * beta * eta * k ** 4 / 15)
        assert form.si == pytest.approx(expected, rel=1e-12)
        assert form.ci == 0.0

    def test_leading_power_term(self):
        """Test the pure power term -alpha eta/(22 k eps^11)."""
        eta, alpha, k = 2.0, 0.5, 1.3

        form = swave_tail_form(lj12(eta, alpha, 1.0), k)

        assert form.power[11] == pytest.approx(-alpha * eta / (22 * k), rel=1e-14)

    def test_constant_term(self):
        """Test the constant 2 pi alpha eta k^10/155925 + 2 pi beta eta k^4/15."""
        k = 0.8

        form = swave_tail_form(lj12(1, 1, 1), k)

        expected = 2 * math.pi * k ** 10 / 155925 + 2 * math.pi * k ** 4 / 15
        assert form.constant == pytest.approx(expected, rel=1e-12)

    def test_large_cutoff_limit(self):
        """Test the tail vanishes at k eps = 1e6."""
        assert abs(tail_closed_form_swave(lj12(1, 1, 1), 1.0, 1e6)) < 1e-10

    def test_odd_exponent_uses_cosine_integral(self):
        """Test a 1/r^9 tail (Ci path) against numerical integration."""
        V = make_power_law([(1.0, 9)])
        k, eps = 1.1, 0.9

        form = swave_tail_form(V, k)
        numeric = integrate_tail_oscillatory(lj_tail_integrand(V, k), eps, math.pi / (2 * k), 1e-12)

        assert form.ci != 0.0
        assert form.evaluate(eps) == pytest.approx(numeric.value, abs=1e-9)

    def test_zero_potential(self):
        """Test the zero potential has a zero tail."""
        assert tail_closed_form_swave(PowerLawPotential(), 1.0, 0.5) == 0.0

    def test_other_shapes_rejected(self):
        """Test exponents outside {12, 6} raise UnsupportedShape."""
        with pytest.raises(UnsupportedShape):
            tail_closed_form_swave(lj_general(1, 1, 1, 10), 1.0, 1.0)

"""
Laurent expansion of the Born integrand g(r) = r V(r) J_nu(kr)^2 about r = 0
and extraction of its divergent part, the counterterm D(r).
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import special

from .errors import InvalidExponent, LogDivergence, OutOfEnvelope, UnsupportedOrder
from .potential import PowerLawPotential
from .specfun import bessel_j

logger = logging.getLogger(__name__)

CANCELLATION_THRESHOLD = 1e-14


@dataclass(frozen=True)
class LaurentSeries:
    """
    Truncated series sum_i coefficients[i] * r^(min_exponent + i).

    Exponents above truncation_order are not represented. Leading zeros are
    stripped at construction; the zero series has no coefficients.
    """
    min_exponent: int
    coefficients: Tuple[float, ...]
    truncation_order: int

    def __post_init__(self):
        coefficients = tuple(float(c) for c in self.coefficients)
        coefficients = coefficients[: max(0, self.truncation_order - self.min_exponent + 1)]
        shift = 0
        while shift < len(coefficients) and coefficients[shift] == 0.0:
            shift += 1
        min_exponent = self.min_exponent + shift
        coefficients = coefficients[shift:]
        if not coefficients:
            min_exponent = self.truncation_order
        object.__setattr__(self, "min_exponent", int(min_exponent))
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def zero(cls, truncation_order: int = 0) -> "LaurentSeries":
        return cls(truncation_order, (), truncation_order)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, exponent: int) -> float:
        i = exponent - self.min_exponent
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return 0.0

    def terms(self) -> List[Tuple[float, int]]:
        """Nonzero (coefficient, exponent) pairs in increasing exponent order."""
        return [
            (c, self.min_exponent + i)
            for i, c in enumerate(self.coefficients)
            if c != 0.0
        ]

    def _restricted(self, low: int, high: int) -> "LaurentSeries":
        low = max(low, self.min_exponent)
        high = min(high, self.truncation_order)
        if high < low:
            return LaurentSeries.zero(min(high, self.truncation_order))
        coefficients = tuple(self.coefficient(e) for e in range(low, high + 1))
        return LaurentSeries(low, coefficients, high)

    def principal_part(self) -> "LaurentSeries":
        """Negative-power terms."""
        return self._restricted(self.min_exponent, -1)

    def regular_part(self) -> "LaurentSeries":
        """Terms with exponent >= 0, up to the truncation order."""
        return self._restricted(0, self.truncation_order)

    def evaluate(self, r):
        """Partial sum at r (scalar or numpy array, r > 0 if negative powers exist)."""
        r_arr = np.asarray(r, dtype=float)
        total = np.zeros_like(r_arr)
        # Highest power first keeps the small terms from being swamped.
        for c, e in reversed(self.terms()):
            total = total + c * r_arr ** e
        if np.ndim(total) == 0:
            return float(total)
        return total


@dataclass(frozen=True)
class Counterterm:
    """D(r) = sum of a_n / r^n with powers n >= 2, strictly decreasing."""
    poles: Tuple[Tuple[float, int], ...] = ()

    def __post_init__(self):
        poles = tuple((float(a), int(n)) for a, n in self.poles)
        for a, n in poles:
            if n == 1:
                raise LogDivergence(f"Counterterm power 1 (coefficient {a:g}) has no power-law antiderivative")
            if n < 2:
                raise InvalidExponent(f"Counterterm power must be >= 2, got {n}")
        powers = [n for _, n in poles]
        if any(p <= q for p, q in zip(powers, powers[1:])):
            raise InvalidExponent(f"Counterterm powers must be strictly decreasing: {powers}")
        object.__setattr__(self, "poles", poles)

    @property
    def powers(self) -> List[int]:
        return [n for _, n in self.poles]

    @property
    def is_empty(self) -> bool:
        return not self.poles

    def scaled(self, factor: float) -> "Counterterm":
        return Counterterm(tuple((factor * a, n) for a, n in self.poles))

    def evaluate(self, r):
        r_arr = np.asarray(r, dtype=float)
        total = np.zeros_like(r_arr)
        for a, n in reversed(self.poles):
            total = total + a * r_arr ** (-n)
        if np.ndim(total) == 0:
            return float(total)
        return total

    def to_dict(self):
        return {"poles": [[a, n] for a, n in self.poles]}


def _two_nu(nu: float) -> int:
    two_nu = 2.0 * float(nu)
    if two_nu < 0.0 or abs(two_nu - round(two_nu)) > 1e-12:
        raise UnsupportedOrder(
            f"Bessel order {nu!r} does not give an integer exponent grid for J_nu^2"
        )
    return int(round(two_nu))


def _bessel_sq_coefficients(nu: float, k: float, max_n: int) -> np.ndarray:
    """c_n * (k/2)^(2 nu + 2n) for n = 0..max_n, the r^(2 nu + 2n) coefficients of J_nu(kr)^2."""
    j = np.arange(max_n + 1, dtype=float)
    # Ascending series of J_nu(x) / (x/2)^nu
    a = (-1.0) ** j * special.rgamma(j + 1.0) * special.rgamma(j + nu + 1.0)
    c = np.convolve(a, a)[: max_n + 1]
    half_k = k / 2.0
    powers = np.array([half_k ** (2.0 * nu + 2.0 * n) for n in range(max_n + 1)])
    return c * powers


def bessel_sq_series(nu: float, k: float, order: int) -> LaurentSeries:
    """Taylor series of J_nu(kr)^2 in r up to r^order."""
    two_nu = _two_nu(nu)
    if k < 0.0 or not math.isfinite(k):
        raise OutOfEnvelope(f"Wave number must be non-negative, got {k!r}")
    order = int(order)
    if order < two_nu:
        return LaurentSeries.zero(order)

    max_n = (order - two_nu) // 2
    values = _bessel_sq_coefficients(float(nu), float(k), max_n)
    coefficients = np.zeros(order - two_nu + 1)
    coefficients[0::2] = values
    return LaurentSeries(two_nu, tuple(coefficients), order)


def default_truncation_order(min_exponent: int) -> int:
    """Enough positive orders past the last negative power to expose the r^0 remainder."""
    negative_powers = max(0, (1 - min_exponent) // 2)
    return min_exponent + 2 * negative_powers + 4


def integrand_series(
    V: PowerLawPotential,
    k: float,
    nu: float,
    order: Optional[int] = None,
) -> LaurentSeries:
    """Laurent series of r * V(r) * J_nu(kr)^2 about r = 0."""
    two_nu = _two_nu(nu)
    if V.is_zero:
        return LaurentSeries.zero(0 if order is None else int(order))

    min_exponent = two_nu + 1 - V.max_exponent
    if order is None:
        order = default_truncation_order(min_exponent)
    order = int(order)

    sums: Dict[int, float] = {}
    magnitudes: Dict[int, float] = {}
    for c, m in V.terms:
        shift = 1 - m
        bessel = bessel_sq_series(nu, k, order - shift)
        for b, e in bessel.terms():
            exponent = e + shift
            sums[exponent] = sums.get(exponent, 0.0) + c * b
            magnitudes[exponent] = magnitudes.get(exponent, 0.0) + abs(c * b)

    if order < min_exponent:
        return LaurentSeries.zero(order)

    coefficients = []
    for exponent in range(min_exponent, order + 1):
        value = sums.get(exponent, 0.0)
        if abs(value) < CANCELLATION_THRESHOLD * magnitudes.get(exponent, 0.0):
            logger.debug(f"Dropping cancelled coefficient of r^{exponent}: {value:.3e}")
            value = 0.0
        coefficients.append(value)
    return LaurentSeries(min_exponent, tuple(coefficients), order)


def counterterm(series: LaurentSeries) -> Counterterm:
    """Negative-power part of the series with powers >= 2."""
    residue = series.coefficient(-1)
    if residue != 0.0:
        raise LogDivergence(
            f"Integrand has a 1/r term (coefficient {residue:.6g}); "
            f"the cutoff integral diverges logarithmically"
        )
    poles = tuple(
        (c, -e) for c, e in series.principal_part().terms() if e <= -2
    )
    return Counterterm(poles)


def born_integrand(V: PowerLawPotential, k: float, nu: float) -> Callable:
    """g(r) = r V(r) J_nu(kr)^2, vectorized over r > 0."""
    terms = V.terms

    def g(r):
        r_arr = np.asarray(r, dtype=float)
        potential = np.zeros_like(r_arr)
        for c, m in terms:
            potential = potential + c * r_arr ** (-m)
        j = bessel_j(nu, k * r_arr)
        out = r_arr * potential * j * j
        if np.ndim(out) == 0:
            return float(out)
        return out

    return g

"""
Singular inverse-power-law potentials V(r) = sum of c * r^(-m), and the
Lennard-Jones presets built from them.
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Tuple

import numpy as np

from .errors import InvalidExponent, NonPositiveRadius

logger = logging.getLogger(__name__)

Term = Tuple[float, int]

MIN_EXPONENT = 3


def _as_exponent(m) -> int:
    """Accept integral ints/floats; reject everything else."""
    try:
        value = float(m)
    except (TypeError, ValueError):
        raise InvalidExponent(f"Exponent {m!r} is not a number")
    if not math.isfinite(value) or value != int(value):
        raise InvalidExponent(f"Exponent {m!r} is not an integer")
    return int(value)


@dataclass(frozen=True)
class PowerLawPotential:
    """
    Finite sum of terms c / r^m with distinct integer exponents m >= 3.

    Terms are normalized at construction: duplicate exponents are merged,
    zero coefficients dropped, and exponents sorted in decreasing order.
    The empty term tuple is the zero potential.
    """
    terms: Tuple[Term, ...] = ()

    def __post_init__(self):
        merged: Dict[int, float] = {}
        for coefficient, exponent in self.terms:
            m = _as_exponent(exponent)
            if m < MIN_EXPONENT:
                raise InvalidExponent(
                    f"Exponent {m} is not singular enough; need m >= {MIN_EXPONENT}"
                )
            merged[m] = merged.get(m, 0.0) + float(coefficient)
        normalized = tuple(
            (c, m) for m, c in sorted(merged.items(), reverse=True) if c != 0.0
        )
        object.__setattr__(self, "terms", normalized)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def exponents(self) -> List[int]:
        return [m for _, m in self.terms]

    @property
    def max_exponent(self) -> int:
        """Largest exponent; 0 for the zero potential."""
        return self.terms[0][1] if self.terms else 0

    def coefficient(self, m: int) -> float:
        for c, exponent in self.terms:
            if exponent == m:
                return c
        return 0.0

    def __call__(self, r):
        return evaluate(self, r)

    def __add__(self, other: "PowerLawPotential") -> "PowerLawPotential":
        if not isinstance(other, PowerLawPotential):
            return NotImplemented
        return PowerLawPotential(self.terms + other.terms)

    def scaled(self, factor: float) -> "PowerLawPotential":
        return PowerLawPotential(tuple((factor * c, m) for c, m in self.terms))

    def describe(self) -> str:
        """Human-readable form, e.g. '1/r^12 - 2/r^6'."""
        if not self.terms:
            return "0"
        parts = []
        for i, (c, m) in enumerate(self.terms):
            sign = "-" if c < 0 else "+"
            body = f"{abs(c):g}/r^{m}"
            if i == 0:
                parts.append(body if c >= 0 else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    def to_dict(self) -> Dict[str, Any]:
        return {"terms": [[c, m] for c, m in self.terms]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PowerLawPotential":
        return cls(tuple((float(c), m) for c, m in data.get("terms", [])))


def make_power_law(terms: Iterable[Term]) -> PowerLawPotential:
    """Build a validated potential from (coefficient, exponent) pairs."""
    return PowerLawPotential(tuple(terms))


def lj12(eta: float, alpha: float, beta: float) -> PowerLawPotential:
    """Lennard-Jones 12-6 potential eta * (alpha/r^12 - 2*beta/r^6)."""
    return make_power_law([(eta * alpha, 12), (-2.0 * eta * beta, 6)])


def lj_general(eta: float, alpha: float, beta: float, m: int) -> PowerLawPotential:
    """Lennard-Jones m-6 potential eta * 6/(m-6) * (alpha/r^m - beta*m/(6 r^6))."""
    m = _as_exponent(m)
    if m <= 6:
        raise InvalidExponent(f"Lennard-Jones repulsive exponent must exceed 6, got {m}")
    return make_power_law([
        (eta * 6.0 * alpha / (m - 6), m),
        (-eta * beta * m / (m - 6), 6),
    ])


def evaluate(V: PowerLawPotential, r):
    """V(r) for r > 0; r may be a scalar or a numpy array."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(r_arr > 0.0)):
        raise NonPositiveRadius(f"Potential evaluated at non-positive radius {r!r}")
    total = np.zeros_like(r_arr)
    for c, m in V.terms:
        total = total + c * r_arr ** (-m)
    if np.ndim(total) == 0:
        return float(total)
    return total

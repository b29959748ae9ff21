"""
Dimensional renormalization: the first-order Born phase shift in n
dimensions, evaluated in closed form with Gamma functions and continued
to the requested (real) dimension.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

from scipy import special

from .errors import DimensionalPole, InvalidExponent, InvalidScatteringConfig, OutOfEnvelope
from .potential import PowerLawPotential
from .specfun import gamma_ratio, signed_exp

logger = logging.getLogger(__name__)


class Scheme(Enum):
    """Renormalization schemes."""
    DIMREG = "dimreg"
    ACONT = "acont"
    MINSUB = "minsub"

    @classmethod
    def parse(cls, name: str) -> "Scheme":
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            valid = ", ".join(s.value for s in cls)
            raise InvalidScatteringConfig(f"Unknown scheme '{name}' (expected one of: {valid})")


@dataclass(frozen=True)
class ScatteringConfig:
    """Wave number k, partial wave l and spatial dimension n."""
    k: float
    l: int = 0
    n: float = 3.0

    def __post_init__(self):
        k, n = float(self.k), float(self.n)
        if not (math.isfinite(k) and k > 0.0):
            raise InvalidScatteringConfig(f"Wave number must be positive, got {self.k!r}")
        if int(self.l) != self.l or self.l < 0:
            raise InvalidScatteringConfig(f"Partial wave must be a non-negative integer, got {self.l!r}")
        if not math.isfinite(n):
            raise InvalidScatteringConfig(f"Dimension must be finite, got {self.n!r}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "n", n)

    @property
    def nu(self) -> float:
        """Bessel order n/2 + l - 1."""
        return self.n / 2.0 + self.l - 1.0

    @property
    def is_physical(self) -> bool:
        return self.n == 3.0

    def to_dict(self) -> Dict[str, Any]:
        return {"k": self.k, "l": self.l, "n": self.n}


@dataclass
class PhaseShiftResult:
    """Renormalized phase shift from one scheme."""
    value: float
    scheme: Scheme
    error_estimate: float = 0.0
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scheme": self.scheme.value,
            "value": self.value,
            "error_estimate": self.error_estimate,
            "diagnostics": self.diagnostics,
        }


def _log_prefactor(m: int, k: float) -> float:
    """log of k^(m-2) Gamma(m-1) / (2^(m-1) Gamma(m/2)^2)."""
    return (
        (m - 2) * math.log(k)
        + special.gammaln(m - 1.0)
        - (m - 1) * math.log(2.0)
        - 2.0 * special.gammaln(m / 2.0)
    )


def _term(c: float, m: int, k: float, nu: float):
    if m < 3:
        raise InvalidExponent(f"Exponent must be >= 3, got {m}")
    ratio = gamma_ratio(nu - (m - 2) / 2.0, nu + m / 2.0)
    if ratio.is_pole:
        raise DimensionalPole(
            f"Term {c:g}/r^{m} hits a Gamma pole at nu = {nu:g} "
            f"(Gamma({nu - (m - 2) / 2.0:g}))",
            term=(c, m),
        )
    if ratio.is_zero or c == 0.0:
        return 0.0, ratio
    log_abs = math.log(0.5 * math.pi * abs(c)) + _log_prefactor(m, k) + ratio.log_abs
    value = signed_exp(-math.copysign(1.0, c) * math.copysign(1.0, ratio.value), log_abs)
    if not math.isfinite(value):
        raise OutOfEnvelope(
            f"Term {c:g}/r^{m} at k={k:g} overflows double precision (log|delta| = {log_abs:.1f})"
        )
    return value, ratio


def term_phase_shift_dim(c: float, m: int, k: float, nu: float) -> float:
    """
    Closed form of -(pi/2) c int_0^inf r^(1-m) J_nu(kr)^2 dr, continued in nu.

    Raises:
        DimensionalPole: Gamma(nu - (m-2)/2) sits on a pole.
        OutOfEnvelope: the value lies outside double range.
    """
    value, _ = _term(float(c), int(m), float(k), float(nu))
    return value


def phase_shift_dimreg(
    V: PowerLawPotential,
    cfg: ScatteringConfig,
    settings=None,
) -> PhaseShiftResult:
    """Sum of term_phase_shift_dim over the terms of V at dimension cfg.n."""
    contributions = []
    terms = []
    for c, m in V.terms:
        value, ratio = _term(c, m, cfg.k, cfg.nu)
        contributions.append(value)
        terms.append({
            "coefficient": c,
            "exponent": m,
            "value": value,
            "gamma_ratio": ratio.to_dict(),
        })
    try:
        total = math.fsum(contributions)
    except OverflowError:
        raise OutOfEnvelope(f"dimreg sum at k={cfg.k:g} overflows double precision")
    logger.info(f"dimreg: k={cfg.k:g} l={cfg.l} n={cfg.n:g} delta={total:.15g}")
    return PhaseShiftResult(
        value=total,
        scheme=Scheme.DIMREG,
        error_estimate=0.0,
        diagnostics={"nu": cfg.nu, "terms": terms},
    )

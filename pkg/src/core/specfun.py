"""
Real-valued special functions: Gamma with pole detection, stable Gamma
ratios, Bessel functions of the first kind and the sine integral.

The heavy lifting is done by scipy.special; this module adds the pole
bookkeeping and argument envelopes the renormalization schemes rely on.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy import special

from .errors import OutOfEnvelope, PoleArgument

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

POLE_TOLERANCE = 1e-12
MAX_BESSEL_ORDER = 50.0
MAX_BESSEL_ARGUMENT = 1e6


def nonpositive_integer(x: float) -> Optional[int]:
    """Return the non-positive integer within POLE_TOLERANCE of x, if any."""
    nearest = round(x)
    if nearest <= 0 and abs(x - nearest) < POLE_TOLERANCE:
        return int(nearest)
    return None


def _sinpi(x: float) -> float:
    """sin(pi*x) with exact argument reduction."""
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


@dataclass(frozen=True)
class GammaRatioResult:
    """Gamma(a)/Gamma(b) with degeneracy flags.

    is_pole: numerator at a pole, denominator finite (value undefined, NaN).
    is_zero: denominator at a pole, numerator finite (value 0).
    log_abs: log|value| when finite; value overflows to +-inf beyond
    double range while log_abs stays exact.
    """
    value: float
    is_pole: bool = False
    is_zero: bool = False
    log_abs: Optional[float] = field(default=None, compare=False)

    def to_dict(self):
        return {
            "value": None if self.is_pole else self.value,
            "is_pole": self.is_pole,
            "is_zero": self.is_zero,
        }


def gamma(x: float) -> float:
    """Gamma function; negative arguments go through the reflection identity."""
    x = float(x)
    pole = nonpositive_integer(x)
    if pole is not None:
        raise PoleArgument(f"Gamma has a pole at {x!r} (non-positive integer {pole})")
    if x < 0.0:
        return math.pi / (_sinpi(x) * float(special.gamma(1.0 - x)))
    return float(special.gamma(x))


def gamma_ratio(a: float, b: float) -> GammaRatioResult:
    """Gamma(a)/Gamma(b) in log space with explicit sign bookkeeping."""
    a, b = float(a), float(b)
    pole_a = nonpositive_integer(a)
    pole_b = nonpositive_integer(b)

    if pole_a is not None and pole_b is None:
        return GammaRatioResult(value=math.nan, is_pole=True)
    if pole_b is not None and pole_a is None:
        return GammaRatioResult(value=0.0, is_zero=True)
    if pole_a is not None and pole_b is not None:
        # Ratio of residues: Res Gamma at -m is (-1)^m / m!
        m, n = -pole_a, -pole_b
        sign = (-1.0) ** (m - n)
        log_magnitude = float(special.gammaln(n + 1) - special.gammaln(m + 1))
    else:
        sign = float(special.gammasgn(a) * special.gammasgn(b))
        log_magnitude = float(special.gammaln(a) - special.gammaln(b))
    return GammaRatioResult(value=signed_exp(sign, log_magnitude), log_abs=log_magnitude)


def signed_exp(sign: float, log_magnitude: float) -> float:
    """sign * exp(log_magnitude), saturating to +-inf or 0 outside double range."""
    with np.errstate(over="ignore", under="ignore"):
        return float(sign * np.exp(log_magnitude))


def _is_half_integer(nu: float) -> bool:
    return abs(nu - math.floor(nu) - 0.5) < POLE_TOLERANCE


def bessel_j(nu: float, x: ArrayLike) -> ArrayLike:
    """Bessel function of the first kind J_nu(x) for real nu and x >= 0.

    Accepts scalars or numpy arrays for x. Half-integer orders nu >= 1/2 use
    the closed trigonometric forms (via spherical Bessel functions).
    """
    nu = float(nu)
    x_arr = np.asarray(x, dtype=float)

    if not math.isfinite(nu) or abs(nu) > MAX_BESSEL_ORDER:
        raise OutOfEnvelope(f"Bessel order {nu!r} outside |nu| <= {MAX_BESSEL_ORDER}")
    if not np.all(np.isfinite(x_arr)) or np.any(x_arr < 0.0) or np.any(x_arr > MAX_BESSEL_ARGUMENT):
        raise OutOfEnvelope(f"Bessel argument outside [0, {MAX_BESSEL_ARGUMENT:g}]")
    if nu < 0.0 and nonpositive_integer(nu) is None and np.any(x_arr == 0.0):
        raise OutOfEnvelope(f"J_{nu} diverges at x = 0")

    if nu > 0.0 and _is_half_integer(nu):
        n = int(round(nu - 0.5))
        with np.errstate(divide="ignore", invalid="ignore"):
            if n == 0:
                out = np.where(x_arr > 0.0, np.sqrt(2.0 / (np.pi * x_arr)) * np.sin(x_arr), 0.0)
            else:
                out = np.sqrt(2.0 * x_arr / np.pi) * special.spherical_jn(n, x_arr)
    else:
        out = special.jv(nu, x_arr)

    if np.ndim(out) == 0:
        return float(out)
    return out


def sin_integral(x: ArrayLike) -> ArrayLike:
    """Sine integral Si(x) = int_0^x sin(t)/t dt, odd in x."""
    x_arr = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        si, _ = special.sici(np.abs(x_arr))
    out = np.sign(x_arr) * si
    if np.ndim(out) == 0:
        return float(out)
    return out


def cos_integral(x: ArrayLike) -> ArrayLike:
    """Cosine integral Ci(x) for x > 0."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0.0):
        raise OutOfEnvelope("Ci(x) requires x > 0")
    _, ci = special.sici(x_arr)
    if np.ndim(ci) == 0:
        return float(ci)
    return ci

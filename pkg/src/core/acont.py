"""
Analytic-continuation renormalization.

The Born integral is split at eps. On [0, eps] the counterterm D(r) is
subtracted from the integrand and its integral is added back through the
exponent continuation int_0^eps r^-n dr = eps^(1-n)/(1-n). The tail on
[eps, inf) is integrated numerically.
"""
import logging
import math
from typing import Optional

import numpy as np

from .config import AppConfig
from .dimreg import PhaseShiftResult, Scheme, ScatteringConfig
from .errors import InvalidSplitPoint, LogDivergence, SeamMismatch, UnsupportedDimension
from .potential import PowerLawPotential
from .quadrature import integrate_adaptive, integrate_tail_oscillatory
from .series import Counterterm, born_integrand, counterterm, integrand_series

logger = logging.getLogger(__name__)

EPSILON = np.finfo(float).eps
BORN_PREFACTOR = -0.5 * math.pi


def counterterm_integral(ct: Counterterm, eps: float) -> float:
    """sum of a_n eps^(1-n)/(1-n): the continued value of int_0^eps D(r) dr."""
    eps = float(eps)
    pieces = []
    for a, n in ct.poles:
        if n == 1:
            raise LogDivergence("Counterterm power 1 has no continued integral")
        pieces.append(a * eps ** (1 - n) / (1 - n))
    return math.fsum(pieces)


def require_physical_dimension(cfg: ScatteringConfig, scheme: str) -> None:
    if not cfg.is_physical:
        raise UnsupportedDimension(f"{scheme} runs at n = 3 only, got n = {cfg.n:g}")


def subtracted_integrand(V: PowerLawPotential, cfg: ScatteringConfig, settings: AppConfig):
    """
    g(r) - D(r) on (0, inf), evaluated from the regular part of the Laurent
    series for k r <= seam_kr and by direct subtraction beyond.

    Returns (function, counterterm, seam radius).
    """
    options = settings.acont
    g = born_integrand(V, cfg.k, cfg.nu)
    leading = integrand_series(V, cfg.k, cfg.nu)
    order = max(options.remainder_order, leading.min_exponent + options.remainder_order)
    series = integrand_series(V, cfg.k, cfg.nu, order=order)
    ct = counterterm(series)
    regular = series.regular_part()
    seam = options.seam_kr / cfg.k

    direct_g = g(seam)
    direct_d = ct.evaluate(seam)
    from_series = regular.evaluate(seam)
    mismatch = abs((direct_g - direct_d) - from_series)
    allowed = options.seam_tolerance * max(1.0, abs(direct_g), abs(direct_d))
    logger.debug(f"acont seam at r={seam:g}: mismatch {mismatch:.3e} (allowed {allowed:.3e})")
    if mismatch > allowed:
        raise SeamMismatch(
            f"Series and direct evaluation of g - D disagree at r = {seam:g}: "
            f"{mismatch:.3e} > {allowed:.3e}"
        )

    def subtracted(r):
        r_arr = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.empty_like(r_arr)
        near = r_arr <= seam
        if np.any(near):
            out[near] = regular.evaluate(r_arr[near])
        if np.any(~near):
            far = r_arr[~near]
            out[~near] = g(far) - ct.evaluate(far)
        if np.ndim(r) == 0:
            return float(out[0])
        return out

    return subtracted, ct, seam


def phase_shift_ac(
    V: PowerLawPotential,
    cfg: ScatteringConfig,
    eps: Optional[float] = None,
    tol: Optional[float] = None,
    settings: Optional[AppConfig] = None,
) -> PhaseShiftResult:
    """
    Renormalized phase shift by counterterm subtraction on [0, eps].

    Raises:
        UnsupportedDimension: cfg.n != 3.
        InvalidSplitPoint: eps <= 0.
        LogDivergence: the integrand carries a 1/r term.
        SeamMismatch: series and direct evaluations disagree at the switchover.
        NoConvergence: propagated from quadrature.
    """
    settings = settings or AppConfig()
    require_physical_dimension(cfg, "Analytic continuation")
    eps = 1.0 / cfg.k if eps is None else float(eps)
    if not eps > 0.0:
        raise InvalidSplitPoint(f"Split point must be positive, got {eps}")
    tol = settings.quadrature.tol if tol is None else float(tol)

    if V.is_zero:
        return PhaseShiftResult(
            value=0.0,
            scheme=Scheme.ACONT,
            error_estimate=EPSILON,
            diagnostics={"eps": eps, "counterterm_powers": []},
        )

    subtracted, ct, seam = subtracted_integrand(V, cfg, settings)
    g = born_integrand(V, cfg.k, cfg.nu)

    inner = integrate_adaptive(
        lambda r: BORN_PREFACTOR * subtracted(r), 0.0, eps, 0.5 * tol,
        settings=settings.quadrature,
    )
    continued = counterterm_integral(ct.scaled(BORN_PREFACTOR), eps)
    tail = integrate_tail_oscillatory(
        lambda r: BORN_PREFACTOR * g(r), eps, math.pi / (2.0 * cfg.k), 0.5 * tol,
        settings=settings.quadrature,
    )

    value = math.fsum([inner.value, continued, tail.value])
    rounding = EPSILON * math.fsum(
        abs(BORN_PREFACTOR * a * eps ** (1 - n) / (1 - n)) for a, n in ct.poles
    )
    error = max(inner.error_estimate + tail.error_estimate + rounding, EPSILON)
    logger.info(
        f"acont: k={cfg.k:g} l={cfg.l} eps={eps:g} delta={value:.15g} (+/- {error:.2e})"
    )
    return PhaseShiftResult(
        value=value,
        scheme=Scheme.ACONT,
        error_estimate=error,
        diagnostics={
            "eps": eps,
            "counterterm_powers": ct.powers,
            "seam_radius": seam,
            "subtracted_integral": inner.value,
            "counterterm_integral": continued,
            "tail_integral": tail.value,
            "evaluations": inner.evaluations + tail.evaluations,
        },
    )

"""
Numerical integration engines.

integrate_adaptive: globally adaptive Gauss-Kronrod (G7/K15) on [a, b].
integrate_tail_oscillatory: [a, inf) split into half-period cells, summed
    as an alternating or a full-period series under the Levin u-transform.
swave_tail_form: exact closed form of the s-wave Born tail of a power-law
    potential, built from sin, cos, Si and Ci by integration by parts.
"""
import heapq
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from scipy.special import comb

from .config import QuadratureSettings
from .errors import NoConvergence, UnsupportedShape
from .potential import PowerLawPotential
from .specfun import cos_integral, sin_integral

logger = logging.getLogger(__name__)

EPSILON = np.finfo(float).eps
TINY = np.finfo(float).tiny
# Trailing sign-alternating half cells needed before they are summed as an alternating series
ALTERNATING_RUN = 6

# Kronrod abscissae (positive half, decreasing) and weights, QUADPACK qk15
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_WEIGHTS = np.zeros(15)
_GAUSS_WEIGHTS[[1, 13]] = _WG[0]
_GAUSS_WEIGHTS[[3, 11]] = _WG[1]
_GAUSS_WEIGHTS[[5, 9]] = _WG[2]
_GAUSS_WEIGHTS[7] = _WG[3]


@dataclass
class QuadResult:
    """Value and error estimate of a numerical integral."""
    value: float
    error_estimate: float
    evaluations: int
    converged: bool
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "evaluations": self.evaluations,
            "converged": self.converged,
            "diagnostics": dict(self.diagnostics),
        }


def _evaluate(f: Callable, x: np.ndarray) -> np.ndarray:
    """Call f on an array of nodes; scalar-only integrands are mapped pointwise."""
    try:
        y = np.asarray(f(x), dtype=float)
        if y.shape == x.shape:
            return y
    except (TypeError, ValueError):
        pass
    return np.array([float(f(float(xi))) for xi in x])


def _gauss_kronrod_cell(f: Callable, a: float, b: float):
    """(integral, error estimate) of f on [a, b] from the 15/7-point pair."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    y = _evaluate(f, center + half * _NODES)
    if not np.all(np.isfinite(y)):
        raise NoConvergence(f"Integrand is not finite on [{a!r}, {b!r}]")

    kronrod = float(np.dot(_KRONROD_WEIGHTS, y))
    gauss = float(np.dot(_GAUSS_WEIGHTS, y))
    mean = 0.5 * kronrod
    resabs = abs(half) * float(np.dot(_KRONROD_WEIGHTS, np.abs(y)))
    resasc = abs(half) * float(np.dot(_KRONROD_WEIGHTS, np.abs(y - mean)))

    error = abs((kronrod - gauss) * half)
    if resasc != 0.0 and error != 0.0:
        error = resasc * min(1.0, (200.0 * error / resasc) ** 1.5)
    if resabs > TINY / (50.0 * EPSILON):
        error = max(50.0 * EPSILON * resabs, error)
    return kronrod * half, error


def integrate_adaptive(
    f: Callable,
    a: float,
    b: float,
    tol: Optional[float] = None,
    *,
    rtol: Optional[float] = None,
    max_evaluations: Optional[int] = None,
    min_width: Optional[float] = None,
    settings: Optional[QuadratureSettings] = None,
) -> QuadResult:
    """
    Integrate f over [a, b] by global adaptive bisection of G7/K15 cells.

    The cell with the largest error estimate is bisected until the summed
    error is at most max(tol, rtol * |value|).

    Raises:
        NoConvergence: evaluation budget spent or a cell narrower than
            min_width still dominates the error. The partial result is
            attached as `.result`.
    """
    settings = settings or QuadratureSettings()
    tol = settings.tol if tol is None else float(tol)
    rtol = settings.rtol if rtol is None else float(rtol)
    max_evaluations = settings.max_evaluations if max_evaluations is None else int(max_evaluations)
    a, b = float(a), float(b)
    if b < a:
        raise ValueError(f"integrate_adaptive needs a <= b, got [{a}, {b}]")
    if b == a:
        return QuadResult(0.0, 0.0, 0, True)
    if min_width is None:
        min_width = settings.min_width * max(1.0, b - a)

    value, error = _gauss_kronrod_cell(f, a, b)
    evaluations = 15
    heap = [(-error, a, b, value, error)]
    total_value, total_error = value, error

    while total_error > max(tol, rtol * abs(total_value)):
        neg_error, lo, hi, cell_value, cell_error = heapq.heappop(heap)
        width = hi - lo
        if width < min_width or evaluations + 30 > max_evaluations:
            heapq.heappush(heap, (neg_error, lo, hi, cell_value, cell_error))
            partial = _collect(heap, evaluations, converged=False)
            reason = "cell width limit" if width < min_width else "evaluation budget"
            raise NoConvergence(
                f"Adaptive quadrature on [{a:g}, {b:g}] stopped at {reason}: "
                f"error {partial.error_estimate:.3e} > tolerance {tol:.3e}",
                result=partial,
            )
        mid = lo + 0.5 * width
        left_value, left_error = _gauss_kronrod_cell(f, lo, mid)
        right_value, right_error = _gauss_kronrod_cell(f, mid, hi)
        evaluations += 30
        heapq.heappush(heap, (-left_error, lo, mid, left_value, left_error))
        heapq.heappush(heap, (-right_error, mid, hi, right_value, right_error))
        total_value += left_value + right_value - cell_value
        total_error += left_error + right_error - cell_error

    result = _collect(heap, evaluations, converged=True)
    result.converged = result.error_estimate <= max(tol, rtol * abs(result.value))
    return result


def _collect(heap: List, evaluations: int, converged: bool) -> QuadResult:
    value = math.fsum(item[3] for item in heap)
    error = math.fsum(item[4] for item in heap)
    return QuadResult(
        value=value,
        error_estimate=error,
        evaluations=evaluations,
        converged=converged,
        diagnostics={"cells": len(heap)},
    )


def levin_u(partial_sums: List[float], terms: List[float], max_order: int = 10) -> float:
    """
    Levin u-transform (beta = 1) over the last max_order + 1 partial sums.

    terms[n] is the n-th series term, so the remainder estimate is
    (n + 1) * terms[n]. Falls back to the last partial sum when an estimate
    vanishes or the transform is not finite.
    """
    count = len(partial_sums)
    if count == 0:
        return 0.0
    order = min(max_order, count - 1)
    start = count - 1 - order
    numerator = 0.0
    denominator = 0.0
    for i in range(order + 1):
        n = start + i
        omega = (n + 1) * terms[n]
        if omega == 0.0 or not math.isfinite(omega):
            return partial_sums[-1]
        weight = (-1.0) ** i * comb(order, i) * ((n + 1.0) / (start + order + 1.0)) ** (order - 1)
        numerator += weight * partial_sums[n] / omega
        denominator += weight / omega
    if denominator == 0.0:
        return partial_sums[-1]
    estimate = numerator / denominator
    return estimate if math.isfinite(estimate) else partial_sums[-1]


def _alternating_run_start(halves: List[float], run_start: int) -> int:
    """First index of the trailing run of strictly sign-alternating half cells."""
    j = len(halves) - 1
    if j >= 1 and not halves[j - 1] * halves[j] < 0.0:
        return j
    return run_start


def integrate_tail_oscillatory(
    f: Callable,
    a: float,
    half_period: float,
    tol: Optional[float] = None,
    *,
    rtol: Optional[float] = None,
    settings: Optional[QuadratureSettings] = None,
) -> QuadResult:
    """
    Integrate f over [a, inf) for an integrand oscillating with the given
    half-period and decaying at least like 1/r^2.

    Each half-period cell is integrated adaptively. While the trailing half
    cells alternate in sign they are Levin-accelerated as an alternating
    series; otherwise (constant-sign integrands such as r V(r) J^2) the
    full-period pair sums are. Converged once two successive estimates and
    a second estimate one Levin order lower all agree within
    max(tol, rtol * |value|), after at least `min_periods` full periods.

    Raises:
        NoConvergence: `max_cells` spent before the estimates settled.
    """
    settings = settings or QuadratureSettings()
    tol = settings.tol if tol is None else float(tol)
    rtol = settings.rtol if rtol is None else float(rtol)
    a, half_period = float(a), float(half_period)
    if not half_period > 0.0:
        raise ValueError(f"half_period must be positive, got {half_period}")

    cell_tol = 0.1 * tol
    cross_order = max(1, settings.max_order - 1)
    halves: List[float] = []
    half_sums: List[float] = []
    terms: List[float] = []
    partial_sums: List[float] = []
    estimates: List[float] = []
    cross_estimates: List[float] = []
    mode = None
    run_start = 0
    quadrature_error = 0.0
    evaluations = 0
    running = 0.0

    while len(halves) + 2 <= settings.max_cells:
        lo = a + len(halves) * half_period
        pair = 0.0
        for offset in (0, 1):
            cell_lo = lo + offset * half_period
            cell = integrate_adaptive(
                f, cell_lo, cell_lo + half_period, cell_tol,
                rtol=rtol, settings=settings,
            )
            pair += cell.value
            running += cell.value
            halves.append(cell.value)
            half_sums.append(running)
            run_start = _alternating_run_start(halves, run_start)
            quadrature_error += cell.error_estimate
            evaluations += cell.evaluations
        terms.append(pair)
        partial_sums.append(running)

        if len(halves) - run_start >= ALTERNATING_RUN:
            current = ("alternating", run_start)
            series_sums, series_terms = half_sums[run_start:], halves[run_start:]
        else:
            current = ("pair", 0)
            series_sums, series_terms = partial_sums, terms
        if current != mode:
            mode = current
            estimates, cross_estimates = [], []
        estimates.append(levin_u(series_sums, series_terms, settings.max_order))
        cross_estimates.append(levin_u(series_sums, series_terms, cross_order))

        if len(terms) >= settings.min_periods and len(estimates) >= 3:
            value = estimates[-1]
            target = max(tol, rtol * abs(value))
            last_step = abs(estimates[-1] - estimates[-2])
            previous_step = abs(estimates[-2] - estimates[-3])
            cross = abs(estimates[-1] - cross_estimates[-1])
            if max(last_step, previous_step, cross) <= target:
                error = max(last_step, previous_step, cross) + quadrature_error
                logger.debug(
                    f"Tail from {a:g}: {len(halves)} cells ({mode[0]}), "
                    f"{evaluations} evaluations, estimate {value:.15g}"
                )
                return QuadResult(
                    value=value,
                    error_estimate=error,
                    evaluations=evaluations,
                    converged=error <= target,
                    diagnostics={
                        "cells": len(halves),
                        "raw_sum": running,
                        "acceleration_step": last_step,
                        "order_difference": cross,
                        "mode": mode[0],
                    },
                )

    value = estimates[-1] if estimates else 0.0
    step = abs(estimates[-1] - estimates[-2]) if len(estimates) > 1 else math.inf
    partial = QuadResult(
        value=value,
        error_estimate=step + quadrature_error,
        evaluations=evaluations,
        converged=False,
        diagnostics={"cells": len(halves), "raw_sum": running, "mode": mode[0] if mode else None},
    )
    raise NoConvergence(
        f"Tail integration from {a:g} did not settle within {settings.max_cells} cells "
        f"(last step {step:.3e})",
        result=partial,
    )


@dataclass
class TailClosedForm:
    """
    Linear combination of elementary pieces in the cutoff eps:

        sum_j power[j] eps^-j + sum_j sin[j] eps^-j sin(a eps)
        + sum_j cos[j] eps^-j cos(a eps) + si Si(a eps) + ci Ci(a eps) + constant

    with a = 2k.
    """
    frequency: float
    power: Dict[int, float] = field(default_factory=dict)
    sin: Dict[int, float] = field(default_factory=dict)
    cos: Dict[int, float] = field(default_factory=dict)
    si: float = 0.0
    ci: float = 0.0
    constant: float = 0.0

    def _combine(self, other: "TailClosedForm", factor: float) -> "TailClosedForm":
        def merge(mine: Dict[int, float], theirs: Dict[int, float]) -> Dict[int, float]:
            out = dict(mine)
            for j, c in theirs.items():
                out[j] = out.get(j, 0.0) + factor * c
            return out

        return TailClosedForm(
            frequency=self.frequency,
            power=merge(self.power, other.power),
            sin=merge(self.sin, other.sin),
            cos=merge(self.cos, other.cos),
            si=self.si + factor * other.si,
            ci=self.ci + factor * other.ci,
            constant=self.constant + factor * other.constant,
        )

    def plus(self, other: "TailClosedForm", factor: float = 1.0) -> "TailClosedForm":
        return self._combine(other, factor)

    def scaled(self, factor: float) -> "TailClosedForm":
        return TailClosedForm(self.frequency)._combine(self, factor)

    def evaluate(self, eps: float) -> float:
        eps = float(eps)
        x = self.frequency * eps
        pieces = [c * eps ** (-j) for j, c in self.power.items()]
        pieces += [c * eps ** (-j) * math.sin(x) for j, c in self.sin.items()]
        pieces += [c * eps ** (-j) * math.cos(x) for j, c in self.cos.items()]
        if self.si:
            pieces.append(self.si * sin_integral(x))
        if self.ci:
            pieces.append(self.ci * cos_integral(x))
        pieces.append(self.constant)
        return math.fsum(pieces)


def _oscillatory_moments(a: float, max_power: int):
    """
    Closed forms of C_m = int_eps^inf r^-m cos(a r) dr and
    S_m = int_eps^inf r^-m sin(a r) dr for m = 1..max_power.
    """
    cosine = {1: TailClosedForm(a, ci=-1.0)}
    sine = {1: TailClosedForm(a, si=-1.0, constant=math.pi / 2.0)}
    for m in range(2, max_power + 1):
        cosine[m] = TailClosedForm(a, cos={m - 1: 1.0 / (m - 1)}).plus(sine[m - 1], -a / (m - 1))
        sine[m] = TailClosedForm(a, sin={m - 1: 1.0 / (m - 1)}).plus(cosine[m - 1], a / (m - 1))
    return cosine, sine


def swave_tail_form(V: PowerLawPotential, k: float) -> TailClosedForm:
    """
    Closed form of -(pi/2) int_eps^inf r V(r) J_{1/2}(kr)^2 dr as a function of eps.

    With J_{1/2}(kr)^2 = (1 - cos 2kr) / (pi k r), each term c/r^m contributes
    -(c/2k) eps^(1-m)/(m-1) + (c/2k) C_m.
    """
    k = float(k)
    if not k > 0.0:
        raise ValueError(f"Wave number must be positive, got {k}")
    a = 2.0 * k
    form = TailClosedForm(a)
    if V.is_zero:
        return form
    cosine, _ = _oscillatory_moments(a, V.max_exponent)
    for c, m in V.terms:
        prefactor = c / (2.0 * k)
        form = form.plus(TailClosedForm(a, power={m - 1: -prefactor / (m - 1)}))
        form = form.plus(cosine[m], prefactor)
    return form


def tail_closed_form_swave(V: PowerLawPotential, k: float, eps: float) -> float:
    """s-wave tail [delta_0]_eps^inf of a Lennard-Jones 12-6 shaped potential."""
    unsupported = set(V.exponents) - {12, 6}
    if unsupported:
        raise UnsupportedShape(
            f"Closed-form tail covers exponents 12 and 6 only; got {sorted(unsupported)}"
        )
    if not eps > 0.0:
        raise ValueError(f"Cutoff must be positive, got {eps}")
    return swave_tail_form(V, k).evaluate(eps)

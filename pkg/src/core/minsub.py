"""
Minimal-subtraction renormalization: cut the Born integral off at eps,
remove the analytically known poles in eps and extrapolate eps -> 0.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Dict, List, Optional, Sequence

import numpy as np

from .acont import BORN_PREFACTOR, counterterm_integral, require_physical_dimension, subtracted_integrand
from .config import AppConfig
from .dimreg import PhaseShiftResult, Scheme, ScatteringConfig
from .errors import ExtrapolationUnstable, InvalidGrid
from .potential import PowerLawPotential
from .quadrature import QuadResult, integrate_adaptive, integrate_tail_oscillatory
from .series import Counterterm, born_integrand

logger = logging.getLogger(__name__)

EPSILON = np.finfo(float).eps


def cutoff_phase_shift(
    V: PowerLawPotential,
    cfg: ScatteringConfig,
    eps: float,
    tol: Optional[float] = None,
    settings: Optional[AppConfig] = None,
) -> QuadResult:
    """-(pi/2) int_eps^inf r V(r) J_nu(kr)^2 dr, finite for eps > 0."""
    settings = settings or AppConfig()
    require_physical_dimension(cfg, "Minimal subtraction")
    eps = float(eps)
    if not eps > 0.0:
        raise InvalidGrid(f"Cutoff must be positive, got {eps}")
    if V.is_zero:
        return QuadResult(0.0, 0.0, 0, True)
    g = born_integrand(V, cfg.k, cfg.nu)
    return integrate_tail_oscillatory(
        lambda r: BORN_PREFACTOR * g(r),
        eps,
        math.pi / (2.0 * cfg.k),
        settings.quadrature.tol if tol is None else float(tol),
        settings=settings.quadrature,
    )


def pole_part(ct: Counterterm, eps: float) -> float:
    """sum of (-pi/2) a_n eps^(1-n)/(n-1), the negated continued counterterm integral."""
    return -counterterm_integral(ct.scaled(BORN_PREFACTOR), eps)


def pole_coefficients(ct: Counterterm) -> Dict[int, float]:
    """Map eps-power (1 - n) to its coefficient in pole_part."""
    return {1 - n: -(a / (1 - n)) for a, n in ct.scaled(BORN_PREFACTOR).poles}


def _pole_magnitude(ct: Counterterm, eps: float) -> float:
    return math.fsum(abs(c) * eps ** p for p, c in pole_coefficients(ct).items())


def default_eps_grid(k: float, settings: Optional[AppConfig] = None) -> List[float]:
    """Geometric cutoff grid starting at grid_start/k."""
    options = (settings or AppConfig()).minsub
    start = options.grid_start / float(k)
    return [start * options.grid_ratio ** i for i in range(options.grid_points)]


def remainder_exponents(V: PowerLawPotential, nu: float, count: int) -> List[int]:
    """
    Powers of eps in F(eps) - delta.

    F(eps) - delta = (pi/2) sum_e b_e eps^(e+1)/(e+1) over the non-negative
    exponents e of the subtracted integrand's Laurent grid.
    """
    if V.is_zero:
        return list(range(1, count + 1))
    min_exponent = int(round(2.0 * nu)) + 1 - V.max_exponent
    step = 2 if len({m % 2 for m in V.exponents}) == 1 else 1
    first = min_exponent
    if first < 0:
        first += step * math.ceil(-first / step)
    return [first + 1 + j * step for j in range(count)]


def richardson_table(
    eps_grid: Sequence[float],
    values: Sequence[float],
    exponents: Sequence[int],
) -> List[List[float]]:
    """
    Extrapolation table: table[j][i] is the eps -> 0 value of the exact fit
    through points i..i+j with powers 0, exponents[0], ..., exponents[j-1].
    """
    eps = np.asarray(eps_grid, dtype=float)
    f = np.asarray(values, dtype=float)
    count = len(eps)
    table = [list(f)]
    for j in range(1, count):
        column = []
        for i in range(count - j):
            window = eps[i:i + j + 1]
            matrix = np.column_stack(
                [np.ones(j + 1)] + [window ** p for p in exponents[:j]]
            )
            column.append(float(np.linalg.solve(matrix, f[i:i + j + 1])[0]))
        table.append(column)
    return table


def extrapolation_weights(eps_grid: Sequence[float], exponents: Sequence[int]) -> np.ndarray:
    """
    Weights w with table[-1][0] = sum_i w_i F(eps_i); sum(w) = 1 and
    sum(|w|) is the factor by which independent errors in F are amplified.
    """
    eps = np.asarray(eps_grid, dtype=float)
    matrix = np.column_stack([np.ones(len(eps))] + [eps ** p for p in exponents[:len(eps) - 1]])
    unit = np.zeros(len(eps))
    unit[0] = 1.0
    return np.linalg.solve(matrix.T, unit)


def _validate_grid(eps_grid: Sequence[float]) -> List[float]:
    grid = [float(e) for e in eps_grid]
    if len(grid) < 3:
        raise InvalidGrid(f"Cutoff grid needs at least 3 points, got {len(grid)}")
    if any(not e > 0.0 for e in grid):
        raise InvalidGrid(f"Cutoff grid must be positive: {grid}")
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise InvalidGrid(f"Cutoff grid must be strictly decreasing: {grid}")
    return grid


def _zero_result(grid: List[float]) -> PhaseShiftResult:
    return PhaseShiftResult(
        value=0.0,
        scheme=Scheme.MINSUB,
        error_estimate=0.0,
        diagnostics={
            "eps_grid": grid,
            "pole_coefficients": {},
            "extrapolation_exponents": [],
            "extrapolation_order": len(grid) - 1,
            "subtracted_values": [0.0] * len(grid),
            "extrapolation_table": [[0.0] * len(grid)],
        },
    )


def phase_shift_minsub(
    V: PowerLawPotential,
    cfg: ScatteringConfig,
    eps_grid: Optional[Sequence[float]] = None,
    tol: Optional[float] = None,
    settings: Optional[AppConfig] = None,
) -> PhaseShiftResult:
    """
    Renormalized phase shift from F(eps) = cutoff_phase_shift - pole_part,
    Richardson-extrapolated to eps = 0.

    The pole part is subtracted only at the largest cutoff eps_0; smaller
    cutoffs add the regular integral of g - D over [eps, eps_0], so
    F(eps) = F(eps_0) - (pi/2) int_eps^eps_0 (g - D) dr carries no
    cancellation. Quadrature errors are propagated through the
    extrapolation weights into error_estimate.

    Raises:
        UnsupportedDimension: cfg.n != 3.
        InvalidGrid: fewer than 3 points, or not positive and decreasing.
        ExtrapolationUnstable: the cancellation floor at eps_0 plus the
            quadrature error exceeds tol, or the extrapolants diverge.
        LogDivergence, SeamMismatch, NoConvergence: propagated.
    """
    settings = settings or AppConfig()
    require_physical_dimension(cfg, "Minimal subtraction")
    tol = settings.minsub.tol if tol is None else float(tol)
    grid = _validate_grid(default_eps_grid(cfg.k, settings) if eps_grid is None else eps_grid)
    if V.is_zero:
        return _zero_result(grid)

    subtracted, ct, _ = subtracted_integrand(V, cfg, settings)
    anchor = grid[0]
    cancellation = EPSILON * _pole_magnitude(ct, anchor)
    if cancellation > tol:
        raise ExtrapolationUnstable(
            f"Cutoff eps={anchor:g} loses {cancellation:.2e} to cancellation against "
            f"the pole part (tolerance {tol:.2e}); use larger cutoffs"
        )

    def regular_integral(eps: float) -> QuadResult:
        return integrate_adaptive(
            lambda r: BORN_PREFACTOR * subtracted(r), eps, anchor,
            settings.quadrature.tol, settings=settings.quadrature,
        )

    pieces: List[Optional[QuadResult]] = [None] * len(grid)
    workers = min(len(grid), settings.harness.clamped_workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(cutoff_phase_shift, V, cfg, anchor, None, settings): 0}
        futures.update({executor.submit(regular_integral, eps): i for i, eps in enumerate(grid) if i})
        for future in as_completed(futures):
            pieces[futures[future]] = future.result()

    anchored = pieces[0].value - pole_part(ct, anchor)
    anchor_error = cancellation + pieces[0].error_estimate
    subtracted_values = [anchored] + [anchored + piece.value for piece in pieces[1:]]
    floors = [anchor_error] + [anchor_error + piece.error_estimate for piece in pieces[1:]]
    for eps, floor in zip(grid, floors):
        if floor > tol:
            raise ExtrapolationUnstable(
                f"Cutoff eps={eps:g} carries {floor:.2e} of cancellation and quadrature "
                f"error (tolerance {tol:.2e})"
            )

    exponents = remainder_exponents(V, cfg.nu, len(grid) - 1)
    table = richardson_table(grid, subtracted_values, exponents)
    logger.debug(f"minsub table (exponents {exponents}): {table}")

    diagonal = [column[-1] for column in table]
    steps = [abs(b - a) for a, b in zip(diagonal, diagonal[1:])]
    if len(steps) >= 2 and steps[-1] > steps[-2] and steps[-1] > tol:
        raise ExtrapolationUnstable(
            f"Extrapolants diverge: last steps {steps[-2]:.3e} -> {steps[-1]:.3e}"
        )

    value = table[-1][0]
    weights = extrapolation_weights(grid, exponents)
    propagated = anchor_error + float(np.dot(np.abs(weights[1:]), [p.error_estimate for p in pieces[1:]]))
    error = max(abs(value - table[-2][-1]) + propagated, EPSILON)
    logger.info(
        f"minsub: k={cfg.k:g} l={cfg.l} grid={[f'{e:g}' for e in grid]} "
        f"delta={value:.15g} (+/- {error:.2e})"
    )
    return PhaseShiftResult(
        value=value,
        scheme=Scheme.MINSUB,
        error_estimate=error,
        diagnostics={
            "eps_grid": grid,
            "pole_coefficients": {str(p): c for p, c in sorted(pole_coefficients(ct).items())},
            "extrapolation_exponents": exponents,
            "extrapolation_order": len(grid) - 1,
            "subtracted_values": subtracted_values,
            "extrapolation_table": table,
            "quadrature_error": propagated,
            "weight_amplification": float(np.sum(np.abs(weights))),
        },
    )

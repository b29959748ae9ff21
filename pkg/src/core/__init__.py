"""
Core module - renormalization engines and their shared plumbing.
"""

from .config import AppConfig
from .logging_config import setup_logging
from .errors import RenormalizationError
from .potential import PowerLawPotential, make_power_law, lj12, lj_general, evaluate
from .series import LaurentSeries, Counterterm, bessel_sq_series, integrand_series, counterterm
from .quadrature import (
    QuadResult, integrate_adaptive, integrate_tail_oscillatory,
    swave_tail_form, tail_closed_form_swave,
)
from .dimreg import Scheme, ScatteringConfig, PhaseShiftResult, term_phase_shift_dim, phase_shift_dimreg
from .acont import counterterm_integral, phase_shift_ac
from .minsub import cutoff_phase_shift, pole_part, pole_coefficients, default_eps_grid, phase_shift_minsub
from .harness import ComparisonReport, SweepSpec, compare_schemes, run_sweep, parse_potential_spec

__all__ = [
    "AppConfig", "setup_logging", "RenormalizationError",
    "PowerLawPotential", "make_power_law", "lj12", "lj_general", "evaluate",
    "LaurentSeries", "Counterterm", "bessel_sq_series", "integrand_series", "counterterm",
    "QuadResult", "integrate_adaptive", "integrate_tail_oscillatory",
    "swave_tail_form", "tail_closed_form_swave",
    "Scheme", "ScatteringConfig", "PhaseShiftResult", "term_phase_shift_dim", "phase_shift_dimreg",
    "counterterm_integral", "phase_shift_ac",
    "cutoff_phase_shift", "pole_part", "pole_coefficients", "default_eps_grid", "phase_shift_minsub",
    "ComparisonReport", "SweepSpec", "compare_schemes", "run_sweep", "parse_potential_spec",
]

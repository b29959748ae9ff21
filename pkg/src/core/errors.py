"""
Exception hierarchy shared by the renormalization engines.
Every error the harness can record derives from RenormalizationError.
"""
from typing import Optional, Tuple


class RenormalizationError(Exception):
    """Base class for every error raised by SingularShift."""
    pass


class PoleArgument(RenormalizationError, ValueError):
    """Gamma function evaluated at a non-positive integer."""
    pass


class OutOfEnvelope(RenormalizationError, ValueError):
    """Special-function argument outside the supported range."""
    pass


class InvalidExponent(RenormalizationError, ValueError):
    """Power-law exponent outside the singular range."""
    pass


class NonPositiveRadius(RenormalizationError, ValueError):
    """Potential evaluated at r <= 0."""
    pass


class UnsupportedOrder(RenormalizationError):
    """Bessel order whose squared series has no integer exponent grid."""
    pass


class LogDivergence(RenormalizationError):
    """Integrand expansion carries an r^-1 term; no power counterterm absorbs it."""
    pass


class UnsupportedShape(RenormalizationError):
    """Potential shape not covered by a closed form."""
    pass


class UnsupportedDimension(RenormalizationError):
    """Numeric scheme requested away from n = 3."""
    pass


class ExtrapolationUnstable(RenormalizationError):
    """Cutoff grid too small for double precision or extrapolants diverging."""
    pass


class SeamMismatch(RenormalizationError):
    """Series and direct evaluations of the subtracted integrand disagree."""
    pass


class NoConvergence(RenormalizationError):
    """Quadrature budget exhausted before reaching the requested tolerance."""

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class DimensionalPole(RenormalizationError):
    """Gamma closed form sits on a pole at the requested dimension."""

    def __init__(self, message: str, term: Optional[Tuple[float, int]] = None):
        super().__init__(message)
        self.term = term


class PotentialSpecError(RenormalizationError, ValueError):
    """Malformed textual potential specification."""
    pass


class SweepConfigError(RenormalizationError, ValueError):
    """Malformed sweep configuration."""
    pass


class ConfigError(RenormalizationError, ValueError):
    """Malformed application settings file."""
    pass


class InvalidScatteringConfig(RenormalizationError, ValueError):
    """Wave number, partial wave or dimension out of range."""
    pass


class InvalidGrid(RenormalizationError, ValueError):
    """Cutoff grid too short, unsorted or non-positive."""
    pass


class InvalidSplitPoint(RenormalizationError, ValueError):
    """Analytic-continuation split point not strictly positive."""
    pass

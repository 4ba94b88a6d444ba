"""Exception and warning types raised by the force engine."""


class VdwFrictionError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(VdwFrictionError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class SingularityError(DomainError):
    """Zero (or underflowing) separation where a Green's dyadic diverges."""


class NormalizationError(DomainError):
    """A direction vector that must be a unit vector is not."""


class PoleError(DomainError):
    """A detuning (bare or Doppler shifted) vanishes and a 1/detuning pole is hit."""


class CausalityError(DomainError):
    """Observation time too short for the photon round trip, T(1 + v_R/c) <= 2R/c."""


class ConvergenceError(VdwFrictionError, RuntimeError):
    """A numerical procedure did not reach its tolerance.

    Attributes
    ----------
    value :
        Best estimate available when the procedure gave up.
    error_estimate : float
        Achieved error estimate for ``value``.
    """

    def __init__(self, message, value=None, error_estimate=float("nan")):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class ValidityError(VdwFrictionError, ValueError):
    """Physical inputs violate the quasiresonant / observation-time window."""


class ConfigError(VdwFrictionError, ValueError):
    """Malformed run configuration."""


class RegimeWarning(UserWarning):
    """An asymptotic formula is evaluated outside its near/far-field regime."""


class ValidityWarning(UserWarning):
    """Quasiresonant validity window violated while enforcement is ``warn``."""

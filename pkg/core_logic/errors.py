"""
Exception hierarchy for the Casimir engine.

Every failure the engine reports on purpose derives from `CasimirError`,
so callers (the CLI in particular) can tell numeric/physics failures apart
from configuration mistakes and from genuine bugs.
"""


class CasimirError(Exception):
    """Base class for every error raised on purpose by the engine."""


class InvalidParameterError(CasimirError, ValueError):
    """A geometry, material or settings value is outside its allowed range."""


class ConfigError(CasimirError):
    """A run configuration could not be parsed or is inconsistent."""


class GapZeroError(CasimirError):
    """The gap is zero (or below the continuum limit)."""

    def __init__(self, d: float):
        self.d = d
        super().__init__(
            f"gap d = {d!r} nm is too small: the pressure integral diverges "
            f"logarithmically as d -> 0 and the continuum model no longer applies"
        )


class DegenerateBracketError(CasimirError):
    """K^2 == K0^2 with eps != 1, which cannot happen on the imaginary axis."""


class DrudeAtZeroError(CasimirError):
    """An unbound free-carrier term was evaluated at k = 0 (pole)."""

    def __init__(self, message: str = ""):
        super().__init__(
            message
            or "free-carrier (Drude) susceptibility has a pole at k = 0; "
            "use the bound variant (k_s) or evaluate at k > 0"
        )


class ClausiusMossottiError(CasimirError):
    """1 - S/3 <= 0 in the Clausius-Mossotti permittivity."""


class BoundDrudeDenominatorError(CasimirError):
    """k_s^2 + k^2 - k_c*k <= 0 in the bound free-carrier susceptibility."""


class NonConvergentError(CasimirError):
    """Grid refinement changed a result by more than the allowed tolerance."""


class SmallAngleDenominatorError(CasimirError):
    """1 + eps0 - eps0^2 vanishes in the small-angle e-mode limit."""


class ZeroFrequencyUndefinedError(CasimirError):
    """The n = 0 Matsubara term needs eps(0) but the material has a pole there."""


class EpsAtMostOneError(CasimirError):
    """A static permittivity estimate was requested with eps0 <= 1."""

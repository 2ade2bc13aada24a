"""
Physical constants and unit conventions.

Wavenumbers are carried in 1/nm and lengths in nm through the whole engine.
Conversion to SI happens in one place: `unit_pressure_prefactor` (and the
thermal prefactors built from the same constants).
"""

import math
from dataclasses import dataclass

from scipy import constants as sc

from .errors import GapZeroError, InvalidParameterError


# ----- Unit conversion -----

NM_PER_M = 1.0e9
# an integral carried out in nm^-4 becomes m^-4 with this factor
INV_NM4_TO_INV_M4 = 1.0e36
INV_NM3_TO_INV_M3 = 1.0e27


def inverse_nm_to_inverse_m(k: float) -> float:
    return k * NM_PER_M


def inverse_m_to_inverse_nm(k: float) -> float:
    return k / NM_PER_M


# ----- Constants -----


@dataclass(frozen=True)
class PhysicalConstants:
    """
    The three constants the force computation needs, in SI units.

    Kept as a value object so a test harness can inject a corrupted set
    (for example hbar * 2) and watch the validation suite catch it.
    """
    hbar: float
    c: float
    k_B: float

    def __post_init__(self):
        if not (self.hbar > 0 and self.c > 0 and self.k_B > 0):
            raise InvalidParameterError(
                f"physical constants must be positive, got {self!r}"
            )

    @property
    def hbar_c(self) -> float:
        """hbar * c in J*m."""
        return self.hbar * self.c

    def thermal_wavenumber(self, T: float) -> float:
        """k_B T / (hbar c) in 1/nm."""
        return inverse_m_to_inverse_nm(self.k_B * T / self.hbar_c)


CODATA = PhysicalConstants(hbar=sc.hbar, c=sc.c, k_B=sc.k)


def unit_pressure_prefactor(d: float, constants: PhysicalConstants = CODATA) -> float:
    """
    hbar*c/(2*pi^2) scaled so that a double integral evaluated in 1/nm
    wavenumber units (nm^-4) turns into a pressure in N/m^2.

    The prefactor carries no d; the gap only enters through the integrand.
    `d` is accepted so callers can validate the geometry in one place.
    """
    if not d > 0:
        raise GapZeroError(d)
    return constants.hbar_c / (2.0 * math.pi ** 2) * INV_NM4_TO_INV_M4

"""
Closed-form reference pressures and regime estimates.

These are cheap oracles for the quadrature and quick numbers for the CLI;
none of them touches the full two-dimensional integral.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy import integrate

from .constants import CODATA, INV_NM4_TO_INV_M4, PhysicalConstants
from .errors import EpsAtMostOneError, GapZeroError, InvalidParameterError
from .permittivity import Material, eps_imag_axis


class Regime(str, Enum):
    IDEAL_CASIMIR = "ideal_casimir"
    THIN_PLASMA_FILM = "thin_plasma_film"
    LARGE_D = "large_d"
    SMALL_D = "small_d"


@dataclass(frozen=True)
class RegimeEstimate:
    pressure: float
    regime: Regime
    validity_note: str = ""


def _check_gap(d: float) -> None:
    if not d > 0:
        raise GapZeroError(d)


def casimir_ideal(d: float, constants: PhysicalConstants = CODATA) -> float:
    """-pi^2 hbar c / (240 d^4) in N/m^2, d in nm."""
    _check_gap(d)
    return -math.pi ** 2 * constants.hbar_c / (240.0 * d ** 4) * INV_NM4_TO_INV_M4


def thin_plasma_film(d: float, constants: PhysicalConstants = CODATA) -> float:
    """-pi^2 hbar c / (1920 d^4): one eighth of the perfect-conductor value."""
    return casimir_ideal(d, constants) / 8.0


def _film_momentum_integrand(y: float, a: float) -> float:
    if y <= a or y > 700.0:
        return 0.0
    return y * y * math.sqrt((y - a) * (y + a)) / math.expm1(y)


def dense_plasma_film(
    d: float, k_max: float, constants: PhysicalConstants = CODATA
) -> RegimeEstimate:
    """
    Gap between dense plasma plates whose modes start at k_max (1/nm):

        P = -(hbar c / 16 pi^2 d^4) int_1^inf dp / p^2
              int_{2 d k_max}^inf y^2 sqrt(y^2 - (2 d k_max)^2) / (e^y - 1) dy

    The p integral equals 1. k_max -> 0 gives the perfect-conductor value, and
    |P| falls monotonically as d k_max grows.
    """
    _check_gap(d)
    if not k_max >= 0:
        raise InvalidParameterError(f"k_max must be >= 0, got {k_max!r}")
    a = 2.0 * d * k_max
    p_part, _ = integrate.quad(lambda p: p ** -2, 1.0, np.inf)
    y_part, _ = integrate.quad(_film_momentum_integrand, a, np.inf, args=(a,), limit=200)
    pressure = -constants.hbar_c / (16.0 * math.pi ** 2 * d ** 4) * p_part * y_part * INV_NM4_TO_INV_M4
    note = f"2*d*k_max = {a:.3g}; the cutoff removes modes below k_max"
    return RegimeEstimate(pressure=pressure, regime=Regime.THIN_PLASMA_FILM, validity_note=note)


def large_d_dielectric(
    eps0: float,
    d: float,
    k_max: Optional[float] = None,
    constants: PhysicalConstants = CODATA,
) -> RegimeEstimate:
    """
    Static-permittivity estimate

        P = -(3 hbar c / 8 pi^2 d^4) ((1 - sqrt(eps0)) / (1 + sqrt(eps0)))^2

    It assumes every material transition lies above c/d, i.e. d k_max < 1
    when the largest transition wavenumber k_max is known.
    """
    _check_gap(d)
    if not eps0 > 1:
        raise EpsAtMostOneError(f"static permittivity must exceed 1, got {eps0!r}")
    root = math.sqrt(eps0)
    bracket = ((1.0 - root) / (1.0 + root)) ** 2
    pressure = -3.0 * constants.hbar_c / (8.0 * math.pi ** 2 * d ** 4) * bracket * INV_NM4_TO_INV_M4

    if k_max is None:
        note = "static-permittivity estimate; valid while d is below c over the lowest transition"
    elif d * k_max < 1.0:
        note = f"d*k_max = {d * k_max:.3g} < 1: inside the validity range"
    else:
        note = f"d*k_max = {d * k_max:.3g} >= 1: outside the validity range, expect a rough number"
    return RegimeEstimate(pressure=pressure, regime=Regime.LARGE_D, validity_note=note)


def _small_d_integrand(material: Material, d: float, k: float) -> float:
    eps = eps_imag_axis(material, k)
    delta2 = ((1.0 - eps) / (1.0 + eps)) ** 2
    a = 2.0 * k * d
    first = math.exp(-a) * (a * a + 2.0 * a + 2.0)
    second = math.exp(-2.0 * a) * (a * a / 2.0 + a / 2.0 + 0.25)
    return delta2 * (first + second * delta2)


def small_d_lifshitz(
    material: Material, d: float, constants: PhysicalConstants = CODATA
) -> RegimeEstimate:
    """
    Non-retarded half-space estimate, leading 1/d^3 behaviour:

        P = -(hbar c / 16 pi^2 d^3) int_0^inf dk D^2 [e^{-a}(a^2 + 2a + 2)
                                      + e^{-2a}(a^2/2 + a/2 + 1/4) D^2]

    with a = 2 k d and D = (1 - eps(k)) / (1 + eps(k)); the inner integral
    over the exponential has been done in closed form to second order in D^2.
    """
    _check_gap(d)
    if material.is_vacuum:
        return RegimeEstimate(pressure=0.0, regime=Regime.SMALL_D, validity_note="vacuum: no force")

    edges = sorted(set(material.spectral_edges) | {1.0 / d})
    upper = 10.0 * max(edges)
    points = [e for e in edges if e < upper]
    body, _ = integrate.quad(
        lambda k: _small_d_integrand(material, d, k), 0.0, upper, points=points, limit=200
    )
    tail, _ = integrate.quad(lambda k: _small_d_integrand(material, d, k), upper, np.inf, limit=200)
    pressure = -constants.hbar_c / (16.0 * math.pi ** 2 * d ** 3) * (body + tail) * INV_NM4_TO_INV_M4
    note = (
        "leading small-d term; corrections of order 1/d^4 and 1/d^5 are not included, "
        f"valid while d*k_r,max = {d * material.k_r_max:.3g} << 1"
    )
    return RegimeEstimate(pressure=pressure, regime=Regime.SMALL_D, validity_note=note)

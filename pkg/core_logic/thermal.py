"""
Finite-temperature pressure.

The frequency integral of the T = 0 pressure becomes a sum over the
Matsubara wavenumbers k_n = 2 pi n k_B T / (hbar c), with the n = 0 term
halved:

    P = -(k_B T / pi) * sum'_n F(k_n),   F(k) = int_k^inf K0^2 (g_e + g_h) dK0

F(k) is the T = 0 integrand after the kappa integration
(kappa dkappa = K0 dK0); it stays finite at k = 0.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .constants import CODATA, INV_NM3_TO_INV_M3, INV_NM4_TO_INV_M4, PhysicalConstants
from .dispersion import AxisPoint, characteristic
from .errors import (
    DrudeAtZeroError,
    GapZeroError,
    InvalidParameterError,
    ZeroFrequencyUndefinedError,
)
from .parallel import chunked, ordered_map
from .quadrature import MIN_GAP_NM, QuadratureSettings, composite_gauss, gauss_legendre
from .types import Configuration, PressureResult


logger = logging.getLogger(__name__)

# F(k) integrates K0 = k + x over x in [0, X_SPAN / d]
X_SPAN = 25.0
# n_max: smallest n with 2 k_n d > MATSUBARA_CUTOFF
MATSUBARA_CUTOFF = 40.0
MATSUBARA_CHUNK = 256
_F_GEOMETRIC_PANELS = 12
_F_ORDER = 16


class ZeroFrequency(str, Enum):
    """How the n = 0 Matsubara term treats the free-carrier pole."""
    STATIC = "static"
    DRUDE_BOUND = "drude_bound"
    OMIT = "omit"


@dataclass(frozen=True)
class MatsubaraGrid:
    T: float
    k_n: np.ndarray
    n_max: int

    @classmethod
    def build(
        cls,
        T: float,
        d: float,
        n_max: Optional[int] = None,
        constants: PhysicalConstants = CODATA,
    ) -> "MatsubaraGrid":
        if not T > 0:
            raise InvalidParameterError(f"temperature must be > 0 K, got {T!r}")
        step = 2.0 * math.pi * constants.thermal_wavenumber(T)
        if n_max is None:
            n_max = int(math.floor(MATSUBARA_CUTOFF / (2.0 * step * d))) + 1
        return cls(T=T, k_n=step * np.arange(n_max + 1), n_max=n_max)

    @property
    def step(self) -> float:
        return float(self.k_n[1]) if self.k_n.size > 1 else 0.0


def mean_oscillator_energy(omega: float, T: float, constants: PhysicalConstants = CODATA) -> float:
    """
    (hbar |omega| / 2) coth(hbar |omega| / (2 k_B T)) in J.

    T = 0 gives the zero-point energy; omega = 0 with T > 0 gives k_B T.
    """
    if T < 0:
        raise InvalidParameterError(f"temperature must be >= 0 K, got {T!r}")
    half = 0.5 * constants.hbar * abs(omega)
    if T == 0:
        return half
    kT = constants.k_B * T
    x = half / kT
    if x < 1.0e-4:
        return kT * (1.0 + x * x / 3.0)
    return half / math.tanh(x)


# ----- F(k) -----


def _f_edges(k: np.ndarray, d: float) -> np.ndarray:
    """Per-k panel edges in x = K0 - k: [0, s] then geometric up to X_SPAN / d."""
    upper = X_SPAN / d
    s = 0.5 * np.clip(k, 1.0e-4 / d, 1.0 / d)
    ratio = np.arange(_F_GEOMETRIC_PANELS + 1)[None, :] / _F_GEOMETRIC_PANELS
    geometric = s[:, None] * (upper / s[:, None]) ** ratio
    return np.concatenate([np.zeros((k.size, 1)), geometric], axis=1)


def frequency_integrand(config: Configuration, k: np.ndarray) -> np.ndarray:
    """F(k) = int_k^inf K0^2 (g_e + g_h) dK0 for every k (1/nm^3)."""
    k = np.asarray(k, dtype=float)
    edges = _f_edges(k, config.d)
    gx, gw = gauss_legendre(_F_ORDER)
    a = edges[:, :-1, None]
    half = 0.5 * (edges[:, 1:, None] - a)
    x = (a + half * (gx + 1.0)).reshape(k.size, -1)
    wx = (half * gw).reshape(k.size, -1)

    kk = k[:, None]
    K0 = kk + x
    kappa = np.sqrt(x * (x + 2.0 * kk))
    value = characteristic(config, AxisPoint(kappa=kappa, k=np.broadcast_to(kk, kappa.shape)))
    return np.sum(K0 * K0 * value.total * wx, axis=1)


def _zero_frequency_config(config: Configuration, convention: ZeroFrequency) -> Configuration:
    if convention is ZeroFrequency.DRUDE_BOUND:
        return config.map_materials(lambda m: m.with_bound_drude())
    for material in config.materials:
        if material.has_unbound_drude:
            raise ZeroFrequencyUndefinedError(
                f"material '{material.name}' has an unbound free-carrier term: eps(0) is a pole; "
                "choose zero_frequency = drude_bound or omit"
            )
    return config


def _zero_term(config: Configuration, convention: ZeroFrequency) -> float:
    zero_config = _zero_frequency_config(config, convention)
    try:
        return float(frequency_integrand(zero_config, np.zeros(1))[0])
    except DrudeAtZeroError as exc:
        raise ZeroFrequencyUndefinedError(str(exc)) from exc


def _check_gap(d: float) -> None:
    if d < MIN_GAP_NM:
        raise GapZeroError(d)


def _thermal_prefactor(T: float, constants: PhysicalConstants) -> float:
    """k_B T / pi, turning a sum of F(k_n) in 1/nm^3 into N/m^2."""
    return constants.k_B * T / math.pi * INV_NM3_TO_INV_M3


# ----- Pressures -----


def pressure_finite_T(
    config: Configuration,
    T: float,
    settings: Optional[QuadratureSettings] = None,
    zero_frequency: ZeroFrequency = ZeroFrequency.STATIC,
    constants: PhysicalConstants = CODATA,
    n_max: Optional[int] = None,
) -> PressureResult:
    """
    Matsubara-sum pressure at temperature T (K).

    Raises:
        ZeroFrequencyUndefinedError: the n = 0 term needs eps(0) of an unbound
            free-carrier term under the `static` convention.
    """
    settings = settings or QuadratureSettings()
    zero_frequency = ZeroFrequency(zero_frequency)
    _check_gap(config.d)
    grid = MatsubaraGrid.build(T, config.d, n_max=n_max, constants=constants)
    logger.debug("Matsubara sum at T=%g K: n_max=%d, step=%.6g 1/nm", T, grid.n_max, grid.step)

    zero = 0.0 if zero_frequency is ZeroFrequency.OMIT else _zero_term(config, zero_frequency)

    k_pos = grid.k_n[1:]
    parts = ordered_map(
        lambda rows: frequency_integrand(config, k_pos[rows]),
        chunked(k_pos.size, MATSUBARA_CHUNK),
        settings.workers,
    )
    terms = np.concatenate(parts) if parts else np.zeros(0)
    total = 0.5 * zero + float(np.sum(terms))

    prefactor = _thermal_prefactor(T, constants)
    # terms fall at least as fast as exp(-2 k d) per step past n_max
    last = float(terms[-1]) if terms.size else zero
    q = math.exp(-2.0 * grid.step * config.d) if grid.step > 0 else 0.0
    truncation = last * q / (1.0 - q) if q < 1.0 else 0.0
    pressure = -prefactor * total
    return PressureResult(
        pressure=pressure,
        est_error=prefactor * truncation + settings.rel_tol * abs(pressure),
        evaluations=int(grid.k_n.size * (_F_GEOMETRIC_PANELS + 1) * _F_ORDER),
        method=f"matsubara(n_max={grid.n_max}, zero_frequency={zero_frequency.value})",
    )


def pressure_high_T(
    config: Configuration,
    T: float,
    settings: Optional[QuadratureSettings] = None,
    zero_frequency: ZeroFrequency = ZeroFrequency.STATIC,
    constants: PhysicalConstants = CODATA,
) -> PressureResult:
    """
    Classical limit: only the n = 0 term, P = -(k_B T / 2 pi) F(0). Linear in T.

    The double integral over p and k with the k_B T prefactor has a 1/k
    weight near k = 0 and diverges logarithmically; this term is its
    finite classical content.
    """
    settings = settings or QuadratureSettings()
    zero_frequency = ZeroFrequency(zero_frequency)
    if zero_frequency is ZeroFrequency.OMIT:
        raise InvalidParameterError("the high-temperature limit is the n = 0 term; it cannot be omitted")
    if not T > 0:
        raise InvalidParameterError(f"temperature must be > 0 K, got {T!r}")
    _check_gap(config.d)
    zero = _zero_term(config, zero_frequency)
    pressure = -0.5 * _thermal_prefactor(T, constants) * zero
    return PressureResult(
        pressure=pressure,
        est_error=settings.rel_tol * abs(pressure),
        evaluations=(_F_GEOMETRIC_PANELS + 1) * _F_ORDER,
        method=f"high_T(zero_frequency={zero_frequency.value})",
    )


def pressure_low_T_correction(
    config: Configuration,
    T: float,
    settings: Optional[QuadratureSettings] = None,
    constants: PhysicalConstants = CODATA,
    n_panels: int = 8,
) -> float:
    """
    Additive thermal correction for k_B T << hbar c / d (N/m^2):

        dP = -(hbar c / pi^2) int_0^inf exp(-k / k_T) F(k) dk,  k_T = k_B T / (hbar c)

    from coth(x) ~ 1 + 2 exp(-2x).
    """
    settings = settings or QuadratureSettings()
    if T < 0:
        raise InvalidParameterError(f"temperature must be >= 0 K, got {T!r}")
    _check_gap(config.d)
    if T == 0:
        return 0.0
    k_T = constants.thermal_wavenumber(T)
    k, w = composite_gauss(np.linspace(0.0, 40.0 * k_T, n_panels + 1), _F_ORDER)
    values = frequency_integrand(config, k)
    integral = float(np.sum(np.exp(-k / k_T) * values * w))
    return -(constants.hbar_c / math.pi ** 2) * INV_NM4_TO_INV_M4 * integral

"""
Characteristic (dispersion) functions of the plate geometries, evaluated on
the imaginary-frequency axis and exposed only in inverse form.

Every function here returns g = 1/f for the e- (TM) and h- (TE) modes.
With a reflection factor r = 1/phi in [0, 1] and E = exp(-2 K_gap d):

    g = r E / (1 - r E)

The denominator is evaluated as -expm1(-x) + (1 - r) E, so exp(+2 K0 d) is
never formed and neither the large-d nor the r -> 1 end loses precision.

All functions are vectorized: kappa and k may be numpy arrays of any
broadcastable shape, and so may eps/eps_gap.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .errors import DegenerateBracketError, GapZeroError, InvalidParameterError
from .permittivity import eps_imag_axis
from .types import (
    Configuration,
    ConductiveSheets,
    FilledGap,
    FilmInVacuum,
    HalfSpaces,
    IdealCasimir,
    SlabSlab,
)


Real = Union[float, np.ndarray]


@dataclass(frozen=True)
class AxisPoint:
    """A point (kappa, k) on the imaginary axis, wavenumbers in 1/nm."""
    kappa: Real
    k: Real

    @classmethod
    def polar(cls, chi: Real, theta: Real) -> "AxisPoint":
        """kappa = chi cos(theta), k = chi sin(theta), so K0 = chi."""
        return cls(kappa=chi * np.cos(theta), k=chi * np.sin(theta))

    @property
    def K0(self) -> np.ndarray:
        return np.sqrt(self.kappa * self.kappa + self.k * self.k)

    def K(self, eps: Real) -> np.ndarray:
        """sqrt(kappa^2 + k^2 eps); eps >= 1 keeps the radicand non-negative."""
        return np.sqrt(self.kappa * self.kappa + self.k * self.k * eps)


@dataclass(frozen=True)
class InverseCharValue:
    """1/f_e and 1/f_h plus the reflection factors they were built from."""
    g_e: np.ndarray
    g_h: np.ndarray
    r_e: np.ndarray
    r_h: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.g_e + self.g_h


# ----- Shared pieces -----


def _check_gap(d: float) -> None:
    if not d > 0:
        raise GapZeroError(d)


def _ratio(num, den) -> np.ndarray:
    """num / den with 0 wherever den == 0 (only the axis origin gets there)."""
    num, den = np.broadcast_arrays(np.asarray(num, dtype=float), np.asarray(den, dtype=float))
    return np.divide(num, den, out=np.zeros(num.shape), where=den != 0)


def inverse_from_reflection(r, x) -> np.ndarray:
    """
    g = r e^{-x} / (1 - r e^{-x}) for 0 <= r <= 1 and x = 2 K_gap d >= 0.
    """
    r, x = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(x, dtype=float))
    e = np.exp(-x)
    num = r * e
    den = -np.expm1(-x) + (1.0 - r) * e
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.divide(num, den, out=np.zeros(num.shape), where=num > 0)
    # r = 1 at x = 0 is the (integrable) origin singularity of the ideal case
    return np.where((num > 0) & (den <= 0), np.inf, g)


def _value(r_e, r_h, x) -> InverseCharValue:
    r_e = np.asarray(r_e, dtype=float)
    r_h = np.asarray(r_h, dtype=float)
    return InverseCharValue(
        g_e=inverse_from_reflection(r_e, x),
        g_h=inverse_from_reflection(r_h, x),
        r_e=r_e,
        r_h=r_h,
    )


def _tanh_thickness(K, t: float) -> np.ndarray:
    """tanh(K t); t = inf gives 1 (half-spaces), the origin K = 0 gives 0."""
    with np.errstate(invalid="ignore"):
        return np.nan_to_num(np.tanh(K * t), nan=0.0)


def _k2_eps_minus_one(point: AxisPoint, eps: Real) -> np.ndarray:
    """K^2 - K0^2 = k^2 (eps - 1), free of cancellation."""
    return point.k * point.k * (np.asarray(eps, dtype=float) - 1.0)


def _e_mode_difference(point: AxisPoint, eps: Real) -> np.ndarray:
    """K^2 - eps^2 K0^2 = (1 - eps)(kappa^2 (1 + eps) + k^2 eps), free of cancellation."""
    eps = np.asarray(eps, dtype=float)
    return (1.0 - eps) * (point.kappa ** 2 * (1.0 + eps) + point.k ** 2 * eps)


# ----- Geometries -----


def inv_f_ideal(point: AxisPoint, d: float) -> InverseCharValue:
    """Perfect conductors: g_e = g_h = 1 / (exp(2 K0 d) - 1)."""
    _check_gap(d)
    K0 = point.K0
    ones = np.ones_like(K0)
    return _value(ones, ones, 2.0 * K0 * d)


def inv_f_halfspace(point: AxisPoint, d: float, eps: Real) -> InverseCharValue:
    """
    Two half-spaces of permittivity eps across a vacuum gap.

    r_h = ((K - K0)/(K + K0))^2, r_e = ((K - eps K0)/(K + eps K0))^2.
    """
    _check_gap(d)
    eps = np.asarray(eps, dtype=float)
    K0 = point.K0
    K = point.K(eps)
    r_h = _ratio(_k2_eps_minus_one(point, eps), (K + K0) ** 2) ** 2
    r_e = _ratio(_e_mode_difference(point, eps), (K + eps * K0) ** 2) ** 2
    return _value(r_e, r_h, 2.0 * K0 * d)


def inv_f_slabs(point: AxisPoint, d: float, t: float, eps: Real) -> InverseCharValue:
    """
    Two slabs of thickness t and permittivity eps in vacuum.

    The coth brackets are evaluated multiplied through by tanh(K t):

        phi_h = [(2 K0 K + (K^2 + K0^2) tanh) / ((K^2 - K0^2) tanh)]^2

    and the e-mode analogue with eps K0 in place of K0, which stays finite
    at t = 0 (no plates) and t = inf (half-spaces).
    """
    _check_gap(d)
    if not t >= 0:
        raise InvalidParameterError(f"slab thickness must be >= 0, got {t!r}")
    eps = np.asarray(eps, dtype=float)
    K0 = point.K0
    K = point.K(eps)
    tau = _tanh_thickness(K, t)

    diff_h = _k2_eps_minus_one(point, eps)
    diff_e = _e_mode_difference(point, eps)
    if np.any((diff_h == 0) & (eps != 1.0) & (point.k > 0)):
        raise DegenerateBracketError("K^2 == K0^2 with eps != 1")

    num_h = 2.0 * K0 * K + (K * K + K0 * K0) * tau
    num_e = 2.0 * eps * K0 * K + (K * K + (eps * K0) ** 2) * tau
    r_h = _ratio(diff_h * tau, num_h) ** 2
    r_e = _ratio(diff_e * tau, num_e) ** 2
    return _value(r_e, r_h, 2.0 * K0 * d)


def inv_f_thin_plate(
    point: AxisPoint,
    d: float,
    t: float,
    eps: Real,
    t2: Optional[float] = None,
    squared_e: bool = True,
) -> InverseCharValue:
    """
    Leading small-t behaviour of the slab functions (valid for K t << 1):

        g_h = t^2 (K^2 - K0^2)^2 / (4 K0^2) * exp(-2 K0 d)
        g_e = t^2 (K^2 - eps^2 K0^2)^2 / (4 eps^2 K0^2) * exp(-2 K0 d)

    With `t2` the product t * t2 replaces t^2. `squared_e=False` gives the
    variant without the square on the e-mode difference, kept for comparison.
    """
    _check_gap(d)
    eps = np.asarray(eps, dtype=float)
    tt = t * (t if t2 is None else t2)
    K0 = point.K0
    E = np.exp(-2.0 * K0 * d)
    diff_e = _e_mode_difference(point, eps)
    diff_h = _k2_eps_minus_one(point, eps)

    coeff_h = _ratio(tt * diff_h ** 2, 4.0 * K0 * K0)
    if squared_e:
        coeff_e = _ratio(tt * diff_e ** 2, 4.0 * eps ** 2 * K0 * K0)
    else:
        coeff_e = _ratio(tt * diff_e, 4.0 * eps ** 2 * K0 * K0)
    return InverseCharValue(g_e=coeff_e * E, g_h=coeff_h * E, r_e=coeff_e, r_h=coeff_h)


def inv_f_filled_gap(
    point: AxisPoint, d: float, t: float, eps: Real, eps_gap: Real
) -> InverseCharValue:
    """
    Slabs (eps, thickness t) across a gap filled with eps_gap, vacuum outside.

    The reflection seen from the gap is built from the wave impedances
    q = K (h-mode) or q = K/eps (e-mode) of gap, plate and outer vacuum:

        R = [q (q_gap - q0) + (q_gap q0 - q^2) tanh(K t)]
          / [q (q_gap + q0) + (q_gap q0 + q^2) tanh(K t)]

    and r = R^2 with the gap exponent 2 K_gap d. eps_gap = 1 gives
    inv_f_slabs exactly; t = 0 gives the free-standing film of eps_gap.
    """
    _check_gap(d)
    if not t >= 0:
        raise InvalidParameterError(f"plate thickness must be >= 0, got {t!r}")
    eps = np.asarray(eps, dtype=float)
    eps_gap = np.asarray(eps_gap, dtype=float)
    kappa2 = point.kappa * point.kappa
    k2 = point.k * point.k
    K0 = point.K0
    K = point.K(eps)
    Kg = point.K(eps_gap)
    tau = _tanh_thickness(K, t)

    # h-mode: q = K, q_gap = Kg, q0 = K0
    gap_minus_vac = _ratio(k2 * (eps_gap - 1.0), Kg + K0)  # Kg - K0
    a_h = K * gap_minus_vac
    b_h = K0 * gap_minus_vac - k2 * (eps - 1.0)  # Kg K0 - K^2
    c_h = K * (Kg + K0)
    d_h = Kg * K0 + K * K
    r_h = _ratio(a_h + b_h * tau, c_h + d_h * tau) ** 2

    # e-mode: q = K/eps, q_gap = Kg/eps_gap, q0 = K0; everything times eps^2 eps_gap
    m = _ratio(
        (1.0 - eps_gap) * (kappa2 * (1.0 + eps_gap) + k2 * eps_gap),
        Kg + eps_gap * K0,
    )  # Kg - eps_gap K0
    a_e = eps * K * m
    b_e = eps ** 2 * K0 * m + eps_gap * (eps - 1.0) * (kappa2 * (1.0 + eps) + k2 * eps)
    c_e = eps * K * (Kg + eps_gap * K0)
    d_e = eps ** 2 * Kg * K0 + eps_gap * K * K
    r_e = _ratio(a_e + b_e * tau, c_e + d_e * tau) ** 2

    return _value(r_e, r_h, 2.0 * Kg * d)


def impedance_rho(point: AxisPoint, eps: Real) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Normalized impedances (rho_e, rho_h, rho0_e, rho0_h):

        rho_e = K/(k eps), rho_h = k/K, rho0_e = K0/k, rho0_h = k/K0
    """
    k = np.asarray(point.k, dtype=float)
    if np.any(k <= 0):
        raise InvalidParameterError("impedances need k > 0")
    eps = np.asarray(eps, dtype=float)
    K = point.K(eps)
    K0 = point.K0
    return K / (k * eps), k / K, K0 / k, k / K0


def _impedance_differences(point: AxisPoint, eps: Real):
    """rho0 - rho for both modes, written without cancellation."""
    eps = np.asarray(eps, dtype=float)
    k = np.asarray(point.k, dtype=float)
    K = point.K(eps)
    K0 = point.K0
    delta_h = k * _k2_eps_minus_one(point, eps) / (K0 * K * (K + K0))
    delta_e = -_e_mode_difference(point, eps) / (k * eps * (eps * K0 + K))
    return delta_e, delta_h


def inv_f_bar_impedance(point: AxisPoint, d: float, eps: Real) -> Tuple[np.ndarray, np.ndarray]:
    """
    The un-normalized difference function

        1/f_bar = 2 rho0 (rho0 - rho) E / [(rho0 + rho)^2 - (rho0 - rho)^2 E]

    for both modes; it vanishes at large d.
    """
    _check_gap(d)
    rho_e, rho_h, rho0_e, rho0_h = impedance_rho(point, eps)
    delta_e, delta_h = _impedance_differences(point, eps)
    x = 2.0 * point.K0 * d
    e = np.exp(-x)

    def bar(rho0, rho, delta):
        s = rho0 + rho
        r = (delta / s) ** 2
        return 2.0 * rho0 * delta * e / (s * s * (-np.expm1(-x) + (1.0 - r) * e))

    return bar(rho0_e, rho_e, delta_e), bar(rho0_h, rho_h, delta_h)


def inv_f_impedance(point: AxisPoint, d: float, eps: Real) -> InverseCharValue:
    """
    Half-space functions through the impedance transformation.

    1/f_tilde = (rho0 - rho) / (2 rho0) * 1/f_bar, which is the normalization
    that makes f_tilde -> exp(2 K0 d) - 1 as rho -> 0 and reproduces
    inv_f_halfspace.
    """
    bar_e, bar_h = inv_f_bar_impedance(point, d, eps)
    rho_e, rho_h, rho0_e, rho0_h = impedance_rho(point, eps)
    delta_e, delta_h = _impedance_differences(point, eps)
    return InverseCharValue(
        g_e=bar_e * delta_e / (2.0 * rho0_e),
        g_h=bar_h * delta_h / (2.0 * rho0_h),
        r_e=(delta_e / (rho0_e + rho_e)) ** 2,
        r_h=(delta_h / (rho0_h + rho_h)) ** 2,
    )


def inv_f_sheet(point: AxisPoint, d: float, zeta: float) -> InverseCharValue:
    """
    Two sheets of normalized conductivity zeta:

        1/f = (zeta rho)^2 / [(2 + zeta rho)^2 exp(2 K0 d) - (zeta rho)^2]

    with the vacuum impedances, written as
    r_e = (zeta K0 / (2k + zeta K0))^2 and r_h = (zeta k / (2 K0 + zeta k))^2
    so that k = 0 is finite.
    """
    _check_gap(d)
    if not zeta >= 0:
        raise InvalidParameterError(f"zeta must be >= 0, got {zeta!r}")
    k = np.asarray(point.k, dtype=float)
    K0 = point.K0
    r_e = _ratio(zeta * K0, 2.0 * k + zeta * K0) ** 2
    r_h = _ratio(zeta * k, 2.0 * K0 + zeta * k) ** 2
    return _value(r_e, r_h, 2.0 * K0 * d)


# ----- Geometry dispatch -----


def characteristic(
    config: Configuration,
    point: AxisPoint,
    eps: Optional[Real] = None,
    eps_gap: Optional[Real] = None,
) -> InverseCharValue:
    """
    Inverse characteristic functions for `config` at `point`.

    eps / eps_gap default to the configured materials evaluated at point.k.
    """
    geometry = config.geometry
    d = config.d

    if isinstance(geometry, IdealCasimir):
        return inv_f_ideal(point, d)
    if isinstance(geometry, ConductiveSheets):
        return inv_f_sheet(point, d, geometry.zeta)

    if eps is None and not isinstance(geometry, FilmInVacuum):
        eps = eps_imag_axis(config.plate_material, point.k)

    if isinstance(geometry, HalfSpaces):
        return inv_f_halfspace(point, d, eps)
    if isinstance(geometry, SlabSlab):
        return inv_f_slabs(point, d, geometry.t, eps)

    if eps_gap is None:
        eps_gap = eps_imag_axis(config.gap_material, point.k)
    if isinstance(geometry, FilledGap):
        return inv_f_filled_gap(point, d, geometry.t, eps, eps_gap)
    if isinstance(geometry, FilmInVacuum):
        return inv_f_filled_gap(point, d, 0.0, 1.0, eps_gap)

    raise InvalidParameterError(f"unknown geometry {geometry!r}")

"""
Zero-temperature pressure between the plates.

    P = -(hbar c / 2 pi^2) * int_0^{pi/2} dtheta int_0^inf dchi chi^3 cos(theta) (g_e + g_h)

in polar coordinates kappa = chi cos(theta), k = chi sin(theta), K0 = chi.

High level:
- theta: a small-angle strip (0, theta0) with its own Gauss-Legendre panels,
  then geometric composite panels on (theta0, pi/2).
- chi: composite Gauss-Legendre panels split at the material's spectral
  edges, integrated up to chi_max; beyond it a closed-form exponential
  tail with the reflection factors frozen at chi_max.
- est_error from the tail and from a second pass on a half-size chi grid.

`pressure_p_k_form` integrates the same quantity in (p, k) variables,
K0 = p k, as an independent cross-check of the polar scheme.
"""

import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import roots_legendre

from .constants import CODATA, PhysicalConstants, unit_pressure_prefactor
from .dispersion import AxisPoint, characteristic
from .errors import (
    DrudeAtZeroError,
    GapZeroError,
    InvalidParameterError,
    NonConvergentError,
    SmallAngleDenominatorError,
)
from .parallel import DEFAULT_WORKERS, chunked, ordered_map
from .permittivity import eps_static
from .types import Configuration, HalfSpaces, PressureResult, SlabSlab


logger = logging.getLogger(__name__)

# below this gap the continuum model is not applicable
MIN_GAP_NM = 1.0e-3
THETA_CHUNK = 32
MAX_CHI_RAISES = 12


@dataclass(frozen=True)
class QuadratureSettings:
    n_theta: int = 600
    n_chi: int = 5000
    theta0: float = 1.0e-2
    rel_tol: float = 1.0e-6
    # None: the spectral edges of the configured materials plus 1/d
    chi_subdomain_edges: Optional[Tuple[float, ...]] = None
    # None: chi_max_rule
    chi_max: Optional[float] = None
    n_small_angle: int = 64
    theta_order: int = 20
    chi_order: int = 16
    refine: bool = True
    workers: int = DEFAULT_WORKERS

    def __post_init__(self):
        if self.n_theta < 8:
            raise InvalidParameterError(f"n_theta must be >= 8, got {self.n_theta}")
        if self.n_chi < 64:
            raise InvalidParameterError(f"n_chi must be >= 64, got {self.n_chi}")
        if not 0 < self.theta0 < math.pi / 2:
            raise InvalidParameterError(f"theta0 must lie in (0, pi/2), got {self.theta0}")
        if not self.rel_tol > 0:
            raise InvalidParameterError(f"rel_tol must be > 0, got {self.rel_tol}")
        if self.n_small_angle < 4:
            raise InvalidParameterError("n_small_angle must be >= 4")
        if self.chi_max is not None and not self.chi_max > 0:
            raise InvalidParameterError(f"chi_max must be > 0, got {self.chi_max}")

    def with_overrides(self, **kwargs) -> "QuadratureSettings":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


# ----- Gauss-Legendre panels -----


@lru_cache(maxsize=32)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_legendre(order)
    return np.asarray(nodes), np.asarray(weights)


def composite_gauss(edges: Sequence[float], order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of `order`-point Gauss-Legendre on every panel [edges[i], edges[i+1]]."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(order)
    a = edges[:-1, None]
    b = edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (a + half * (x[None, :] + 1.0)).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


def panel_edges(a: float, b: float, n_panels: int) -> np.ndarray:
    """Geometric panel edges on [a, b] for a > 0, uniform when a == 0."""
    if a > 0:
        return np.geomspace(a, b, n_panels + 1)
    return np.linspace(a, b, n_panels + 1)


def subdomain_panels(
    edges: Sequence[float], upper: float, n_nodes: int, order: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite nodes on [0, upper] split at `edges`.

    Panels are shared out by subdomain log-width (the subdomain touching 0
    counts as width 1), geometric inside each subdomain.
    """
    inner = sorted({e for e in edges if 0.0 < e < upper})
    bounds = [0.0] + inner + [upper]
    pairs = list(zip(bounds[:-1], bounds[1:]))
    widths = [1.0 if a == 0.0 else math.log(b / a) for a, b in pairs]
    total = sum(widths)
    n_panels = max(len(pairs), n_nodes // order)

    all_edges: List[np.ndarray] = []
    for (a, b), width in zip(pairs, widths):
        count = max(1, int(round(n_panels * width / total)))
        piece = panel_edges(a, b, count)
        all_edges.append(piece if not all_edges else piece[1:])
    return composite_gauss(np.concatenate(all_edges), order)


# ----- Tail -----


def tail_moment(chi0: float, d: float, power: int) -> float:
    """
    int_{chi0}^inf chi^n exp(-2 chi d) dchi in closed form:

        exp(-b chi0) * sum_j n!/j! chi0^j / b^(n-j+1),   b = 2d
    """
    if not d > 0:
        raise GapZeroError(d)
    b = 2.0 * d
    total = 0.0
    for j in range(power + 1):
        total += math.factorial(power) / math.factorial(j) * chi0 ** j / b ** (power - j + 1)
    return math.exp(-b * chi0) * total


def tail_closed_form(chi0: float, d: float, phi_e: float, phi_h: float) -> float:
    """
    int_{chi0}^inf chi^2 exp(-2 chi d) (1/phi_e + 1/phi_h) dchi

        = exp(-2 d chi0) (1/phi_e + 1/phi_h) (chi0^2/2d + chi0/2d^2 + 1/4d^3)
    """
    return (1.0 / phi_e + 1.0 / phi_h) * tail_moment(chi0, d, 2)


def ideal_tail_fraction(x: float) -> float:
    """Share of int_0^inf chi^3 exp(-2 chi d) beyond x = 2 chi0 d."""
    return math.exp(-x) * (1.0 + x + x * x / 2.0 + x ** 3 / 6.0)


def chi_max_rule(config: Configuration, rel_tol: float = 1.0e-6) -> float:
    """
    1 + 10 k_r,max + 1/d, raised until the perfect-conductor tail share
    drops below rel_tol.
    """
    d = config.d
    chi0 = 1.0 + 10.0 * config.k_r_max + 1.0 / d
    while ideal_tail_fraction(2.0 * chi0 * d) >= rel_tol:
        chi0 *= 1.25
    return chi0


def phi_limits_small_angle(eps0: float) -> Tuple[float, float]:
    """
    theta -> 0, large-chi bracket values:

        phi_h = [(2 sqrt(1 + e) + 2 + e) / e]^2
        phi_e = [(1 + 2 e sqrt(1 + e) + e + e^2) / (1 + e - e^2)]^2

    with e = eps(0).
    """
    if not eps0 > 1:
        raise InvalidParameterError(f"eps(0) must be > 1, got {eps0!r}")
    root = math.sqrt(1.0 + eps0)
    phi_h = ((2.0 * root + 2.0 + eps0) / eps0) ** 2
    denom = 1.0 + eps0 - eps0 * eps0
    if abs(denom) < 1.0e-6:
        raise SmallAngleDenominatorError(
            f"1 + eps0 - eps0^2 vanishes at eps0 = {eps0!r}"
        )
    phi_e = ((1.0 + 2.0 * eps0 * root + eps0 + eps0 * eps0) / denom) ** 2
    return phi_e, phi_h


def _strip_reflection(config: Configuration, chi_max: float) -> Optional[float]:
    """
    Frozen r_e + r_h for the small-angle strip tail, or None when the
    limiting values do not apply and the exact factors should be used.
    """
    geometry = config.geometry
    if isinstance(geometry, SlabSlab):
        if chi_max * geometry.t < 20.0:
            return None
    elif not isinstance(geometry, HalfSpaces):
        return None
    try:
        eps0 = eps_static(config.plate_material)
        phi_e, phi_h = phi_limits_small_angle(eps0)
    except (DrudeAtZeroError, InvalidParameterError):
        return None
    except SmallAngleDenominatorError:
        logger.debug("small-angle e-mode limit singular, using exact reflection factors")
        return None
    return 1.0 / phi_e + 1.0 / phi_h


# ----- Polar scheme -----


def _check_min_gap(d: float) -> None:
    if d < MIN_GAP_NM:
        raise GapZeroError(d)


def theta_nodes(settings: QuadratureSettings) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(theta, weight, in_strip) for the strip (0, theta0) and (theta0, pi/2)."""
    theta0 = settings.theta0
    strip_panels = 4
    strip_order = max(1, settings.n_small_angle // strip_panels)
    strip_edges = np.concatenate([[0.0], theta0 * np.logspace(-3.0, 0.0, strip_panels)])
    t_strip, w_strip = composite_gauss(strip_edges, strip_order)

    n_main = max(1, int(math.ceil(settings.n_theta / settings.theta_order)))
    t_main, w_main = composite_gauss(
        np.geomspace(theta0, math.pi / 2, n_main + 1), settings.theta_order
    )
    theta = np.concatenate([t_strip, t_main])
    weight = np.concatenate([w_strip, w_main])
    in_strip = np.concatenate([np.ones(t_strip.size, bool), np.zeros(t_main.size, bool)])
    return theta, weight, in_strip


def _chi_edges(config: Configuration, settings: QuadratureSettings) -> Tuple[float, ...]:
    if settings.chi_subdomain_edges is not None:
        return tuple(settings.chi_subdomain_edges)
    return config.spectral_edges + (1.0 / config.d,)


def _radial_sums(config: Configuration, theta: np.ndarray, chi: np.ndarray, w: np.ndarray) -> np.ndarray:
    point = AxisPoint.polar(chi[None, :], theta[:, None])
    value = characteristic(config, point)
    return (chi[None, :] ** 3 * value.total) @ w


@dataclass(frozen=True)
class _PolarPass:
    body: float
    body_coarse: float
    tail: float
    evaluations: int


def _polar_pass(config: Configuration, settings: QuadratureSettings, chi_max: float) -> _PolarPass:
    theta, w_theta, in_strip = theta_nodes(settings)
    edges = _chi_edges(config, settings)
    chi, w_chi = subdomain_panels(edges, chi_max, settings.n_chi, settings.chi_order)
    if settings.refine:
        chi_c, w_chi_c = subdomain_panels(edges, chi_max, settings.n_chi // 2, settings.chi_order)
    else:
        chi_c, w_chi_c = chi, w_chi

    def work(rows: slice) -> Tuple[np.ndarray, np.ndarray]:
        th = theta[rows]
        fine = _radial_sums(config, th, chi, w_chi)
        coarse = _radial_sums(config, th, chi_c, w_chi_c) if settings.refine else fine
        return fine, coarse

    parts = ordered_map(work, chunked(theta.size, THETA_CHUNK), settings.workers)
    fine = np.concatenate([p[0] for p in parts])
    coarse = np.concatenate([p[1] for p in parts])

    angular = w_theta * np.cos(theta)
    body = float(angular @ fine)
    body_coarse = float(angular @ coarse)

    # tail: reflection factors frozen at chi_max for every theta node
    edge_value = characteristic(config, AxisPoint.polar(chi_max, theta))
    r_sum = edge_value.r_e + edge_value.r_h
    strip_r = _strip_reflection(config, chi_max)
    if strip_r is not None:
        r_sum = np.where(in_strip, strip_r, r_sum)
    tail = float(angular @ r_sum) * tail_moment(chi_max, config.d, 3)

    n_eval = theta.size * (chi.size + (chi_c.size if settings.refine else 0) + 1)
    return _PolarPass(body=body, body_coarse=body_coarse, tail=tail, evaluations=n_eval)


def _finish(
    config: Configuration,
    settings: QuadratureSettings,
    constants: PhysicalConstants,
    body: float,
    body_coarse: float,
    tail: float,
    method: str,
    **extra,
) -> PressureResult:
    prefactor = unit_pressure_prefactor(config.d, constants)
    total = body + tail
    change = abs(body - body_coarse)
    if settings.refine and change > 100.0 * settings.rel_tol * abs(total):
        raise NonConvergentError(
            f"{method}: halving the radial grid changed the integral by "
            f"{change / abs(total):.3e} (relative), above {100.0 * settings.rel_tol:.1e}"
        )
    return PressureResult(
        pressure=-prefactor * total,
        est_error=prefactor * max(tail, change),
        tail_fraction=tail / total if total > 0 else 0.0,
        method=method,
        **extra,
    )


def pressure_zero_T(
    config: Configuration,
    settings: Optional[QuadratureSettings] = None,
    constants: PhysicalConstants = CODATA,
) -> PressureResult:
    """
    Pressure (N/m^2, negative = attraction) at T = 0 by the polar scheme.

    Raises:
        GapZeroError: d below the continuum limit.
        NonConvergentError: halving the radial grid moves the result by
            more than 100 * rel_tol.
    """
    settings = settings or QuadratureSettings()
    _check_min_gap(config.d)

    chi_max = settings.chi_max or chi_max_rule(config, settings.rel_tol)
    result = _polar_pass(config, settings, chi_max)
    evaluations = result.evaluations
    raises = 0
    while (
        settings.chi_max is None
        and result.body > 0
        and result.tail > settings.rel_tol * result.body
        and raises < MAX_CHI_RAISES
    ):
        chi_max *= 1.5
        raises += 1
        logger.debug("raising chi_max to %.6g (tail/body = %.3e)", chi_max, result.tail / result.body)
        result = _polar_pass(config, settings, chi_max)
        evaluations += result.evaluations

    theta, _, _ = theta_nodes(settings)
    return _finish(
        config,
        settings,
        constants,
        result.body,
        result.body_coarse,
        result.tail,
        method="polar",
        evaluations=evaluations,
        chi_max=chi_max,
        n_theta=int(theta.size),
        n_chi=settings.n_chi,
    )


# ----- (p, k) scheme -----

# inner variable x = 2 k d (p - 1); exp(-x) is negligible beyond X_MAX
X_MAX = 60.0
_X_GEOMETRIC_PANELS = 8
_X_UNIFORM_EDGES = np.arange(8.0, X_MAX + 1.0, 4.0)
_X_NODES_PER_PANEL_SET = 1 + _X_GEOMETRIC_PANELS + _X_UNIFORM_EDGES.size


def _x_edges(two_kd: np.ndarray) -> np.ndarray:
    """Per-k panel edges in x: [0, s], geometric up to 4, then width-4 panels to X_MAX."""
    s = np.clip(two_kd, 1.0e-9, 2.0)
    geometric = s[:, None] * (4.0 / s[:, None]) ** (
        np.arange(_X_GEOMETRIC_PANELS + 1)[None, :] / _X_GEOMETRIC_PANELS
    )
    uniform = np.broadcast_to(_X_UNIFORM_EDGES, (s.size, _X_UNIFORM_EDGES.size))
    return np.concatenate([np.zeros((s.size, 1)), geometric, uniform], axis=1)


def _p_integrals(config: Configuration, k: np.ndarray, order: int) -> np.ndarray:
    """int_1^inf p^2 k^3 (g_e + g_h) dp for each k, via p = 1 + x / (2 k d)."""
    d = config.d
    two_kd = 2.0 * k * d
    edges = _x_edges(two_kd)
    gx, gw = gauss_legendre(order)
    a = edges[:, :-1, None]
    half = 0.5 * (edges[:, 1:, None] - a)
    x = (a + half * (gx + 1.0)).reshape(k.size, -1)
    wx = (half * gw).reshape(k.size, -1)

    kk = k[:, None]
    p_minus_one = x / two_kd[:, None]
    p = 1.0 + p_minus_one
    kappa = kk * np.sqrt(p_minus_one * (p + 1.0))
    value = characteristic(config, AxisPoint(kappa=kappa, k=np.broadcast_to(kk, kappa.shape)))
    integrand = p * p * kk ** 3 * value.total / two_kd[:, None]
    return np.sum(integrand * wx, axis=1)


def pressure_p_k_form(
    config: Configuration,
    settings: Optional[QuadratureSettings] = None,
    constants: PhysicalConstants = CODATA,
) -> PressureResult:
    """
    P = -(hbar c / 2 pi^2) int_0^inf dk int_1^inf dp p^2 k^3 (g_e + g_h)

    Same contract as pressure_zero_T; exists to cross-check it.
    """
    settings = settings or QuadratureSettings()
    _check_min_gap(config.d)

    k_max = settings.chi_max or chi_max_rule(config, settings.rel_tol)
    edges = _chi_edges(config, settings)
    k, w = subdomain_panels(edges, k_max, settings.n_chi, settings.chi_order)
    if settings.refine:
        k_c, w_c = subdomain_panels(edges, k_max, settings.n_chi // 2, settings.chi_order)
    else:
        k_c, w_c = k, w

    def integrate(nodes: np.ndarray, weights: np.ndarray) -> float:
        parts = ordered_map(
            lambda rows: _p_integrals(config, nodes[rows], settings.chi_order),
            chunked(nodes.size, THETA_CHUNK),
            settings.workers,
        )
        return float(np.concatenate(parts) @ weights)

    body = integrate(k, w)
    body_coarse = integrate(k_c, w_c) if settings.refine else body

    # region k > k_max lies inside K0 > k_max; bound it by perfect mirrors
    tail_bound = 2.0 * tail_moment(k_max, config.d, 3) / -math.expm1(-2.0 * k_max * config.d)
    result = _finish(
        config,
        settings,
        constants,
        body,
        body_coarse,
        0.0,
        method="p_k",
        evaluations=int((k.size + (k_c.size if settings.refine else 0)) * _X_NODES_PER_PANEL_SET * settings.chi_order),
        chi_max=k_max,
        n_chi=settings.n_chi,
    )
    prefactor = unit_pressure_prefactor(config.d, constants)
    return replace(
        result,
        est_error=max(result.est_error, prefactor * tail_bound),
        tail_fraction=tail_bound / (body + tail_bound) if body > 0 else 0.0,
    )

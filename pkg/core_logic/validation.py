"""
Brute-force oracle and the cross-check suite.

`pressure_bruteforce` evaluates the pressure integral on a dense Cartesian
(kappa, k) grid with scipy's Simpson (or trapezoid) rule and Richardson
extrapolation. It shares only the dispersion functions with the main
quadrature: no polar substitution, no closed-form tail.

`run_suite` runs every cross-check concurrently and returns an ordered
report.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd
import regex
from scipy import integrate

from helpers.materials import DIAMOND, SIX_OSCILLATOR

from .asymptotics import casimir_ideal, large_d_dielectric
from .constants import CODATA, PhysicalConstants, unit_pressure_prefactor
from .dispersion import (
    AxisPoint,
    characteristic,
    inv_f_filled_gap,
    inv_f_halfspace,
    inv_f_ideal,
    inv_f_impedance,
    inv_f_slabs,
)
from .errors import CasimirError, GapZeroError, InvalidParameterError, NonConvergentError
from .parallel import DEFAULT_WORKERS, ordered_map
from .permittivity import Material, OscillatorTerm, eps_imag_axis
from .quadrature import (
    MIN_GAP_NM,
    QuadratureSettings,
    chi_max_rule,
    pressure_p_k_form,
    pressure_zero_T,
    tail_closed_form,
)
from .thermal import pressure_finite_T, pressure_high_T, pressure_low_T_correction
from .types import Configuration, HalfSpaces, IdealCasimir, PressureResult, SlabSlab


logger = logging.getLogger(__name__)


# ----- Brute-force oracle -----


@dataclass(frozen=True)
class OracleSettings:
    grid_kappa: int = 1024
    grid_k: int = 1024
    # None: twice the quadrature chi_max rule
    kappa_max: Optional[float] = None
    k_max: Optional[float] = None
    scheme: str = "simpson"
    max_refinement_change: float = 1.0e-2
    rows_per_block: int = 64

    def __post_init__(self):
        if self.grid_kappa < 256 or self.grid_k < 256:
            raise InvalidParameterError("oracle grids need at least 256 intervals per axis")
        if self.grid_kappa % 2 or self.grid_k % 2:
            raise InvalidParameterError("oracle grid counts must be even (Richardson uses every other node)")
        if self.scheme not in ("simpson", "trapezoid"):
            raise InvalidParameterError(f"unknown scheme {self.scheme!r}")


def _rule(scheme: str) -> Tuple[Callable, int]:
    if scheme == "simpson":
        return integrate.simpson, 4
    return integrate.trapezoid, 2


def _log_grid(scale: float, upper: float, n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """x = scale (e^u - 1) on a uniform u grid; returns (x, dx/du, u)."""
    u = np.linspace(0.0, math.log1p(upper / scale), n + 1)
    return scale * np.expm1(u), scale * np.exp(u), u


def _oracle_scale(config: Configuration) -> float:
    k_r = [term.k_r for m in config.materials for term in m.bound_terms]
    return min([0.5 / config.d] + k_r)


def pressure_bruteforce(
    config: Configuration,
    oracle: Optional[OracleSettings] = None,
    constants: PhysicalConstants = CODATA,
) -> PressureResult:
    """
    Slow, structurally independent evaluation of

        P = -(hbar c / 2 pi^2) int dk int dkappa kappa K0 (g_e + g_h)

    Raises:
        GapZeroError: d below the continuum limit.
        NonConvergentError: the half-grid result differs by more than
            `max_refinement_change`.
    """
    oracle = oracle or OracleSettings()
    if config.d < MIN_GAP_NM:
        raise GapZeroError(config.d)

    rule_max = chi_max_rule(config)
    kappa_max = oracle.kappa_max if oracle.kappa_max is not None else 2.0 * rule_max
    k_max = oracle.k_max if oracle.k_max is not None else 2.0 * rule_max
    if kappa_max < rule_max or k_max < rule_max:
        raise InvalidParameterError(
            f"oracle cutoffs ({kappa_max:.4g}, {k_max:.4g}) must reach chi_max = {rule_max:.4g}"
        )

    scale = _oracle_scale(config)
    kappa, jac_kappa, u_kappa = _log_grid(scale, kappa_max, oracle.grid_kappa)
    k, jac_k, u_k = _log_grid(scale, k_max, oracle.grid_k)
    if any(m.has_unbound_drude for m in config.materials):
        k = k.copy()
        k[0] = scale * 1.0e-9

    rule, order = _rule(oracle.scheme)
    fine_rows: List[np.ndarray] = []
    coarse_rows: List[np.ndarray] = []
    for start in range(0, k.size, oracle.rows_per_block):
        rows = slice(start, start + oracle.rows_per_block)
        point = AxisPoint(kappa=kappa[None, :], k=k[rows, None])
        value = characteristic(config, point)
        K0 = point.K0
        with np.errstate(invalid="ignore"):
            f = np.where(K0 > 0, kappa[None, :] * K0 * value.total, 0.0) * jac_kappa[None, :]
        fine_rows.append(rule(f, x=u_kappa, axis=1))
        coarse_rows.append(rule(f[:, ::2], x=u_kappa[::2], axis=1))

    inner_fine = np.concatenate(fine_rows) * jac_k
    inner_coarse = np.concatenate(coarse_rows) * jac_k
    fine = float(rule(inner_fine, x=u_k))
    coarse = float(rule(inner_coarse[::2], x=u_k[::2]))
    extrapolated = fine + (fine - coarse) / (2 ** order - 1)

    if abs(fine - coarse) > oracle.max_refinement_change * abs(fine):
        raise NonConvergentError(
            f"brute-force grid halving changed the result by {abs(fine - coarse) / abs(fine):.3e}"
        )

    prefactor = unit_pressure_prefactor(config.d, constants)
    return PressureResult(
        pressure=-prefactor * extrapolated,
        est_error=prefactor * abs(extrapolated - fine),
        evaluations=int(kappa.size * k.size),
        chi_max=k_max,
        method=f"bruteforce({oracle.scheme}, {oracle.grid_kappa}x{oracle.grid_k})",
    )


# ----- Report -----


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0


@dataclass(frozen=True)
class SuiteReport:
    results: Tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> Tuple[CheckResult, ...]:
        return tuple(r for r in self.results if not r.passed)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "check": r.name,
                    "passed": r.passed,
                    "measured": r.measured,
                    "tolerance": r.tolerance,
                    "seconds": r.seconds,
                    "detail": r.detail,
                }
                for r in self.results
            ],
            columns=["check", "passed", "measured", "tolerance", "seconds", "detail"],
        )

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(
                f"{status}  {r.name:<32} measured={r.measured:.3e} tol={r.tolerance:.1e}  {r.detail}"
            )
        lines.append(f"{len(self.results) - len(self.failures)}/{len(self.results)} checks passed")
        return "\n".join(lines)


# ----- Checks -----


def _relative(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def _compare(name: str, measured: float, reference: float, tol: float, label: str = "") -> CheckResult:
    rel = _relative(measured, reference)
    ratio = measured / reference if reference else math.nan
    detail = f"{label}ratio={ratio:.6f} ({measured:.6e} vs {reference:.6e})"
    return CheckResult(name=name, passed=rel < tol, measured=rel, tolerance=tol, detail=detail)


def _random_points(rng: np.random.Generator, n: int) -> Tuple[AxisPoint, np.ndarray]:
    kappa = 10.0 ** rng.uniform(-3, 1, n)
    k = 10.0 ** rng.uniform(-3, 1, n)
    eps = 1.0 + 10.0 ** rng.uniform(-2, 2, n)
    return AxisPoint(kappa=kappa, k=k), eps


GAP_SAMPLES = (0.3, 3.0, 30.0)
DUAL_SCHEME_GAPS = (1.0, 10.0, 100.0)
RANDOM_DRAWS = 1000
# tanh(K t) == 1 in double precision for every sampled K
THICK_PLATE = 1.0e5


def _max_rel(a: np.ndarray, b: np.ndarray) -> float:
    scale = np.maximum(np.abs(b), 1e-300)
    mask = np.abs(b) > 1e-280
    return float(np.max(np.abs(a - b)[mask] / scale[mask])) if np.any(mask) else 0.0


class _Suite:
    """The named checks; `constants` flows into the engine, references stay on CODATA."""

    def __init__(self, constants: PhysicalConstants, settings: QuadratureSettings):
        self.constants = constants
        self.settings = settings

    def _halfspace(self, d: float, material: Material = SIX_OSCILLATOR) -> Configuration:
        return Configuration(geometry=HalfSpaces(), d=d, plate_material=material)

    def casimir_ideal_polar(self) -> CheckResult:
        config = Configuration(geometry=IdealCasimir(), d=10.0)
        result = pressure_zero_T(config, self.settings, self.constants)
        return _compare("casimir_ideal_polar", result.pressure, casimir_ideal(10.0), 1e-4)

    def casimir_ideal_p_k(self) -> CheckResult:
        config = Configuration(geometry=IdealCasimir(), d=10.0)
        result = pressure_p_k_form(config, self.settings, self.constants)
        return _compare("casimir_ideal_p_k", result.pressure, casimir_ideal(10.0), 1e-4)

    def casimir_ideal_bruteforce(self) -> CheckResult:
        config = Configuration(geometry=IdealCasimir(), d=10.0)
        result = pressure_bruteforce(config, OracleSettings(), self.constants)
        return _compare("casimir_ideal_bruteforce", result.pressure, casimir_ideal(10.0), 1e-3)

    def three_decimal_places(self) -> CheckResult:
        config = self._halfspace(10.0)
        base = pressure_zero_T(config, self.settings, self.constants)
        refined = pressure_zero_T(
            config,
            self.settings.with_overrides(n_theta=2 * self.settings.n_theta, n_chi=2 * self.settings.n_chi),
            self.constants,
        )
        return _compare("three_decimal_places", base.pressure, refined.pressure, 1e-3)

    def dual_scheme_p_k(self) -> CheckResult:
        worst, detail = 0.0, []
        for d in DUAL_SCHEME_GAPS:
            config = self._halfspace(d)
            polar = pressure_zero_T(config, self.settings, self.constants).pressure
            pk = pressure_p_k_form(config, self.settings, self.constants).pressure
            rel = _relative(pk, polar)
            worst = max(worst, rel)
            detail.append(f"d={d:g}: {rel:.2e}")
        return CheckResult("dual_scheme_p_k", worst < 1e-4, worst, 1e-4, "; ".join(detail))

    def dual_scheme_bruteforce(self) -> CheckResult:
        worst, detail = 0.0, []
        for d in DUAL_SCHEME_GAPS:
            config = self._halfspace(d)
            polar = pressure_zero_T(config, self.settings, self.constants).pressure
            pk = pressure_p_k_form(config, self.settings, self.constants).pressure
            oracle = pressure_bruteforce(config, OracleSettings(), self.constants).pressure
            rel = max(_relative(polar, oracle), _relative(pk, oracle))
            worst = max(worst, rel)
            detail.append(f"d={d:g}: {rel:.2e}")
        return CheckResult("dual_scheme_bruteforce", worst < 1e-4, worst, 1e-4, "; ".join(detail))

    def tail_closed_form(self) -> CheckResult:
        rng = np.random.default_rng(15)
        worst = 0.0
        for _ in range(RANDOM_DRAWS):
            chi0 = 10.0 ** rng.uniform(-2, 0.5)
            d = 10.0 ** rng.uniform(-0.5, 1.0)
            phi_e, phi_h = 1.0 + 10.0 ** rng.uniform(-2, 2, 2)
            closed = tail_closed_form(chi0, d, phi_e, phi_h)
            numeric, _ = integrate.quad(
                lambda x: x * x * math.exp(-2.0 * x * d) * (1.0 / phi_e + 1.0 / phi_h),
                chi0,
                np.inf,
                epsabs=0.0,
                epsrel=1e-13,
                limit=200,
            )
            worst = max(worst, _relative(closed, numeric))
        return CheckResult("tail_closed_form", worst < 1e-10, worst, 1e-10, f"{RANDOM_DRAWS} random draws")

    def formulation_equivalence(self) -> CheckResult:
        rng = np.random.default_rng(8)
        point, eps = _random_points(rng, 1000)
        worst = 0.0
        for d in GAP_SAMPLES:
            half = inv_f_halfspace(point, d, eps)
            imp = inv_f_impedance(point, d, eps)
            thick = inv_f_slabs(point, d, THICK_PLATE, eps)
            slabs = inv_f_slabs(point, d, 0.7, eps)
            filled = inv_f_filled_gap(point, d, 0.7, eps, np.ones_like(eps))
            worst = max(
                worst,
                _max_rel(imp.g_e, half.g_e),
                _max_rel(imp.g_h, half.g_h),
                _max_rel(thick.g_e, half.g_e),
                _max_rel(thick.g_h, half.g_h),
                _max_rel(filled.g_e, slabs.g_e),
                _max_rel(filled.g_h, slabs.g_h),
            )
        return CheckResult("formulation_equivalence", worst < 1e-9, worst, 1e-9, "1000 axis points x 3 gaps")

    def bracket_bound(self) -> CheckResult:
        rng = np.random.default_rng(3)
        point, eps = _random_points(rng, 1000)
        excess, ok = 0.0, True
        for d in GAP_SAMPLES:
            bound = inv_f_ideal(point, d).g_e
            for t in (1e-3, 0.1, 10.0, THICK_PLATE):
                value = inv_f_slabs(point, d, t, eps)
                ratio = np.maximum(value.g_e, value.g_h) / bound
                excess = max(excess, float(np.max(ratio[bound > 0])))
                ok = ok and bool(np.all(value.g_e >= 0) and np.all(value.g_h >= 0))
        ok = ok and excess <= 1.0 + 1e-12
        return CheckResult("bracket_bound", ok, excess, 1.0, "max g / g_ideal over 1000 draws")

    def permittivity_bounds(self) -> CheckResult:
        rng = np.random.default_rng(5)
        k = np.linspace(0.0, 2.0, 400)
        ok = True
        for _ in range(RANDOM_DRAWS):
            terms = tuple(
                OscillatorTerm(k_p=rng.uniform(0, 0.2), k_r=rng.uniform(1e-3, 0.2), k_c=rng.uniform(0, 0.05))
                for _ in range(rng.integers(1, 7))
            )
            eps = eps_imag_axis(Material(bound_terms=terms), k)
            ok = ok and bool(np.all(eps >= 1.0) and np.all(np.diff(eps) <= 1e-15))
        return CheckResult("permittivity_bounds", ok, 0.0 if ok else 1.0, 0.0, f"{RANDOM_DRAWS} random materials")

    def sign_and_ideal_bound(self) -> CheckResult:
        settings = self.settings.with_overrides(n_theta=200, n_chi=1600, rel_tol=1e-4)
        worst = 0.0
        ok = True
        for config in (
            self._halfspace(10.0),
            Configuration(geometry=SlabSlab(t1=5.0), d=10.0, plate_material=SIX_OSCILLATOR),
            self._halfspace(10.0, DIAMOND),
        ):
            p = pressure_zero_T(config, settings, self.constants).pressure
            share = abs(p) / abs(casimir_ideal(config.d))
            ok = ok and p < 0 and share < 1.0
            worst = max(worst, share)
        return CheckResult("sign_and_ideal_bound", ok, worst, 1.0, "max |P| / |P_ideal|")

    def distance_monotonicity(self) -> CheckResult:
        settings = self.settings.with_overrides(n_theta=200, n_chi=1600, rel_tol=1e-4)
        values = [
            abs(pressure_zero_T(self._halfspace(2.0 ** i), settings, self.constants).pressure)
            for i in range(10)
        ]
        ok = all(b < a for a, b in zip(values, values[1:]))
        return CheckResult("distance_monotonicity", ok, float(ok), 1.0, "d = 1, 2, ..., 512 nm")

    def large_d_slope(self) -> CheckResult:
        p_near = pressure_zero_T(self._halfspace(500.0), self.settings, self.constants).pressure
        p_far = pressure_zero_T(self._halfspace(2000.0), self.settings, self.constants).pressure
        slope = math.log(abs(p_far) / abs(p_near)) / math.log(4.0)
        return CheckResult(
            "large_d_slope", abs(slope + 4.0) < 0.05, abs(slope + 4.0), 0.05, f"slope={slope:.4f}"
        )

    def thickness_saturation(self) -> CheckResult:
        slab = Configuration(geometry=SlabSlab(t1=20.0), d=10.0, plate_material=SIX_OSCILLATOR)
        p_slab = pressure_zero_T(slab, self.settings, self.constants).pressure
        p_half = pressure_zero_T(self._halfspace(10.0), self.settings, self.constants).pressure
        share = p_slab / p_half
        return CheckResult("thickness_saturation", share > 0.95, share, 0.95, "|P(t=20)| / |P(t=inf)| at d = 10 nm")

    def thin_plate_scaling(self) -> CheckResult:
        ratios = []
        for t in (0.0005, 0.001, 0.002):
            config = Configuration(geometry=SlabSlab(t1=t), d=10.0, plate_material=SIX_OSCILLATOR)
            ratios.append(abs(pressure_zero_T(config, self.settings, self.constants).pressure) / t ** 2)
        spread = (max(ratios) - min(ratios)) / min(ratios)
        return CheckResult("thin_plate_scaling", spread < 0.02, spread, 0.02, "|P| / t^2 at d = 10 nm")

    def thermal_zero_limit(self) -> CheckResult:
        config = self._halfspace(100.0)
        cold = pressure_finite_T(config, 1.0, self.settings, constants=self.constants).pressure
        zero = pressure_zero_T(config, self.settings, self.constants).pressure
        return _compare("thermal_zero_limit", cold, zero, 5e-3, "T=1 K: ")

    def thermal_high_T(self) -> CheckResult:
        config = self._halfspace(5000.0)
        full = pressure_finite_T(config, 1000.0, self.settings, constants=self.constants).pressure
        classical = pressure_high_T(config, 1000.0, self.settings, constants=self.constants).pressure
        return _compare("thermal_high_T", full, classical, 2e-2, "T=1000 K, d=5 um: ")

    def thermal_low_T_correction(self) -> CheckResult:
        config = self._halfspace(10.0)
        zero = pressure_zero_T(config, self.settings, self.constants).pressure
        corrected = zero + pressure_low_T_correction(config, 300.0, self.settings, self.constants)
        full = pressure_finite_T(config, 300.0, self.settings, constants=self.constants).pressure
        return _compare("thermal_low_T_correction", corrected, full, 2e-2, "T=300 K, d=10 nm: ")

    def large_d_estimate_bound(self) -> CheckResult:
        estimate = large_d_dielectric(5.6, 10.0, constants=self.constants).pressure
        share = abs(estimate) / abs(casimir_ideal(10.0))
        return CheckResult("large_d_estimate_bound", share < 1.0, share, 1.0, "|static estimate| / |P_ideal|, eps0 = 5.6")

    def named_checks(self) -> List[Tuple[str, Callable[[], CheckResult]]]:
        names = [
            "casimir_ideal_polar",
            "casimir_ideal_p_k",
            "casimir_ideal_bruteforce",
            "three_decimal_places",
            "dual_scheme_p_k",
            "dual_scheme_bruteforce",
            "tail_closed_form",
            "formulation_equivalence",
            "bracket_bound",
            "permittivity_bounds",
            "sign_and_ideal_bound",
            "distance_monotonicity",
            "large_d_slope",
            "thickness_saturation",
            "thin_plate_scaling",
            "thermal_zero_limit",
            "thermal_high_T",
            "thermal_low_T_correction",
            "large_d_estimate_bound",
        ]
        return [(name, getattr(self, name)) for name in names]


def check_names() -> List[str]:
    return [name for name, _ in _Suite(CODATA, QuadratureSettings()).named_checks()]


def _run_check(item: Tuple[str, Callable[[], CheckResult]]) -> CheckResult:
    name, check = item
    started = time.perf_counter()
    try:
        result = check()
    except CasimirError as exc:
        result = CheckResult(name, False, math.nan, math.nan, f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - started
    logger.info("%s %s (%.1fs)", "passed" if result.passed else "FAILED", name, elapsed)
    return CheckResult(
        name=result.name,
        passed=result.passed,
        measured=result.measured,
        tolerance=result.tolerance,
        detail=result.detail,
        seconds=elapsed,
    )


def run_suite(
    only: Optional[str] = None,
    constants: PhysicalConstants = CODATA,
    workers: Optional[int] = None,
    settings: Optional[QuadratureSettings] = None,
) -> SuiteReport:
    """
    Run the cross-check suite.

    Args:
        only: Regular expression; only checks whose name matches run.
        constants: Constants handed to the engine. References keep CODATA,
            so a corrupted set shows up as failed ratios.
        workers: Checks evaluated concurrently; each check runs its own
            integrals single-threaded.
        settings: Base quadrature settings for the checks.
    """
    workers = workers or DEFAULT_WORKERS
    base = (settings or QuadratureSettings()).with_overrides(workers=1)
    checks = _Suite(constants, base).named_checks()
    if only is not None:
        pattern = regex.compile(only)
        checks = [(name, fn) for name, fn in checks if pattern.search(name)]
    logger.info("running %d validation checks on %d workers", len(checks), workers)
    results = ordered_map(_run_check, checks, workers)
    return SuiteReport(results=tuple(results))

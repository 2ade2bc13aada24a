"""
Run pipeline: turns a validated RunConfig into pressures.

This wraps the integrators into two entry points the CLI calls:
- `compute_pressure` for a single point (T = 0 or finite T),
- `run_sweep` for a parameter sweep, evaluated in parallel and returned
  in sweep order, stopping at the first failing point.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from helpers.run_schema import RunConfig

from .constants import CODATA, PhysicalConstants
from .errors import CasimirError, ConfigError
from .parallel import DEFAULT_WORKERS, ordered_map
from .quadrature import QuadratureSettings, pressure_zero_T
from .thermal import pressure_finite_T, pressure_high_T, pressure_low_T_correction
from .types import PressureResult


logger = logging.getLogger(__name__)


@dataclass
class SweepOutcome:
    variable: str
    values: np.ndarray
    results: List[PressureResult]
    # set when the sweep stopped early; results then hold the completed prefix
    error: Optional[CasimirError] = None
    failed_value: Optional[float] = None

    @property
    def complete(self) -> bool:
        return self.error is None


@dataclass
class _PointOutcome:
    result: Optional[PressureResult] = None
    error: Optional[CasimirError] = field(default=None)


def compute_pressure(
    run: RunConfig,
    settings: Optional[QuadratureSettings] = None,
    constants: PhysicalConstants = CODATA,
) -> PressureResult:
    """
    Pressure for one run configuration.

    T = 0 (or no [thermal] T) uses the polar quadrature; T > 0 uses the
    method named in the [thermal] block.
    """
    settings = settings or run.to_settings()
    config = run.to_configuration()
    T = run.temperature
    if T == 0:
        return pressure_zero_T(config, settings, constants)

    method = run.thermal.method
    if method == "matsubara":
        return pressure_finite_T(config, T, settings, run.thermal.zero_frequency, constants)
    if method == "high_t":
        return pressure_high_T(config, T, settings, run.thermal.zero_frequency, constants)

    base = pressure_zero_T(config, settings, constants)
    correction = pressure_low_T_correction(config, T, settings, constants)
    return PressureResult(
        pressure=base.pressure + correction,
        est_error=base.est_error,
        tail_fraction=base.tail_fraction,
        evaluations=base.evaluations,
        chi_max=base.chi_max,
        n_theta=base.n_theta,
        n_chi=base.n_chi,
        method=f"{base.method} + low_T_correction(T={T:g} K)",
        notes=base.notes,
    )


def run_sweep(
    run: RunConfig,
    workers: int = DEFAULT_WORKERS,
    constants: PhysicalConstants = CODATA,
) -> SweepOutcome:
    """
    Evaluate every sweep point of `run`.

    Points run concurrently (each point single-threaded); results come back
    in sweep order, and on failure only the points before the first failing
    one are kept.
    """
    if run.sweep is None:
        raise ConfigError("the sweep command needs a [sweep] section")
    sweep = run.sweep
    values = sweep.values()
    settings = run.to_settings(workers=1)
    logger.info("sweeping %s over %d points on %d workers", sweep.variable, values.size, workers)

    def evaluate(value: float) -> _PointOutcome:
        try:
            point = run.with_variable(sweep.variable, float(value))
            result = compute_pressure(point, settings, constants)
        except CasimirError as exc:
            return _PointOutcome(error=exc)
        logger.info("%s = %g: P = %.6e N/m^2", sweep.variable, value, result.pressure)
        return _PointOutcome(result=result)

    outcomes = ordered_map(evaluate, list(values), workers)

    results: List[PressureResult] = []
    for value, outcome in zip(values, outcomes):
        if outcome.error is not None:
            logger.warning("sweep stopped at %s = %g: %s", sweep.variable, value, outcome.error)
            return SweepOutcome(
                variable=sweep.variable,
                values=values[: len(results)],
                results=results,
                error=outcome.error,
                failed_value=float(value),
            )
        results.append(outcome.result)
    return SweepOutcome(variable=sweep.variable, values=values, results=results)

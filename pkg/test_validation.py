import dataclasses

import pytest
from scipy import constants as sc

from core_logic.asymptotics import casimir_ideal
from core_logic.constants import CODATA, PhysicalConstants
from core_logic.errors import GapZeroError, InvalidParameterError
from core_logic.quadrature import QuadratureSettings, chi_max_rule, pressure_p_k_form, pressure_zero_T
from core_logic.types import Configuration, HalfSpaces, IdealCasimir
from core_logic.validation import (
    CheckResult,
    OracleSettings,
    SuiteReport,
    check_names,
    pressure_bruteforce,
    run_suite,
)
from helpers.materials import SIX_OSCILLATOR


def test_check_names():
    names = check_names()
    assert "three_decimal_places" in names
    assert "dual_scheme_p_k" in names
    assert len(names) == len(set(names))


@pytest.mark.parametrize(
    "kwargs",
    [{"grid_kappa": 255}, {"grid_k": 1025}, {"scheme": "romberg"}],
)
def test_oracle_settings_validation(kwargs):
    with pytest.raises(InvalidParameterError):
        OracleSettings(**kwargs)


def test_oracle_cutoff_must_reach_chi_max():
    config = Configuration(IdealCasimir(), 10.0)
    with pytest.raises(InvalidParameterError):
        pressure_bruteforce(config, OracleSettings(kappa_max=0.5 * chi_max_rule(config)))


def test_oracle_gap_limit():
    with pytest.raises(GapZeroError):
        pressure_bruteforce(Configuration(IdealCasimir(), 1e-4))


@pytest.mark.slow
def test_bruteforce_ideal():
    result = pressure_bruteforce(Configuration(IdealCasimir(), 10.0))
    assert result.pressure == pytest.approx(casimir_ideal(10.0), rel=1e-3)
    assert result.method.startswith("bruteforce")


@pytest.mark.slow
@pytest.mark.parametrize("d", [1.0, 10.0, 100.0])
def test_bruteforce_against_both_schemes(d):
    settings = QuadratureSettings(workers=1)
    config = Configuration(HalfSpaces(), d, SIX_OSCILLATOR)
    oracle = pressure_bruteforce(config).pressure
    assert pressure_zero_T(config, settings).pressure == pytest.approx(oracle, rel=1e-4)
    assert pressure_p_k_form(config, settings).pressure == pytest.approx(oracle, rel=1e-4)


def test_report_formatting():
    report = SuiteReport(
        results=(
            CheckResult("a", True, 1e-6, 1e-4, "fine"),
            CheckResult("b", False, 0.5, 1e-4, "off"),
        )
    )
    assert not report.passed
    assert [r.name for r in report.failures] == ["b"]
    frame = report.to_frame()
    assert list(frame["check"]) == ["a", "b"]
    assert list(frame.columns[:4]) == ["check", "passed", "measured", "tolerance"]
    text = report.to_text()
    assert "PASS" in text and "FAIL" in text
    assert text.endswith("1/2 checks passed")


def test_empty_filter_runs_nothing():
    report = run_suite(only="no_check_has_this_name", workers=1)
    assert report.results == ()
    assert report.passed


def test_cheap_checks_pass():
    report = run_suite(
        only=r"^(tail_closed_form|formulation_equivalence|bracket_bound|permittivity_bounds|large_d_estimate_bound)$",
        workers=2,
    )
    assert [r.name for r in report.results] == [
        "tail_closed_form",
        "formulation_equivalence",
        "bracket_bound",
        "permittivity_bounds",
        "large_d_estimate_bound",
    ]
    assert report.passed, report.to_text()
    details = {r.name: r.detail for r in report.results}
    assert details["tail_closed_form"].startswith("1000 ")
    assert details["permittivity_bounds"].startswith("1000 ")


def test_corrupted_hbar_is_caught(fast_settings):
    corrupted = dataclasses.replace(CODATA, hbar=2.0 * sc.hbar)
    assert isinstance(corrupted, PhysicalConstants)
    report = run_suite(only="^casimir_ideal_polar$", constants=corrupted, workers=1, settings=fast_settings)
    (result,) = report.results
    assert not result.passed
    assert "ratio=2.0" in result.detail

    clean = run_suite(only="^casimir_ideal_polar$", workers=1, settings=fast_settings)
    assert clean.passed


@pytest.mark.slow
def test_full_suite_passes():
    report = run_suite()
    assert report.passed, report.to_text()

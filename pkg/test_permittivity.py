import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core_logic.errors import (
    BoundDrudeDenominatorError,
    ClausiusMossottiError,
    DrudeAtZeroError,
    InvalidParameterError,
)
from core_logic.permittivity import (
    VACUUM,
    Material,
    OscillatorTerm,
    PermittivityModel,
    chi_drude_bound,
    eps_imag_axis,
    eps_static,
)
from helpers.materials import (
    DIAMOND,
    MATERIALS,
    SIX_OSCILLATOR,
    SIX_OSCILLATOR_DRUDE,
    get_material,
    single_oscillator,
)


def test_six_oscillator_static_value():
    expected = 1.0 + sum((0.05 / k_r) ** 2 for k_r in (0.01, 0.02, 0.03, 0.04, 0.05, 0.08))
    assert eps_static(SIX_OSCILLATOR) == pytest.approx(expected, rel=1e-14)
    assert eps_static(SIX_OSCILLATOR) == pytest.approx(37.98, abs=1e-2)


def test_vacuum_is_one_everywhere():
    k = np.linspace(0.0, 5.0, 11)
    np.testing.assert_array_equal(eps_imag_axis(VACUUM, k), np.ones_like(k))


def test_scalar_in_scalar_out():
    assert isinstance(eps_imag_axis(SIX_OSCILLATOR, 0.1), float)
    assert eps_imag_axis(SIX_OSCILLATOR, np.array([0.1, 0.2])).shape == (2,)


def test_tends_to_one_at_large_k():
    for material in MATERIALS.values():
        assert eps_imag_axis(material, 1.0e6) - 1.0 < 1e-6


def test_unbound_drude_pole_at_zero():
    with pytest.raises(DrudeAtZeroError):
        eps_imag_axis(SIX_OSCILLATOR_DRUDE, 0.0)
    assert eps_imag_axis(SIX_OSCILLATOR_DRUDE, 0.01) > eps_imag_axis(SIX_OSCILLATOR, 0.01)


def test_bound_drude_defaults_to_k_c():
    bound = SIX_OSCILLATOR_DRUDE.with_bound_drude()
    assert bound.k_s == pytest.approx(1.0e-6)
    extra = eps_static(bound) - eps_static(SIX_OSCILLATOR)
    assert extra == pytest.approx(0.05 ** 2 / 1.0e-12, rel=1e-12)


def test_bound_drude_denominator_guard():
    term = OscillatorTerm(k_p=0.1, k_c=1.0)
    with pytest.raises(BoundDrudeDenominatorError):
        chi_drude_bound(term, 0.01, 0.5)


def test_clausius_mossotti_agrees_with_small_density_at_low_density():
    terms = tuple(OscillatorTerm(k_p=0.001, k_r=k_r, k_c=1e-6) for k_r in (0.05, 0.08, 0.1))
    small = Material(bound_terms=terms)
    cm = Material(bound_terms=terms, model=PermittivityModel.CLAUSIUS_MOSSOTTI)
    k = np.linspace(0.0, 1.0, 50)
    assert np.max(np.abs(eps_imag_axis(cm, k) - eps_imag_axis(small, k))) < 1e-5


def test_clausius_mossotti_denominator():
    dense = Material(bound_terms=SIX_OSCILLATOR.bound_terms, model="clausius_mossotti")
    with pytest.raises(ClausiusMossottiError):
        eps_imag_axis(dense, 0.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"bound_terms": (OscillatorTerm(k_p=0.1, k_r=0.0),)},
        {"drude": OscillatorTerm(k_p=0.1, k_r=0.2)},
        {"k_s": 0.1},
    ],
)
def test_material_validation(kwargs):
    with pytest.raises(InvalidParameterError):
        Material(**kwargs)


def test_negative_wavenumber_rejected():
    with pytest.raises(InvalidParameterError):
        eps_imag_axis(SIX_OSCILLATOR, -0.1)


def test_single_oscillator_and_registry():
    material = single_oscillator(5.6, k_r=0.1)
    assert eps_static(material) == pytest.approx(5.6, rel=1e-12)
    assert eps_static(DIAMOND) == pytest.approx(5.6, rel=1e-12)
    assert single_oscillator(1.0, k_r=0.1) is VACUUM
    assert get_material(" Six_Oscillator ") is SIX_OSCILLATOR
    with pytest.raises(InvalidParameterError, match="known"):
        get_material("unobtainium")


terms_strategy = st.lists(
    st.builds(
        OscillatorTerm,
        k_p=st.floats(0.0, 0.3),
        k_r=st.floats(1e-3, 0.5),
        k_c=st.floats(0.0, 0.05),
    ),
    min_size=1,
    max_size=6,
)


@settings(max_examples=1000, deadline=None)
@given(terms=terms_strategy)
def test_eps_at_least_one_and_decreasing(terms):
    eps = eps_imag_axis(Material(bound_terms=tuple(terms)), np.linspace(0.0, 3.0, 300))
    assert np.all(eps >= 1.0)
    assert np.all(np.diff(eps) <= 1e-12)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core_logic.dispersion import (
    AxisPoint,
    characteristic,
    inv_f_bar_impedance,
    inv_f_filled_gap,
    inv_f_halfspace,
    inv_f_ideal,
    inv_f_impedance,
    inv_f_sheet,
    inv_f_slabs,
    inv_f_thin_plate,
    inverse_from_reflection,
)
from core_logic.errors import GapZeroError, InvalidParameterError
from core_logic.permittivity import VACUUM, eps_imag_axis
from core_logic.types import (
    ConductiveSheets,
    Configuration,
    FilledGap,
    FilmInVacuum,
    HalfSpaces,
    IdealCasimir,
    SlabSlab,
)
from helpers.materials import DIAMOND, SIX_OSCILLATOR


@pytest.fixture
def grid():
    kappa, k = np.meshgrid(np.geomspace(1e-3, 5.0, 40), np.geomspace(1e-3, 5.0, 40))
    return AxisPoint(kappa=kappa, k=k)


def test_polar_point_has_K0_equal_chi():
    point = AxisPoint.polar(2.0, np.array([0.0, 0.3, np.pi / 2]))
    np.testing.assert_allclose(point.K0, 2.0, rtol=1e-15)


def test_ideal_inverse(grid):
    value = inv_f_ideal(grid, 10.0)
    expected = 1.0 / np.expm1(2.0 * grid.K0 * 10.0)
    np.testing.assert_allclose(value.g_e, expected, rtol=1e-13)
    np.testing.assert_array_equal(value.g_e, value.g_h)


def test_no_overflow_at_large_distance():
    g = inverse_from_reflection(np.array([1.0, 0.5]), np.array([2000.0, 5000.0]))
    assert np.all(np.isfinite(g))
    assert np.all(g == 0.0)


def test_vacuum_plates_give_nothing(grid):
    assert np.all(inv_f_halfspace(grid, 10.0, 1.0).total == 0.0)
    assert np.all(inv_f_slabs(grid, 10.0, 5.0, 1.0).total == 0.0)


def test_zero_thickness_slab_is_empty(grid):
    assert np.all(inv_f_slabs(grid, 10.0, 0.0, 5.0).total == 0.0)


def test_thick_slab_is_half_space(grid):
    eps = eps_imag_axis(SIX_OSCILLATOR, grid.k)
    thick = inv_f_slabs(grid, 10.0, np.inf, eps)
    half = inv_f_halfspace(grid, 10.0, eps)
    np.testing.assert_allclose(thick.g_e, half.g_e, rtol=1e-12)
    np.testing.assert_allclose(thick.g_h, half.g_h, rtol=1e-12)


def test_filled_gap_with_vacuum_filler_is_slabs(grid):
    eps = eps_imag_axis(SIX_OSCILLATOR, grid.k)
    filled = inv_f_filled_gap(grid, 10.0, 3.0, eps, 1.0)
    slabs = inv_f_slabs(grid, 10.0, 3.0, eps)
    np.testing.assert_allclose(filled.g_e, slabs.g_e, rtol=1e-10)
    np.testing.assert_allclose(filled.g_h, slabs.g_h, rtol=1e-10)


def test_filled_gap_without_plates_is_a_film(grid):
    eps_gap = eps_imag_axis(DIAMOND, grid.k)
    film = inv_f_filled_gap(grid, 10.0, 0.0, 1.0, eps_gap)
    Kg, K0 = grid.K(eps_gap), grid.K0
    np.testing.assert_allclose(film.r_h, ((Kg - K0) / (Kg + K0)) ** 2, rtol=1e-6, atol=1e-300)
    np.testing.assert_allclose(
        film.r_e, ((Kg - eps_gap * K0) / (Kg + eps_gap * K0)) ** 2, rtol=1e-6, atol=1e-300
    )


def test_impedance_form_matches_half_space(grid):
    eps = eps_imag_axis(DIAMOND, grid.k)
    imp = inv_f_impedance(grid, 5.0, eps)
    half = inv_f_halfspace(grid, 5.0, eps)
    np.testing.assert_allclose(imp.g_e, half.g_e, rtol=1e-10)
    np.testing.assert_allclose(imp.g_h, half.g_h, rtol=1e-10)


def test_bar_impedance_vanishes_at_large_distance():
    point = AxisPoint(kappa=np.array([0.2]), k=np.array([0.1]))
    near_e, _ = inv_f_bar_impedance(point, 1.0, 5.0)
    far_e, far_h = inv_f_bar_impedance(point, 1000.0, 5.0)
    assert abs(far_e[0]) < 1e-60 * abs(near_e[0])
    assert abs(far_h[0]) < 1e-60


def test_impedance_needs_positive_k():
    with pytest.raises(InvalidParameterError):
        inv_f_impedance(AxisPoint(kappa=np.array([0.1]), k=np.array([0.0])), 1.0, 2.0)


def test_thin_plate_leading_order():
    point = AxisPoint(kappa=np.array([0.1]), k=np.array([0.05]))
    exact = inv_f_slabs(point, 10.0, 1e-4, 5.0)
    thin = inv_f_thin_plate(point, 10.0, 1e-4, 5.0)
    np.testing.assert_allclose(thin.g_e, exact.g_e, rtol=1e-3)
    np.testing.assert_allclose(thin.g_h, exact.g_h, rtol=1e-3)
    product = inv_f_thin_plate(point, 10.0, 1e-4, 5.0, t2=4e-4)
    np.testing.assert_allclose(product.g_h, 4.0 * thin.g_h, rtol=1e-12)


def test_sheets():
    point = AxisPoint(kappa=np.array([0.3, 0.3]), k=np.array([0.0, 0.2]))
    value = inv_f_sheet(point, 10.0, 2.0)
    assert value.r_h[0] == 0.0
    assert value.r_e[0] == pytest.approx(1.0)
    perfect = inv_f_sheet(point, 10.0, 1e12)
    np.testing.assert_allclose(perfect.g_e, inv_f_ideal(point, 10.0).g_e, rtol=1e-6)
    np.testing.assert_allclose(perfect.g_h[1:], inv_f_ideal(point, 10.0).g_h[1:], rtol=1e-6)


def test_gap_zero():
    point = AxisPoint(kappa=np.array([0.1]), k=np.array([0.1]))
    with pytest.raises(GapZeroError, match="logarithmically"):
        inv_f_halfspace(point, 0.0, 2.0)


def test_dispatch_covers_every_geometry(grid):
    configs = [
        Configuration(IdealCasimir(), 10.0),
        Configuration(SlabSlab(t1=5.0), 10.0, SIX_OSCILLATOR),
        Configuration(HalfSpaces(), 10.0, SIX_OSCILLATOR),
        Configuration(FilledGap(t=5.0, gap_material=DIAMOND), 10.0, SIX_OSCILLATOR),
        Configuration(FilmInVacuum(film_material=DIAMOND), 10.0),
        Configuration(ConductiveSheets(zeta=1.0), 10.0),
    ]
    for config in configs:
        value = characteristic(config, grid)
        assert value.total.shape == grid.K0.shape
        assert np.all(np.isfinite(value.total))
        assert np.all(value.total >= 0.0)


def test_film_of_vacuum_is_empty(grid):
    value = characteristic(Configuration(FilmInVacuum(film_material=VACUUM), 10.0), grid)
    assert np.all(value.total == 0.0)


def test_sheet_lies_between_vacuum_and_perfect_mirrors(grid):
    # every grid point has k > 0, so both modes are strictly inside
    sheet = inv_f_sheet(grid, 1.0, 2.0)
    ideal = inv_f_ideal(grid, 1.0)
    for g, bound in ((sheet.g_e, ideal.g_e), (sheet.g_h, ideal.g_h)):
        assert np.all(g > 0.0)
        assert np.all(g < bound)


def test_thin_plate_quadruples_when_thickness_doubles(grid):
    eps = eps_imag_axis(SIX_OSCILLATOR, grid.k)
    thin = inv_f_thin_plate(grid, 10.0, 1e-3, eps)
    double = inv_f_thin_plate(grid, 10.0, 2e-3, eps)
    np.testing.assert_allclose(double.g_e, 4.0 * thin.g_e, rtol=1e-12, atol=1e-300)
    np.testing.assert_allclose(double.g_h, 4.0 * thin.g_h, rtol=1e-12, atol=1e-300)


def test_filled_gap_with_thick_plates(grid):
    eps = eps_imag_axis(SIX_OSCILLATOR, grid.k)
    eps_gap = eps_imag_axis(DIAMOND, grid.k)
    thick = inv_f_filled_gap(grid, 10.0, np.inf, eps, eps_gap)
    K, Kg = grid.K(eps), grid.K(eps_gap)
    r_h = ((Kg - K) / (Kg + K)) ** 2
    r_e = ((eps * Kg - eps_gap * K) / (eps * Kg + eps_gap * K)) ** 2
    np.testing.assert_allclose(thick.r_h, r_h, rtol=1e-6, atol=1e-14)
    np.testing.assert_allclose(thick.r_e, r_e, rtol=1e-6, atol=1e-14)
    np.testing.assert_allclose(thick.g_e, inverse_from_reflection(r_e, 2.0 * Kg * 10.0), rtol=1e-6, atol=1e-14)
    assert np.all((thick.r_e >= 0.0) & (thick.r_e <= 1.0))
    assert np.all((thick.r_h >= 0.0) & (thick.r_h <= 1.0))

    finite = inv_f_filled_gap(grid, 10.0, 1e5, eps, eps_gap)
    np.testing.assert_allclose(finite.total, thick.total, rtol=1e-9, atol=1e-300)


def test_filled_gap_non_retarded_limit():
    point = AxisPoint(kappa=np.array([50.0]), k=np.array([1e-3]))
    eps, eps_gap = 37.98, 5.6
    value = inv_f_filled_gap(point, 10.0, np.inf, eps, eps_gap)
    assert value.r_e[0] == pytest.approx(((eps - eps_gap) / (eps + eps_gap)) ** 2, rel=1e-6)
    assert value.r_h[0] < 1e-10


positive = st.floats(1e-3, 10.0)


@settings(max_examples=1000, deadline=None)
@given(
    kappa=positive,
    k=positive,
    eps=st.floats(1.0, 200.0),
    d=st.floats(0.1, 100.0),
    t=st.floats(1e-3, 1e3),
)
def test_never_above_perfect_mirrors(kappa, k, eps, d, t):
    point = AxisPoint(kappa=np.array([kappa]), k=np.array([k]))
    bound = inv_f_ideal(point, d).g_e[0]
    for value in (inv_f_slabs(point, d, t, eps), inv_f_halfspace(point, d, eps)):
        assert 0.0 <= value.g_e[0] <= bound * (1 + 1e-12)
        assert 0.0 <= value.g_h[0] <= bound * (1 + 1e-12)
        assert 0.0 <= value.r_e[0] <= 1.0
        assert 0.0 <= value.r_h[0] <= 1.0


@settings(max_examples=1000, deadline=None)
@given(kappa=positive, k=positive, eps=st.floats(1.0, 200.0), d=st.floats(0.1, 30.0))
def test_consistency_chain(kappa, k, eps, d):
    point = AxisPoint(kappa=np.array([kappa]), k=np.array([k]))
    half = inv_f_halfspace(point, d, eps)
    imp = inv_f_impedance(point, d, eps)
    thick = inv_f_slabs(point, d, np.inf, eps)
    np.testing.assert_allclose(imp.total, half.total, rtol=1e-9, atol=1e-300)
    np.testing.assert_allclose(thick.total, half.total, rtol=1e-12, atol=1e-300)

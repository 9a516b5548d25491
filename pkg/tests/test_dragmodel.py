import math

import numpy as np
import pytest

from microswim.dragmodel import (
    DragParams,
    FluidParams,
    LinkGeometry,
    SlendernessError,
    drag_coefficients,
    link_drag_matrix,
    reynolds_number,
)


def test_c_par_at_default_operating_point():
    coeffs = drag_coefficients(FluidParams(0.95), LinkGeometry(0.1, 0.01))
    expected = 2.0 * math.pi * 0.95 / math.log(20.0)
    assert coeffs.c_par == pytest.approx(expected, rel=1e-15)
    assert coeffs.c_par == pytest.approx(1.9925, abs=2e-4)


def test_anisotropy_ratio_is_exactly_two():
    for mu, length, radius in ((0.95, 0.1, 0.01), (1.3, 0.5, 0.02), (0.01, 0.02, 1e-3)):
        coeffs = drag_coefficients(FluidParams(mu), LinkGeometry(length, radius))
        assert coeffs.c_perp == 2.0 * coeffs.c_par


def test_linearity_in_viscosity():
    geom = LinkGeometry(0.1, 0.01)
    base = drag_coefficients(FluidParams(0.95), geom)
    doubled = drag_coefficients(FluidParams(1.9), geom)
    assert doubled.c_par == pytest.approx(2 * base.c_par, rel=1e-14)
    assert doubled.c_perp == pytest.approx(2 * base.c_perp, rel=1e-14)
    assert doubled.k_r == pytest.approx(2 * base.k_r, rel=1e-14)


def test_spin_coefficient_default_and_override():
    geom = LinkGeometry(0.1, 0.01)
    coeffs = drag_coefficients(FluidParams(0.95), geom)
    assert coeffs.k_r == pytest.approx(4 * math.pi * 0.95 * 0.01**2, rel=1e-15)
    override = drag_coefficients(FluidParams(0.95), geom, spin_coefficient=0.5)
    assert override.k_r == 0.5


def test_rejects_non_slender_geometry():
    # ln(2L/a) <= 1 means Cox theory does not apply
    with pytest.raises(SlendernessError):
        drag_coefficients(FluidParams(1.0), LinkGeometry(0.1, 0.08))


def test_geometry_validation():
    with pytest.raises(ValueError):
        LinkGeometry(0.1, 0.0)
    with pytest.raises(ValueError):
        LinkGeometry(0.1, 0.2)
    with pytest.raises(ValueError):
        LinkGeometry(-0.1, 0.01)
    assert LinkGeometry.from_slenderness(0.1, 0.1).radius == pytest.approx(0.01)
    assert LinkGeometry(0.1, 0.01).slenderness_ratio == pytest.approx(0.1)


def test_h_matrix_structure(drag):
    h = link_drag_matrix(drag)
    assert np.count_nonzero(h - np.diag(np.diag(h))) == 0
    diag = np.diag(h)
    assert np.all(diag > 0)
    assert diag[1] == pytest.approx(diag[2])
    assert diag[1] == pytest.approx(2.0 * diag[0])
    assert diag[4] == pytest.approx(diag[5])
    # tabulated moment entries: (2/3) c_par L^3 times the force scale
    coeffs = drag.coefficients
    length = drag.geometry.half_length
    assert diag[4] == pytest.approx(
        (2.0 / 3.0) * coeffs.c_par * length**3 * drag.force_scale, rel=1e-14
    )
    assert diag[3] == pytest.approx(
        coeffs.k_r * length * drag.force_scale, rel=1e-14
    )


def test_h_matrix_scales_linearly_with_viscosity(drag):
    doubled = DragParams(FluidParams(1.9), drag.geometry)
    assert np.allclose(link_drag_matrix(doubled), 2.0 * link_drag_matrix(drag))


def test_h_matches_segment_integral(drag):
    # total lateral force on a rod translating sideways at u, by segment sum
    n = 10_000
    length = drag.geometry.half_length
    c_long, c_lat, _ = drag.per_length()
    h_seg = 2.0 * length / n
    u = 0.37
    total_lat = n * h_seg * c_lat * u
    total_long = n * h_seg * c_long * u
    h = link_drag_matrix(drag)
    assert h[1, 1] * u == pytest.approx(total_lat, rel=1e-3)
    assert h[0, 0] * u == pytest.approx(total_long, rel=1e-3)
    # and the bending entry against the exact integral of c_lat * tau^2
    assert h[4, 4] == pytest.approx((2.0 / 3.0) * length**3 * c_lat, rel=1e-12)


def test_per_length_reduces_to_physical_at_default_scale(drag):
    c_long, c_lat, c_spin = drag.per_length()
    coeffs = drag.coefficients
    assert c_long == pytest.approx(coeffs.c_par, rel=1e-15)
    assert c_lat == pytest.approx(coeffs.c_perp, rel=1e-15)
    assert c_spin == pytest.approx(coeffs.k_r, rel=1e-15)


def test_isotropic_variant(drag):
    iso = drag.with_isotropic_drag()
    c_long, c_lat, _ = iso.per_length()
    assert c_long == c_lat


def test_reynolds_number():
    fluid = FluidParams(0.95)
    assert reynolds_number(0.0, 0.1, fluid, 1260.0) == 0.0
    u = math.radians(0.5) * 0.2  # tip speed at the 0.5 deg/s joint limit
    value = reynolds_number(u, 0.2, fluid, 1260.0)
    assert value == pytest.approx(1260.0 * u * 0.2 / 0.95, rel=1e-15)
    # linear in speed
    assert reynolds_number(2 * u, 0.2, fluid, 1260.0) == pytest.approx(2 * value)
    # with unit density the operating point sits at the 1e-4 order
    tiny = reynolds_number(u, 0.1, fluid, 1.0)
    assert 1e-5 < tiny < 1e-3
    with pytest.raises(ValueError):
        reynolds_number(-1.0, 0.1, fluid, 1260.0)


def test_fluid_and_drag_param_validation():
    with pytest.raises(ValueError):
        FluidParams(0.0)
    with pytest.raises(ValueError):
        DragParams(FluidParams(1.0), LinkGeometry(0.1, 0.01), force_scale=0.0)

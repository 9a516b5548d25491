import numpy as np
import pytest

from microswim.connection import (
    FullVelocity,
    RestrictedShape,
    RestrictedVelocity,
    connection_matrix,
    joint_rate_axes,
)
from microswim.dragmodel import DragParams, FluidParams, LinkGeometry
from microswim.oracle import (
    DiscretizationParams,
    convergence_table,
    net_wrench_numeric,
    numeric_resistance,
    oracle_connection,
    random_shapes,
    run_validation,
)

L = 0.1


def test_discretization_validation():
    with pytest.raises(ValueError):
        DiscretizationParams(5)
    assert DiscretizationParams().segments_per_link == 2000


def test_zero_motion_zero_wrench(drag, collinear):
    w = net_wrench_numeric(collinear, np.zeros(6), np.zeros(4), drag)
    assert np.allclose(w, 0.0)


def test_single_rod_longitudinal_drag(drag, collinear):
    # translate the whole assembly along x: every link is longitudinal, so the
    # total force is 3 rods x (2 L c_long) x u, and midpoint sums are exact
    u = 0.37
    c_long, _, _ = drag.per_length()
    xi0 = np.array([u, 0, 0, 0, 0, 0])
    w = net_wrench_numeric(collinear, xi0, np.zeros(4), drag, DiscretizationParams(100))
    assert w[0] == pytest.approx(-3 * 2 * L * c_long * u, rel=1e-12)
    assert np.abs(w[1:]).max() < 1e-14


def test_three_rod_broadside_drag(drag, collinear):
    # pure lateral translation: three identical broadside rods
    v = 0.21
    _, c_lat, _ = drag.per_length()
    xi0 = np.array([0, v, 0, 0, 0, 0])
    w = net_wrench_numeric(collinear, xi0, np.zeros(4), drag, DiscretizationParams(100))
    assert w[1] == pytest.approx(-3 * 2 * L * c_lat * v, rel=1e-12)
    assert np.abs(w[[0, 2, 3, 4, 5]]).max() < 1e-12


def test_spin_drag_row(drag, collinear):
    # rolling the whole collinear assembly about x engages only spin drag
    _, _, c_spin = drag.per_length()
    xi0 = np.array([0, 0, 0, 1.0, 0, 0])
    w = net_wrench_numeric(collinear, xi0, np.zeros(4), drag, DiscretizationParams(100))
    assert w[3] == pytest.approx(-3 * 2 * L * c_spin, rel=1e-12)
    assert np.abs(w[[0, 1, 2, 4, 5]]).max() < 1e-12


def test_oracle_matches_analytic_on_random_shapes(drag):
    disc = DiscretizationParams(2000)
    for shape in random_shapes(40, 25):
        a_an = connection_matrix(shape, drag)
        a_or = oracle_connection(shape, drag, disc)
        assert np.abs(a_an - a_or).max() < 1e-6


def test_oracle_generic_path_matches_kernel(drag):
    disc = DiscretizationParams(400)
    for shape in random_shapes(41, 10):
        p_k, q_k = numeric_resistance(shape, drag, disc, use_kernel=True)
        p_g, q_g = numeric_resistance(shape, drag, disc, use_kernel=False)
        assert np.abs(p_k - p_g).max() < 1e-10
        assert np.abs(q_k - q_g).max() < 1e-10


def test_midpoint_convergence_is_second_order(drag):
    shape = RestrictedShape(0.5, -0.3, -0.8, 0.4)
    counts = (125, 250, 500, 1000)
    mats = {n: oracle_connection(shape, drag, DiscretizationParams(n)) for n in counts}
    # consecutive-difference ratios for an O(h^2) rule are exactly 4
    diffs = [
        np.abs(mats[counts[i]] - mats[counts[i + 1]]).max()
        for i in range(len(counts) - 1)
    ]
    for a, b in zip(diffs, diffs[1:]):
        assert a / b == pytest.approx(4.0, abs=0.4)


def test_planar_shape_out_of_plane_rows_vanish(drag):
    shape = RestrictedShape(0.9, 0.0, -0.4, 0.0)
    a_or = oracle_connection(shape, drag, DiscretizationParams(500))
    out_of_plane = [2, 3, 4]
    assert np.abs(a_or[np.ix_(out_of_plane, [0, 2])]).max() < 1e-10


def test_full_shape_oracle(drag):
    rng = np.random.default_rng(42)
    shape = RestrictedShape(*rng.uniform(-1, 1, 4))
    full = shape.to_full()
    a_full_an = connection_matrix(full, drag)
    a_full_or = oracle_connection(full, drag, DiscretizationParams(1500))
    assert a_full_or.shape == (6, 6)
    assert np.abs(a_full_an - a_full_or).max() < 1e-6
    # and the full oracle agrees with the restricted one on embedded rates
    rates = RestrictedVelocity(*rng.uniform(-1, 1, 4))
    omega1 = joint_rate_axes(1, shape) @ np.array([rates.dtheta1, rates.dphi1])
    omega2 = joint_rate_axes(2, shape) @ np.array([rates.dtheta2, rates.dphi2])
    a_restr_or = oracle_connection(shape, drag, DiscretizationParams(1500))
    xi_full = -a_full_or @ FullVelocity(omega1, omega2).as_array()
    xi_restr = -a_restr_or @ rates.as_array()
    assert np.abs(xi_full - xi_restr).max() < 1e-9


def test_wrench_cross_route_agreement(drag):
    from microswim.connection import net_wrench_analytic

    rng = np.random.default_rng(43)
    for shape in random_shapes(44, 10):
        xi0 = rng.uniform(-1, 1, 6) * 0.01
        rates = RestrictedVelocity(*rng.uniform(-1, 1, 4) * 0.02)
        w_an = net_wrench_analytic(shape, xi0, rates, drag)
        w_or = net_wrench_numeric(shape, xi0, rates, drag, DiscretizationParams(2000))
        scale = max(np.abs(w_an).max(), 1e-12)
        assert np.abs(w_an - w_or).max() / scale < 1e-6


def test_desynchronized_coefficients_fail_loudly(drag, collinear):
    # corrupting the force convention on one route only must blow the match
    from microswim.connection import net_wrench_analytic

    shape = RestrictedShape(0.3, 0.2, -0.4, -0.1)
    xi0 = np.array([0.01, -0.02, 0.005, 0.0, 0.01, -0.03])
    rates = RestrictedVelocity(0.02, -0.01, 0.03, 0.005)
    w_an = net_wrench_analytic(shape, xi0, rates, drag)
    c_long, c_lat, c_spin = drag.per_length()
    corrupted = (0.5 * c_long, 0.5 * c_lat, 0.5 * c_spin)
    w_bad = net_wrench_numeric(
        shape, xi0, rates, drag, DiscretizationParams(500),
        per_length_override=corrupted,
    )
    rel = np.abs(w_an - w_bad).max() / np.abs(w_an).max()
    assert rel > 0.4


def test_run_validation_report(drag):
    report = run_validation(drag, n_shapes=20, segments=800, tolerance=1e-5, seed=3)
    assert report["passed"]
    assert report["connection_match"]
    assert report["wrench_match"]
    assert report["max_connection_deviation"] < 1e-5
    assert len(report["convergence"]) == 4


def test_run_validation_detects_impossible_tolerance(drag):
    report = run_validation(drag, n_shapes=5, segments=200, tolerance=1e-30, seed=3)
    assert not report["passed"]


def test_run_validation_workers_deterministic(drag):
    kwargs = dict(n_shapes=12, segments=300, tolerance=1e-4, seed=5)
    serial = run_validation(drag, **kwargs, workers=1)
    fanned = run_validation(drag, **kwargs, workers=4)
    assert serial["max_connection_deviation"] == fanned["max_connection_deviation"]
    assert serial["worst_shape"] == fanned["worst_shape"]

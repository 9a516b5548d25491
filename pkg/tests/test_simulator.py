import math

import numpy as np
import pytest

from microswim.connection import RestrictedShape
from microswim.dragmodel import DragParams, FluidParams, LinkGeometry
from microswim.liegroup import Pose, pose_distance, se3_exp, so3_log
from microswim.simulator import (
    CSV_HEADER,
    JointSinusoid,
    SinusoidGait,
    default_gait,
    gait_eval,
    initial_state,
    planar_gait,
    reciprocal_gait,
    simulate,
    step,
    trajectory_to_csv,
)

DEG = math.pi / 180.0


def test_default_gait_at_t0():
    shape, rates = gait_eval(default_gait(), 0.0)
    assert shape.theta1 == pytest.approx(0.0)
    assert shape.phi1 == pytest.approx(5 * DEG)
    assert shape.theta2 == pytest.approx(0.0, abs=1e-16)
    assert shape.phi2 == pytest.approx(0.0)
    assert rates.dtheta1 == pytest.approx(0.5 * DEG)
    assert rates.dphi1 == pytest.approx(0.0, abs=1e-18)
    assert rates.dtheta2 == pytest.approx(-0.5 * DEG)
    assert rates.dphi2 == pytest.approx(0.125 * DEG)


def test_gait_period_and_recurrence():
    gait = default_gait()
    period = gait.period
    assert period == pytest.approx(2 * math.pi * 40.0)
    s0, _ = gait_eval(gait, 0.0)
    s1, _ = gait_eval(gait, period)
    assert np.allclose(s0.angles(), s1.angles(), atol=1e-12)
    assert gait.max_joint_speed == pytest.approx(20 * DEG * 0.025)


def test_gait_rejects_negative_time():
    with pytest.raises(ValueError):
        gait_eval(default_gait(), -1.0)


def test_gait_analytic_rates_match_finite_differences():
    gait = default_gait()
    for t in (0.0, 7.3, 100.0, 333.3):
        h = 1e-4
        sp, _ = gait_eval(gait, t + h)
        sm, _ = gait_eval(gait, max(t - h, 0.0) if t > h else 0.0)
        if t > h:
            fd = (sp.angles() - sm.angles()) / (2 * h)
            _, rates = gait_eval(gait, t)
            assert np.abs(rates.as_array() - fd).max() < 1e-7


def test_zero_gait_freezes_pose(drag):
    still = SinusoidGait(*(JointSinusoid(0.0, 0.025) for _ in range(4)))
    state = initial_state(still, drag)
    out = step(state, still, drag, 0.5)
    assert pose_distance(out.pose, state.pose) == 0.0


def test_step_validates_dt(drag):
    gait = default_gait()
    state = initial_state(gait, drag)
    with pytest.raises(ValueError):
        step(state, gait, drag, 0.0)


def test_simulate_duration_checks(drag):
    gait = default_gait()
    with pytest.raises(ValueError):
        simulate(gait, drag, 10.0, 20.0)  # dt > duration
    with pytest.raises(ValueError):
        simulate(gait, drag, 10.0, 3.0)  # not a whole number of steps
    traj = simulate(gait, drag, 0.0, 0.1)
    assert len(traj) == 1
    assert np.allclose(traj.positions[0], 0.0)


def test_sample_count_matches_grid(drag):
    traj = simulate(default_gait(), drag, 12.0, 0.1)
    assert len(traj) == 121
    assert traj.times[0] == 0.0
    assert traj.times[-1] == pytest.approx(12.0)
    assert np.all(np.diff(traj.times) > 0)


def test_planar_gait_stays_planar(drag):
    traj = simulate(planar_gait(), drag, 120.0, 0.1)
    assert np.abs(traj.positions[:, 2]).max() < 1e-12
    assert np.abs(traj.euler_angles[:, 1]).max() < 1e-12  # beta
    assert np.abs(traj.euler_angles[:, 2]).max() < 1e-12  # alpha
    assert not traj.gimbal_flags.any()


def test_self_convergence_second_order(drag):
    gait = default_gait()
    duration = 50.0
    finals = {dt: simulate(gait, drag, duration, dt).final_pose() for dt in (0.4, 0.2, 0.1)}
    d1 = pose_distance(finals[0.4], finals[0.2])
    d2 = pose_distance(finals[0.2], finals[0.1])
    assert d1 / d2 == pytest.approx(4.0, abs=0.5)


def test_left_invariance(drag):
    gait = default_gait()
    offset = se3_exp(np.array([0.3, -0.2, 0.5, 0.4, -0.7, 0.2]), 1.0)
    base = simulate(gait, drag, 20.0, 0.1)
    shifted = simulate(gait, drag, 20.0, 0.1, initial_pose=offset)
    for k in (0, 50, 200):
        expected = offset.compose(base.pose(k))
        assert pose_distance(shifted.pose(k), expected) < 1e-11


def test_rotation_stays_orthonormal_long_run(drag):
    traj = simulate(default_gait(), drag, 840.0, 0.1)
    drift = max(
        np.abs(r.T @ r - np.eye(3)).max() for r in traj.rotations[:: len(traj) // 50]
    )
    assert drift < 1e-9


def test_orthonormality_over_many_steps(drag):
    # the group-exponential update plus polar re-projection keeps the pose on
    # SE(3); run 1e5 raw steps (fewer on the slower fallback backend)
    from microswim import _backend
    from microswim.liegroup import orthonormality_drift

    steps = 100_000 if _backend.BACKEND == "compiled" else 20_000
    gait = default_gait()
    state = initial_state(gait, drag)
    worst = 0.0
    for k in range(steps):
        state = step(state, gait, drag, 0.01)
        if k % 2000 == 0:
            worst = max(worst, orthonormality_drift(state.pose.rotation))
    worst = max(worst, orthonormality_drift(state.pose.rotation))
    assert worst < 1e-9


def test_reciprocal_gait_closes(drag):
    period = reciprocal_gait().period
    traj = simulate(reciprocal_gait(), drag, period, period / 1257)
    assert traj.net_displacement() < 1e-9
    # the driving gait at the same step does move
    moving = simulate(default_gait(), drag, period, period / 1257)
    assert moving.net_displacement() > 100 * max(traj.net_displacement(), 1e-12)


def test_default_gait_net_motion(drag):
    period = default_gait().period
    traj = simulate(default_gait(), drag, period, period / 2514)
    assert traj.net_displacement() > 1e-4
    net_rotation = np.linalg.norm(so3_log(traj.rotations[-1]))
    assert net_rotation > 1e-3
    # body velocities stay bounded and periodic-scale
    assert np.abs(traj.body_velocities).max() < 1.0


def test_drag_centroid_is_fixed_under_isotropic_drag(drag):
    iso = drag.with_isotropic_drag()
    period = default_gait().period
    traj = simulate(default_gait(), iso, period, period / 2514)
    c0 = traj.drag_centroid(0, drag.geometry.half_length)
    c1 = traj.drag_centroid(len(traj) - 1, drag.geometry.half_length)
    assert np.linalg.norm(c1 - c0) < 1e-9


def test_csv_output(drag):
    traj = simulate(default_gait(), drag, 1.0, 0.5)
    text = trajectory_to_csv(traj)
    lines = text.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 3
    first = lines[1].split(",")
    assert len(first) == 17
    # 17 significant digits survive a round trip
    values = [float(v) for v in first]
    assert values[0] == 0.0
    assert f"{values[4]:.17g}" == first[4]
    # zero-duration trajectory still carries its single sample
    single = trajectory_to_csv(simulate(default_gait(), drag, 0.0, 0.5))
    assert len(single.strip().split("\n")) == 2


def test_trajectory_export_dispatch(drag):
    from microswim.simulator import trajectory_export

    traj = simulate(default_gait(), drag, 2.0, 0.5)
    csv_out = trajectory_export(traj, "csv")
    assert set(csv_out) == {"trajectory.csv"}
    assert csv_out["trajectory.csv"].decode().startswith(CSV_HEADER)
    svg_out = trajectory_export(traj, "svg", width=400, height=200)
    assert len(svg_out) == 6
    assert all(v.startswith(b"<svg") for v in svg_out.values())
    with pytest.raises(ValueError):
        trajectory_export(traj, "hdf5")


def test_reynolds_regime_warning(drag, caplog):
    fast = SinusoidGait(*(JointSinusoid(1.0, 10.0) for _ in range(4)))
    with caplog.at_level("WARNING", logger="microswim.simulator"):
        simulate(fast, drag, 0.5, 0.1, fluid_density=1260.0)
    assert any("Reynolds" in rec.message for rec in caplog.records)
    caplog.clear()
    # at glycerin density even the default gait sits at Re ~ 0.5, above the
    # creeping threshold; at unit density it is well inside the regime
    with caplog.at_level("WARNING", logger="microswim.simulator"):
        simulate(default_gait(), drag, 0.5, 0.1, fluid_density=1260.0)
    assert any("Reynolds" in rec.message for rec in caplog.records)
    caplog.clear()
    with caplog.at_level("WARNING", logger="microswim.simulator"):
        simulate(default_gait(), drag, 0.5, 0.1, fluid_density=1.0)
    assert not caplog.records

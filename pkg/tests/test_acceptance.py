"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline.
Durations for period-sensitive checks use whole gait periods (the shipped
gait does not close at 840 s, which is 3.34 periods).
"""

import math
import time

import numpy as np
import pytest

from microswim.connection import (
    RestrictedShape,
    RestrictedVelocity,
    connection_matrix,
    net_wrench_analytic,
)
from microswim.controllability import (
    connection_rank,
    filtration,
    planar_decomposition_report,
)
from microswim.liegroup import pose_distance, so3_log
from microswim.oracle import DiscretizationParams, oracle_connection, random_shapes
from microswim.simulator import (
    default_gait,
    planar_gait,
    reciprocal_gait,
    simulate,
    trajectory_to_csv,
)

L = 0.1

# the published collinear-shape matrix, columns reordered per link
# (dtheta1, dphi1, dtheta2, dphi2); its first three columns carry the
# 12 structural zeros, the fourth is internally inconsistent (see README)
PUBLISHED_COLLINEAR = np.array(
    [
        [0.00, 0.00, 0.00, 0.33],
        [3.44, 0.00, 2.77, 0.00],
        [0.00, -3.44, 0.00, 0.00],
        [0.00, 0.00, 0.00, -0.44],
        [0.00, 2.33, 0.00, 0.33],
        [2.33, 0.00, 2.33, 0.00],
    ]
)


def report(num: int, name: str, ok: bool, detail: str):
    print(f"ACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'} — {detail}")


def test_criterion_01_rank_reproduction(drag, collinear):
    rank = connection_rank(collinear, drag)
    best = math.inf
    for _ in range(200):
        t0 = time.perf_counter()
        connection_rank(collinear, drag)
        best = min(best, time.perf_counter() - t0)
    ok = rank == 4 and best < 1e-3
    report(1, "rank-reproduction", ok, f"rank={rank}, eval {best * 1e6:.0f} us < 1 ms")
    assert rank == 4
    assert best < 1e-3


def test_criterion_02_zero_pattern(drag, collinear):
    a = connection_matrix(collinear, drag)
    scale = np.abs(a).max()
    mine_zero = np.abs(a) < 1e-12 * scale
    published_zero = PUBLISHED_COLLINEAR == 0.0
    # the 12 structural zeros live in the first three published columns
    match = np.array_equal(mine_zero[:, :3], published_zero[:, :3])
    n_zeros = int(published_zero[:, :3].sum())
    ok = match and n_zeros == 12
    # value level: report the best uniform rescaling, never assert it
    pattern = ~published_zero[:, :3]
    mine = a[:, :3][pattern]
    published = PUBLISHED_COLLINEAR[:, :3][pattern]
    scale_fit = float(published @ mine / (mine @ mine))
    rel_dev = np.abs(scale_fit * mine - published) / np.abs(published)
    report(
        2,
        "zero-pattern",
        ok,
        f"{n_zeros} structural zeros match; value fit scale={scale_fit:.3g}, "
        f"relative deviations {np.array2string(rel_dev, precision=2)} (reported only); "
        "published column 4 inconsistent with the collinear symmetries "
        f"(nonzero at vx/wx, zero at vz; computed col 4 = {np.round(a[:, 3], 4)})",
    )
    assert ok


def test_criterion_03_oracle_equivalence(drag):
    t0 = time.perf_counter()
    disc = DiscretizationParams(2000)
    max_dev = 0.0
    for shape in random_shapes(2024, 200):
        a_an = connection_matrix(shape, drag)
        a_or = oracle_connection(shape, drag, disc)
        max_dev = max(max_dev, float(np.abs(a_an - a_or).max()))
    elapsed = time.perf_counter() - t0
    ok = max_dev < 1e-6 and elapsed < 30.0
    report(
        3,
        "oracle-equivalence",
        ok,
        f"max deviation {max_dev:.3e} < 1e-6 over 200 shapes, {elapsed:.1f} s < 30 s",
    )
    assert max_dev < 1e-6
    assert elapsed < 30.0


def test_criterion_04_force_balance_residual(drag):
    rng = np.random.default_rng(77)
    worst = 0.0
    for shape in random_shapes(78, 1000):
        rates = RestrictedVelocity(*rng.uniform(-1.0, 1.0, 4))
        xi0 = -connection_matrix(shape, drag) @ rates.as_array()
        wrench = net_wrench_analytic(shape, xi0, rates, drag)
        worst = max(worst, float(np.abs(wrench).max()))
    ok = worst < 1e-9
    report(4, "force-balance-residual", ok, f"max |net wrench| {worst:.3e} < 1e-9")
    assert worst < 1e-9


def test_criterion_05_planar_closure(drag):
    traj = simulate(planar_gait(), drag, 840.0, 0.1)
    z = float(np.abs(traj.positions[:, 2]).max())
    pitch = float(np.abs(traj.euler_angles[:, 1]).max())
    roll = float(np.abs(traj.euler_angles[:, 2]).max())
    ok = max(z, pitch, roll) < 1e-9
    report(
        5,
        "planar-closure",
        ok,
        f"840 s in-plane run: |z| <= {z:.2e}, |roll| <= {roll:.2e}, "
        f"|pitch| <= {pitch:.2e}, all < 1e-9",
    )
    assert ok


def test_criterion_06_scallop_theorem(drag):
    period = reciprocal_gait().period
    steps = 1257
    disps = []
    for factor in (1, 2, 4):
        traj = simulate(reciprocal_gait(), drag, period, period / (steps * factor))
        disps.append(traj.net_displacement())
    driving = simulate(default_gait(), drag, period, period / (steps * 4))
    drive_disp = driving.net_displacement()
    converged = all(d < 1e-6 for d in disps) and disps[-1] <= max(disps[0], 1e-12)
    separated = drive_disp > 100.0 * max(disps[-1], 1e-12)
    ok = converged and separated
    report(
        6,
        "scallop-theorem",
        ok,
        f"reciprocal displacement {disps[0]:.2e} -> {disps[-1]:.2e} m over dt -> dt/4 "
        f"(all < 1e-6); non-reciprocal gait {drive_disp:.2e} m is "
        f"{drive_disp / max(disps[-1], 1e-300):.1e}x larger",
    )
    assert converged
    assert separated


def test_criterion_07_default_gait_run(drag, tmp_path):
    t0 = time.perf_counter()
    traj = simulate(default_gait(), drag, 840.0, 0.1, fluid_density=1260.0)
    csv_text = trajectory_to_csv(traj)
    elapsed = time.perf_counter() - t0
    (tmp_path / "trajectory.csv").write_text(csv_text)
    displacement = traj.net_displacement()
    rotation = float(np.linalg.norm(so3_log(traj.rotations[-1])))
    v_max = float(np.abs(traj.body_velocities).max())
    # periodicity: the body-velocity function repeats after one gait period
    gait = default_gait()
    period = gait.period
    recurrence = 0.0
    for t in np.linspace(0.0, period, 25):
        xi_a = -connection_matrix(gait.shape(t), drag) @ gait.rates(t).as_array()
        xi_b = (
            -connection_matrix(gait.shape(t + period), drag)
            @ gait.rates(t + period).as_array()
        )
        recurrence = max(recurrence, float(np.abs(xi_a - xi_b).max()))
    ok = (
        elapsed < 10.0
        and len(traj) == 8401
        and displacement > 1e-4
        and rotation > 1e-3
        and v_max < 1.0
        and recurrence < 1e-6
    )
    report(
        7,
        "default-gait-run",
        ok,
        f"840 s in {elapsed:.1f} s < 10 s; net translation {displacement:.3e} m, "
        f"net rotation {rotation:.3e} rad, velocities bounded by {v_max:.2e}, "
        f"period-to-period velocity recurrence {recurrence:.1e}",
    )
    assert ok


def test_criterion_08_controllability_verdict(drag, collinear):
    rep = filtration(collinear, drag, depth=3)
    translations = set(rep.reachable_translations)
    rotations = set(rep.reachable_rotations)
    transverse = {"y", "z"}  # axes transverse to the base link (x) axis
    full_span = rep.spans_se3
    planar = planar_decomposition_report(collinear, drag)
    xy_ok = {"x", "y"} <= set(planar.in_plane_xy.reachable_translations) and {
        "z"
    } <= set(planar.in_plane_xy.reachable_rotations)
    xz_ok = {"x", "z"} <= set(planar.in_plane_xz.reachable_translations) and {
        "y"
    } <= set(planar.in_plane_xz.reachable_rotations)
    union_ok = set(planar.union_translations) == {"x", "y", "z"} and set(
        planar.union_rotations
    ) == transverse
    ok = (
        translations == {"x", "y", "z"}
        and transverse <= rotations
        and {"x", "z"} <= rotations  # implied by the full span
        and xy_ok
        and xz_ok
        and union_ok
    )
    report(
        8,
        "controllability-verdict",
        ok,
        f"filtration dims {rep.dims}: translations {sorted(translations)}, "
        f"rotations {sorted(rotations)} (full se(3) span: {full_span}); planar "
        f"restrictions give xy->(vx,vy,wz), xz->(vx,vz,wy), union missing only "
        f"{planar.missing_directions} (roll about the base axis)",
    )
    assert ok


def test_criterion_09_integrator_order(drag):
    gait = default_gait()
    duration = 251.2  # whole number of steps for every dt below
    dts = (0.4, 0.2, 0.1, 0.05, 0.025)
    finals = {dt: simulate(gait, drag, duration, dt).final_pose() for dt in dts}
    errors = [pose_distance(finals[dt], finals[dt / 2]) for dt in dts[:-1]]
    ratios = [errors[i] / errors[i + 1] for i in range(len(errors) - 1)]
    ok = all(abs(r - 4.0) <= 0.5 for r in ratios)
    report(
        9,
        "integrator-order",
        ok,
        f"self-convergence ratios {[f'{r:.2f}' for r in ratios]} within 4.0 +/- 0.5 "
        f"across dt in {dts[:-1]}",
    )
    assert ok


def test_criterion_10_isotropic_drag_negative_control(drag):
    # net propulsion is the world displacement of the drag centroid; over
    # whole gait periods isotropic drag must not produce any (the exact flow
    # pins the centroid; only integrator error remains), while the base
    # center still moves through reorientation lever effects
    iso = drag.with_isotropic_drag()
    period = default_gait().period
    duration = 3.0 * period
    dt = duration / 15084  # ~0.05 s
    run_iso = simulate(default_gait(), iso, duration, dt)
    run_aniso = simulate(default_gait(), drag, duration, dt)

    def centroid_shift(traj):
        c0 = traj.drag_centroid(0, L)
        c1 = traj.drag_centroid(len(traj) - 1, L)
        return float(np.linalg.norm(c1 - c0))

    iso_shift = centroid_shift(run_iso)
    aniso_shift = centroid_shift(run_aniso)
    ok = iso_shift < 1e-9 and iso_shift < 1e-3 * aniso_shift
    report(
        10,
        "isotropic-drag-negative-control",
        ok,
        f"centroid displacement {iso_shift:.2e} m (isotropic) < 1e-9 vs "
        f"{aniso_shift:.2e} m (anisotropic), ratio {iso_shift / aniso_shift:.1e}; "
        f"base-center motion {run_iso.net_displacement():.2e} m under isotropy is "
        "pure reorientation lever effect",
    )
    assert iso_shift < 1e-9
    assert iso_shift < 1e-3 * aniso_shift

"""Brute-force validator: discretized-rod drag sums, no Jacobian machinery.

Each link is cut into uniform segments (midpoint rule).  A segment's world
velocity follows from raw rigid-body kinematics of the chain; its drag force
is the per-length coefficients applied to the longitudinal/lateral split of
that velocity; spin torque about the link axis is added per length.  Summing
forces and moments about the base center gives the net wrench, and solving
the resulting linear resistance for the base twist that zeroes it rebuilds
the connection form with none of the analytic assembly involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from microswim import _backend
from microswim.connection import (
    FullShape,
    FullVelocity,
    RestrictedShape,
    RestrictedVelocity,
    Shape,
    ShapeVelocity,
    link_frame,
    shape_dimension,
)
from microswim.dragmodel import DragParams


class OracleSingularError(RuntimeError):
    """Numeric resistance came out singular; the discretization failed."""


@dataclass(frozen=True)
class DiscretizationParams:
    segments_per_link: int = 2000

    def __post_init__(self):
        if self.segments_per_link < 10:
            raise ValueError(
                f"segments_per_link must be >= 10, got {self.segments_per_link}"
            )


def _rate_axes_base(link_index: int, shape: RestrictedShape) -> np.ndarray:
    """Base-frame rotation axes of (dtheta, dphi) for one link, as columns."""
    theta = {1: shape.theta1, 2: shape.theta2}[link_index]
    return np.array(
        [
            [0.0, -np.sin(theta)],
            [0.0, np.cos(theta)],
            [1.0, 0.0],
        ]
    )


def _segment_geometry(shape: Shape, drag: DragParams, n: int):
    """Per-link segment midpoints, tangents, joints and relative-rotation axes."""
    length = drag.geometry.half_length
    h = 2.0 * length / n
    tau = -length + (np.arange(n) + 0.5) * h

    out = []
    pos0 = np.zeros((n, 3))
    pos0[:, 0] = tau
    out.append((np.array([1.0, 0.0, 0.0]), pos0, None, None))
    for link_index in (1, 2):
        r_pass, joint, center = link_frame(link_index, shape, length)
        tangent = r_pass.T[:, 0]
        positions = center[None, :] + tau[:, None] * tangent[None, :]
        if isinstance(shape, RestrictedShape):
            axes = _rate_axes_base(link_index, shape)
        else:
            axes = r_pass.T  # link-frame angular velocity -> base frame
        out.append((tangent, positions, joint, axes))
    return h, out


def _rates_array(shape: Shape, rates: ShapeVelocity | np.ndarray) -> np.ndarray:
    arr = rates.as_array() if hasattr(rates, "as_array") else np.asarray(rates, float)
    m = shape_dimension(shape)
    if arr.shape != (m,):
        raise ValueError(f"expected {m} shape rates, got shape {arr.shape}")
    return arr


def net_wrench_numeric(
    shape: Shape,
    xi0: np.ndarray,
    rates: ShapeVelocity | np.ndarray,
    drag: DragParams,
    disc: DiscretizationParams = DiscretizationParams(),
    per_length_override: tuple[float, float, float] | None = None,
) -> np.ndarray:
    """Net drag wrench (force; moment) about the base center, base frame.

    ``per_length_override`` substitutes the (longitudinal, lateral, spin)
    per-length coefficients; it exists so tests can deliberately desynchronize
    the two force routes.
    """
    xi0 = np.asarray(xi0, dtype=float).reshape(6)
    rdot = _rates_array(shape, rates)
    c_long, c_lat, c_spin = (
        per_length_override if per_length_override is not None else drag.per_length()
    )
    n = disc.segments_per_link
    h, links = _segment_geometry(shape, drag, n)
    length = drag.geometry.half_length
    v0, w0 = xi0[:3], xi0[3:]
    per_link = shape_dimension(shape) // 2

    wrench = np.zeros(6)
    for k, (tangent, positions, joint, axes) in enumerate(links):
        if joint is None:
            w_rel = np.zeros(3)
        else:
            block = rdot[per_link * (k - 1) : per_link * k]
            w_rel = axes @ block
        velocity = v0[None, :] + np.cross(w0[None, :], positions)
        if joint is not None:
            velocity = velocity + np.cross(w_rel[None, :], positions - joint[None, :])
        v_long = (velocity @ tangent)[:, None] * tangent[None, :]
        v_lat = velocity - v_long
        force_density = -(c_long * v_long + c_lat * v_lat)
        wrench[:3] += h * force_density.sum(axis=0)
        wrench[3:] += h * np.cross(positions, force_density).sum(axis=0)
        spin_rate = float(tangent @ (w0 + w_rel))
        wrench[3:] += -c_spin * 2.0 * length * spin_rate * tangent
    return wrench


def numeric_resistance(
    shape: Shape,
    drag: DragParams,
    disc: DiscretizationParams = DiscretizationParams(),
    use_kernel: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Resistance blocks (P, Q) assembled column-by-column from unit motions."""
    if use_kernel and isinstance(shape, RestrictedShape):
        c_long, c_lat, c_spin = drag.per_length()
        return _backend.oracle_resistance(
            shape.theta1,
            shape.phi1,
            shape.theta2,
            shape.phi2,
            drag.geometry.half_length,
            c_long,
            c_lat,
            c_spin,
            disc.segments_per_link,
        )
    m = shape_dimension(shape)
    p_mat = np.zeros((6, 6))
    q_mat = np.zeros((6, m))
    zeros_rdot = np.zeros(m)
    for k in range(6):
        e = np.zeros(6)
        e[k] = 1.0
        p_mat[:, k] = -net_wrench_numeric(shape, e, zeros_rdot, drag, disc)
    for k in range(m):
        e = np.zeros(m)
        e[k] = 1.0
        q_mat[:, k] = -net_wrench_numeric(shape, np.zeros(6), e, drag, disc)
    return p_mat, q_mat


def oracle_connection(
    shape: Shape,
    drag: DragParams,
    disc: DiscretizationParams = DiscretizationParams(),
    use_kernel: bool = True,
) -> np.ndarray:
    """Connection matrix from the discretized resistance: A = P^-1 Q."""
    p_mat, q_mat = numeric_resistance(shape, drag, disc, use_kernel=use_kernel)
    cond = np.linalg.cond(p_mat)
    if not np.isfinite(cond) or cond > 1e12:
        raise OracleSingularError(
            f"numeric resistance condition number {cond:.3g}; "
            "discretization or drag parameters are broken"
        )
    return np.linalg.solve(p_mat, q_mat)


def random_shapes(
    count: int,
    seed: int,
    theta_range: float = 2.0,
    phi_range: float = 1.2,
) -> list[RestrictedShape]:
    """Seeded generic test shapes, yaw in +-theta_range, pitch in +-phi_range."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        th1, th2 = rng.uniform(-theta_range, theta_range, 2)
        ph1, ph2 = rng.uniform(-phi_range, phi_range, 2)
        out.append(RestrictedShape(th1, ph1, th2, ph2))
    return out


def run_validation(
    drag: DragParams,
    n_shapes: int = 200,
    segments: int = 2000,
    tolerance: float = 1e-6,
    seed: int = 0,
    theta_range: float = 2.0,
    phi_range: float = 1.2,
    convergence_shape: Shape | None = None,
    workers: int = 1,
) -> dict:
    """Analytic-vs-discretized comparison suite, as a JSON-ready report.

    Compares the connection matrices over seeded random shapes, cross-checks
    raw wrenches between the two force routes (which trips loudly if the
    drag conventions ever diverge), and runs a segment-refinement study.
    Per-shape evaluations are independent; ``workers`` > 1 fans them out over
    a thread pool without changing the (deterministic) result.
    """
    from microswim.connection import connection_matrix, net_wrench_analytic

    disc = DiscretizationParams(segments)
    shapes = random_shapes(n_shapes, seed, theta_range, phi_range)
    rng = np.random.default_rng(seed + 1)

    def deviation(shape: RestrictedShape) -> float:
        a_an = connection_matrix(shape, drag)
        a_or = oracle_connection(shape, drag, disc)
        return float(np.abs(a_an - a_or).max())

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            deviations = list(pool.map(deviation, shapes))
    else:
        deviations = [deviation(shape) for shape in shapes]
    worst_index = int(np.argmax(deviations)) if deviations else None
    max_dev = deviations[worst_index] if deviations else 0.0
    worst = shapes[worst_index] if deviations else None
    connection_ok = max_dev < tolerance

    wrench_max = 0.0
    wrench_scale = 0.0
    for shape in shapes[: min(20, len(shapes))]:
        xi0 = rng.uniform(-1.0, 1.0, 6) * 0.01
        rdot = RestrictedVelocity(*rng.uniform(-1.0, 1.0, 4) * 0.02)
        w_an = net_wrench_analytic(shape, xi0, rdot, drag)
        w_or = net_wrench_numeric(shape, xi0, rdot, drag, disc)
        wrench_max = max(wrench_max, float(np.abs(w_an - w_or).max()))
        wrench_scale = max(wrench_scale, float(np.abs(w_an).max()))
    wrench_rel = wrench_max / wrench_scale if wrench_scale > 0 else 0.0
    wrench_ok = wrench_rel < 1e-4

    conv_shape = convergence_shape if convergence_shape is not None else shapes[0]
    table = convergence_table(conv_shape, drag)

    return {
        "shapes": n_shapes,
        "segments": segments,
        "tolerance": tolerance,
        "seed": seed,
        "max_connection_deviation": max_dev,
        "worst_shape": list(worst.angles()) if worst is not None else None,
        "connection_match": connection_ok,
        "max_wrench_deviation": wrench_max,
        "relative_wrench_deviation": wrench_rel,
        "wrench_match": wrench_ok,
        "convergence": table,
        "passed": bool(connection_ok and wrench_ok),
    }


def convergence_table(
    shape: Shape,
    drag: DragParams,
    segment_counts: tuple[int, ...] = (250, 500, 1000, 2000),
) -> list[dict]:
    """Self-convergence of the oracle under segment refinement.

    Deviation is measured against the finest count doubled; the midpoint rule
    should show second order (deviation ratio ~4 per halving).
    """
    reference = oracle_connection(
        shape, drag, DiscretizationParams(2 * max(segment_counts))
    )
    rows = []
    previous = None
    for n in sorted(segment_counts):
        a_n = oracle_connection(shape, drag, DiscretizationParams(n))
        dev = float(np.abs(a_n - reference).max())
        ratio = (previous / dev) if (previous is not None and dev > 0) else None
        rows.append({"segments": n, "deviation": dev, "ratio_vs_coarser": ratio})
        previous = dev
    return rows

"""Pure-numpy implementations of the two hot kernels.

Self-contained on purpose (no imports from the rest of the package): the
compiled extension in ``_core.pyx`` mirrors these line for line and either
module can back :mod:`microswim._backend`.

Shared conventions (see the package README for the full table):

* link 1 hangs off the +x end of the base link, link 2 off the -x end;
* ``theta`` yaws a link about the joint z-axis, ``phi`` pitches it about the
  (theta-rotated) y-axis, with positive phi taking the outer tip toward -z;
* twists and wrenches are ordered (vx, vy, vz, wx, wy, wz);
* shape-velocity columns are ordered (dtheta1, dphi1, dtheta2, dphi2).
"""

from __future__ import annotations

import math

import numpy as np


def _hat(v: np.ndarray) -> np.ndarray:
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


def _base_to_link(theta: float, phi: float) -> np.ndarray:
    """Rotation taking base-frame coordinates into the link frame."""
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(phi), math.sin(phi)
    return np.array(
        [
            [cp * ct, cp * st, -sp],
            [-st, ct, 0.0],
            [sp * ct, sp * st, cp],
        ]
    )


def _drag_diagonal(half_length: float, c_long: float, c_lat: float, c_spin: float) -> np.ndarray:
    length = half_length
    return np.array(
        [
            2.0 * length * c_long,
            2.0 * length * c_lat,
            2.0 * length * c_lat,
            2.0 * length * c_spin,
            (2.0 / 3.0) * length**3 * c_lat,
            (2.0 / 3.0) * length**3 * c_lat,
        ]
    )


def connection_restricted(
    theta1: float,
    phi1: float,
    theta2: float,
    phi2: float,
    half_length: float,
    c_long: float,
    c_lat: float,
    c_spin: float,
) -> np.ndarray:
    """Local connection A (6x4) for the two-angle-per-joint shape model.

    Assembles the force balance P xi0 + Q rdot = 0 from per-link drag
    matrices, body Jacobians and wrench transports, then solves for
    A = P^-1 Q so that xi0 = -A rdot.
    """
    h_diag = _drag_diagonal(half_length, c_long, c_lat, c_spin)
    p_mat = np.diag(h_diag)  # base link: identity Jacobian, identity transport
    q_mat = np.zeros((6, 4))

    for idx, (theta, phi, sgn) in enumerate(
        ((theta1, phi1, 1.0), (theta2, phi2, -1.0))
    ):
        r_pass = _base_to_link(theta, phi)
        a_act = r_pass.T
        joint = np.array([sgn * half_length, 0.0, 0.0])
        d_link = np.array([sgn * half_length, 0.0, 0.0])
        center = joint + a_act @ d_link
        # joint-rate -> relative angular velocity of the link, link frame
        w_cols = np.array(
            [
                [-math.sin(phi), 0.0],
                [0.0, 1.0],
                [math.cos(phi), 0.0],
            ]
        )
        b = np.zeros((6, 8))
        b[:3, :3] = r_pass
        b[:3, 3:6] = -r_pass @ _hat(center)
        b[3:, 3:6] = r_pass
        b[:3, 6:8] = -_hat(d_link) @ w_cols
        b[3:, 6:8] = w_cols
        t = np.zeros((6, 6))
        t[:3, :3] = a_act
        t[3:, :3] = _hat(center) @ a_act
        t[3:, 3:] = a_act
        thb = t @ (h_diag[:, None] * b)
        p_mat += thb[:, :6]
        q_mat[:, 2 * idx : 2 * idx + 2] = thb[:, 6:8]

    return np.linalg.solve(p_mat, q_mat)


def oracle_resistance(
    theta1: float,
    phi1: float,
    theta2: float,
    phi2: float,
    half_length: float,
    c_long: float,
    c_lat: float,
    c_spin: float,
    segments: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Discretized-rod resistance (P 6x6, Q 6x4) by midpoint segment sums.

    Never touches the Jacobian/transport assembly above: each segment's
    velocity is computed from raw rigid-body kinematics, projected onto the
    local longitudinal/lateral directions, weighted by the per-length
    coefficients and summed (with moments) about the base center.
    """
    if segments < 10:
        raise ValueError(f"need at least 10 segments per link, got {segments}")
    n = segments
    length = half_length
    h = 2.0 * length / n
    tau = -length + (np.arange(n) + 0.5) * h  # arclength from link center

    g_mat = np.zeros((6, 10))
    eye3 = np.eye(3)

    # (tangent, positions (n,3), joint, base-frame rate axes (3,2) or None, rate col)
    links = []
    pos0 = np.zeros((n, 3))
    pos0[:, 0] = tau
    links.append((np.array([1.0, 0.0, 0.0]), pos0, np.zeros(3), None, 0))
    for theta, phi, sgn, col in (
        (theta1, phi1, 1.0, 6),
        (theta2, phi2, -1.0, 8),
    ):
        a_act = _base_to_link(theta, phi).T
        joint = np.array([sgn * length, 0.0, 0.0])
        center = joint + a_act @ np.array([sgn * length, 0.0, 0.0])
        tangent = a_act[:, 0]
        positions = center[None, :] + tau[:, None] * tangent[None, :]
        rate_axes = np.array(
            [
                [0.0, -math.sin(theta)],
                [0.0, math.cos(theta)],
                [1.0, 0.0],
            ]
        )
        links.append((tangent, positions, joint, rate_axes, col))

    for tangent, positions, joint, rate_axes, col in links:
        proj = c_long * np.outer(tangent, tangent) + c_lat * (
            eye3 - np.outer(tangent, tangent)
        )
        hat_p = np.zeros((n, 3, 3))
        hat_p[:, 0, 1] = -positions[:, 2]
        hat_p[:, 0, 2] = positions[:, 1]
        hat_p[:, 1, 0] = positions[:, 2]
        hat_p[:, 1, 2] = -positions[:, 0]
        hat_p[:, 2, 0] = -positions[:, 1]
        hat_p[:, 2, 1] = positions[:, 0]

        # segment velocity Jacobian V (n, 3, 10) against (xi0; rdot)
        v_jac = np.zeros((n, 3, 10))
        v_jac[:, :, :3] = eye3
        v_jac[:, :, 3:6] = -hat_p
        if rate_axes is not None:
            lever = positions - joint[None, :]
            hat_l = np.zeros((n, 3, 3))
            hat_l[:, 0, 1] = -lever[:, 2]
            hat_l[:, 0, 2] = lever[:, 1]
            hat_l[:, 1, 0] = lever[:, 2]
            hat_l[:, 1, 2] = -lever[:, 0]
            hat_l[:, 2, 0] = -lever[:, 1]
            hat_l[:, 2, 1] = lever[:, 0]
            v_jac[:, :, col : col + 2] = -np.einsum("nab,bk->nak", hat_l, rate_axes)

        f_jac = np.einsum("ab,nbk->nak", proj, v_jac)
        g_mat[:3] += h * f_jac.sum(axis=0)
        g_mat[3:] += h * np.einsum("nab,nbk->ak", hat_p, f_jac)

        # spin drag about the link axis (uniform along the link)
        w_jac = np.zeros((3, 10))
        w_jac[:, 3:6] = eye3
        if rate_axes is not None:
            w_jac[:, col : col + 2] = rate_axes
        g_mat[3:] += (
            2.0 * length * c_spin * np.outer(tangent, tangent @ w_jac)
        )

    return g_mat[:, :6], g_mat[:, 6:]

"""Local connection form of the three-link swimmer.

Couples the shape kinematics (body Jacobians B_i), the per-link drag
matrices H_i and the wrench transports T_i into the zero-net-wrench balance

    P xi0 + Q rdot = 0,   A = P^-1 Q,   xi0 = -A(r) rdot,

where xi0 is the base link's body twist and rdot the joint rates.

Geometry conventions (fixed once, shared with the segment-sum validator):

* the base link spans x in [-L, L] of its own frame; joint 1 sits at (+L,0,0),
  joint 2 at (-L,0,0);
* an outer link's orientation relative to the base is rot_y(phi) @ rot_z(theta)
  in the package's rotation sign layout (that matrix maps base coordinates
  into link coordinates); positive phi pitches the outer tip toward -z;
* each outer link extends from its joint outward, so its center sits at
  joint + R^T (sgn L, 0, 0) in base coordinates, and its drag wrench is taken
  about that center;
* restricted shape-velocity columns are ordered per link:
  (dtheta1, dphi1, dtheta2, dphi2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from microswim import _backend
from microswim.dragmodel import DragParams, link_drag_matrix
from microswim.liegroup import hat, is_rotation, rot_y, rot_z, wrench_transform

TWIST_LABELS = ("vx", "vy", "vz", "wx", "wy", "wz")
RESTRICTED_RATE_LABELS = ("dtheta1", "dphi1", "dtheta2", "dphi2")
FULL_RATE_LABELS = ("w1x", "w1y", "w1z", "w2x", "w2y", "w2z")

_LINK_SIGN = {1: 1.0, 2: -1.0}
_CONDITION_LIMIT = 1e12


class SingularResistanceError(RuntimeError):
    """Grand resistance matrix numerically singular; indicates a model bug."""


def restricted_rotation(theta: float, phi: float) -> np.ndarray:
    """Base-to-link rotation of an outer link given its two joint angles."""
    return rot_y(phi) @ rot_z(theta)


@dataclass(frozen=True)
class RestrictedShape:
    """Outer-link orientations constrained to the two-sphere (no axial roll)."""

    theta1: float
    phi1: float
    theta2: float
    phi2: float

    def angles(self) -> np.ndarray:
        return np.array([self.theta1, self.phi1, self.theta2, self.phi2])

    def rotation(self, link_index: int) -> np.ndarray:
        theta, phi = {
            1: (self.theta1, self.phi1),
            2: (self.theta2, self.phi2),
        }[link_index]
        return restricted_rotation(theta, phi)

    def to_full(self) -> "FullShape":
        return FullShape(self.rotation(1), self.rotation(2))

    def mirrored(self) -> "RestrictedShape":
        """Image under the half-turn about the base z-axis (swaps the links)."""
        return RestrictedShape(self.theta2, -self.phi2, self.theta1, -self.phi1)

    @staticmethod
    def collinear() -> "RestrictedShape":
        return RestrictedShape(0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class FullShape:
    """Unrestricted outer-link orientations (full SO(3) per link).

    ``r1``/``r2`` map base coordinates into the respective link frame,
    matching what :func:`restricted_rotation` produces.
    """

    r1: np.ndarray
    r2: np.ndarray

    def __post_init__(self):
        for name, r in (("r1", self.r1), ("r2", self.r2)):
            arr = np.asarray(r, dtype=float)
            if not is_rotation(arr):
                raise ValueError(f"{name} is not a valid rotation matrix")
            object.__setattr__(self, name, arr)

    def rotation(self, link_index: int) -> np.ndarray:
        return {1: self.r1, 2: self.r2}[link_index]


Shape = Union[RestrictedShape, FullShape]


@dataclass(frozen=True)
class RestrictedVelocity:
    dtheta1: float
    dphi1: float
    dtheta2: float
    dphi2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.dtheta1, self.dphi1, self.dtheta2, self.dphi2])


@dataclass(frozen=True)
class FullVelocity:
    """Angular velocity of each outer link, expressed in that link's frame."""

    omega1: np.ndarray
    omega2: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.concatenate(
            [np.asarray(self.omega1, float), np.asarray(self.omega2, float)]
        )


ShapeVelocity = Union[RestrictedVelocity, FullVelocity]


def shape_dimension(shape: Shape) -> int:
    return 4 if isinstance(shape, RestrictedShape) else 6


def joint_position(link_index: int, half_length: float) -> np.ndarray:
    return np.array([_LINK_SIGN[link_index] * half_length, 0.0, 0.0])


def link_frame(
    link_index: int, shape: Shape, half_length: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(base-to-link rotation, joint position, link center) in base coordinates."""
    if link_index not in (1, 2):
        raise ValueError(f"link_index must be 1 or 2, got {link_index}")
    r_pass = shape.rotation(link_index)
    joint = joint_position(link_index, half_length)
    d_link = np.array([_LINK_SIGN[link_index] * half_length, 0.0, 0.0])
    center = joint + r_pass.T @ d_link
    return r_pass, joint, center


def joint_rate_axes(link_index: int, shape: RestrictedShape) -> np.ndarray:
    """Columns mapping (dtheta, dphi) to the link's relative angular velocity.

    Expressed in the link's own frame: the dtheta column is
    (-sin phi, 0, cos phi), the dphi column (0, 1, 0).
    """
    phi = {1: shape.phi1, 2: shape.phi2}[link_index]
    return np.array(
        [
            [-math.sin(phi), 0.0],
            [0.0, 1.0],
            [math.cos(phi), 0.0],
        ]
    )


def body_jacobian(link_index: int, shape: Shape, half_length: float) -> np.ndarray:
    """B_i mapping (xi0; rdot) to the link's body twist xi_i.

    6x10 for restricted shapes (rdot = joint-angle rates), 6x12 for full
    shapes (rdot = link angular velocities in link frames).  Columns for the
    other link's rates are zero.
    """
    r_pass, _, center = link_frame(link_index, shape, half_length)
    d_link = np.array([_LINK_SIGN[link_index] * half_length, 0.0, 0.0])
    m = shape_dimension(shape)
    per_link = m // 2
    b = np.zeros((6, 6 + m))
    b[:3, :3] = r_pass
    b[:3, 3:6] = -r_pass @ hat(center)
    b[3:, 3:6] = r_pass
    col = 6 + per_link * (link_index - 1)
    if isinstance(shape, RestrictedShape):
        w_cols = joint_rate_axes(link_index, shape)
        b[:3, col : col + 2] = -hat(d_link) @ w_cols
        b[3:, col : col + 2] = w_cols
    else:
        b[:3, col : col + 3] = -hat(d_link)
        b[3:, col : col + 3] = np.eye(3)
    return b


def wrench_to_base(link_index: int, shape: Shape, half_length: float) -> np.ndarray:
    """T_i carrying a link-frame wrench about the link center to the base frame."""
    r_pass, _, center = link_frame(link_index, shape, half_length)
    return wrench_transform(r_pass, center)


def assemble_force_balance(
    shape: Shape, drag: DragParams
) -> tuple[np.ndarray, np.ndarray]:
    """Grand resistance P (6x6) and shape coupling Q (6xm)."""
    half_length = drag.geometry.half_length
    h_mat = link_drag_matrix(drag)
    p_mat = h_mat.copy()  # base link: identity Jacobian and transport
    m = shape_dimension(shape)
    per_link = m // 2
    q_mat = np.zeros((6, m))
    for link_index in (1, 2):
        b = body_jacobian(link_index, shape, half_length)
        t = wrench_to_base(link_index, shape, half_length)
        thb = t @ h_mat @ b
        p_mat += thb[:, :6]
        col = per_link * (link_index - 1)
        q_mat[:, col : col + per_link] = thb[:, 6 + col : 6 + col + per_link]
    return p_mat, q_mat


@dataclass(frozen=True)
class ConnectionForm:
    """A(r) evaluated at one shape: xi0 = -matrix @ rdot."""

    matrix: np.ndarray
    shape: Shape
    drag: DragParams

    @property
    def model(self) -> str:
        return "restricted" if isinstance(self.shape, RestrictedShape) else "full"

    @property
    def rate_labels(self) -> tuple[str, ...]:
        return (
            RESTRICTED_RATE_LABELS if self.model == "restricted" else FULL_RATE_LABELS
        )

    def body_velocity(self, rates: ShapeVelocity | np.ndarray) -> np.ndarray:
        rdot = rates.as_array() if hasattr(rates, "as_array") else np.asarray(rates)
        return -self.matrix @ rdot


def connection_matrix(
    shape: Shape, drag: DragParams, use_kernel: bool = True
) -> np.ndarray:
    """A = P^-1 Q by a pivoted linear solve (never an explicit inverse).

    Restricted shapes go through the selected backend kernel unless
    ``use_kernel`` is False; full shapes always use the generic assembly.
    """
    if use_kernel and isinstance(shape, RestrictedShape):
        c_long, c_lat, c_spin = drag.per_length()
        try:
            return _backend.connection_restricted(
                shape.theta1,
                shape.phi1,
                shape.theta2,
                shape.phi2,
                drag.geometry.half_length,
                c_long,
                c_lat,
                c_spin,
            )
        except np.linalg.LinAlgError as exc:
            raise SingularResistanceError(str(exc)) from exc
    p_mat, q_mat = assemble_force_balance(shape, drag)
    cond = np.linalg.cond(p_mat)
    if not np.isfinite(cond) or cond > _CONDITION_LIMIT:
        raise SingularResistanceError(
            f"resistance matrix condition number {cond:.3g} exceeds {_CONDITION_LIMIT:.0e}"
        )
    return np.linalg.solve(p_mat, q_mat)


def local_connection(
    shape: Shape, drag: DragParams, use_kernel: bool = True
) -> ConnectionForm:
    return ConnectionForm(connection_matrix(shape, drag, use_kernel), shape, drag)


def link_twist(
    link_index: int,
    shape: Shape,
    xi0: np.ndarray,
    rates: ShapeVelocity,
    half_length: float,
) -> np.ndarray:
    """Body twist of an outer link from explicit point kinematics.

    Deliberately avoids :func:`body_jacobian`; used to cross-check the
    assembled force balance term by term.
    """
    xi0 = np.asarray(xi0, dtype=float).reshape(6)
    r_pass, _, center = link_frame(link_index, shape, half_length)
    d_link = np.array([_LINK_SIGN[link_index] * half_length, 0.0, 0.0])
    if isinstance(rates, RestrictedVelocity):
        pair = {
            1: (rates.dtheta1, rates.dphi1),
            2: (rates.dtheta2, rates.dphi2),
        }[link_index]
        w_rel = joint_rate_axes(link_index, shape) @ np.array(pair)
    else:
        w_rel = np.asarray(
            {1: rates.omega1, 2: rates.omega2}[link_index], dtype=float
        )
    v0, w0 = xi0[:3], xi0[3:]
    v_link = r_pass @ (v0 + np.cross(w0, center)) + np.cross(w_rel, d_link)
    w_link = r_pass @ w0 + w_rel
    return np.concatenate([v_link, w_link])


def net_wrench_analytic(
    shape: Shape, xi0: np.ndarray, rates: ShapeVelocity, drag: DragParams
) -> np.ndarray:
    """Total drag wrench about the base center for a given motion.

    Per-link route: each link's twist from :func:`link_twist`, its wrench
    -H xi_i, transported by the wrench transform and summed.  Vanishes (to
    solver precision) when xi0 = -A(r) rdot.
    """
    xi0 = np.asarray(xi0, dtype=float).reshape(6)
    half_length = drag.geometry.half_length
    h_mat = link_drag_matrix(drag)
    wrench = -h_mat @ xi0
    for link_index in (1, 2):
        xi_link = link_twist(link_index, shape, xi0, rates, half_length)
        t = wrench_to_base(link_index, shape, half_length)
        wrench += t @ (-h_mat @ xi_link)
    return wrench


_MIRROR_TWIST_SIGNS = np.array([-1.0, -1.0, 1.0, -1.0, -1.0, 1.0])
# columns of A(mirror) in terms of A: (dtheta2, -dphi2, dtheta1, -dphi1)
_MIRROR_RATE_PERMUTATION = np.array(
    [
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ]
)


@dataclass(frozen=True)
class MirrorSymmetryReport:
    shape: RestrictedShape
    mirrored_shape: RestrictedShape
    max_deviation: float
    tolerance: float

    @property
    def symmetric(self) -> bool:
        return self.max_deviation < self.tolerance


def mirror_symmetry_check(
    shape: RestrictedShape, drag: DragParams, tolerance: float = 1e-10
) -> MirrorSymmetryReport:
    """Verify A(mirror(r)) == S A(r) Pi for the half-turn device symmetry.

    S flips the twist components odd under a half-turn about z, Pi the
    corresponding signed relabeling of the joint rates.
    """
    a_here = connection_matrix(shape, drag)
    a_mirror = connection_matrix(shape.mirrored(), drag)
    predicted = (_MIRROR_TWIST_SIGNS[:, None] * a_here) @ _MIRROR_RATE_PERMUTATION
    scale = max(1.0, float(np.abs(a_here).max()))
    deviation = float(np.abs(a_mirror - predicted).max()) / scale
    return MirrorSymmetryReport(shape, shape.mirrored(), deviation, tolerance)

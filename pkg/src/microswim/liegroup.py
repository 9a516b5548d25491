"""Rotation and rigid-motion primitives on SO(3)/SE(3).

Conventions used throughout the package:

* Twists (body velocities) and wrenches are 6-vectors ordered
  ``(vx, vy, vz, wx, wy, wz)`` -- translational part first.  Many robotics
  libraries use the opposite ordering; everything here is internally
  consistent with translation-first.
* ``rot_x/rot_y/rot_z`` build the elementary rotation matrices in the
  "coordinate transform" sign layout, e.g. ``rot_z(t)[0] == (cos t, sin t, 0)``.
  This is the transpose of the common active-rotation convention; the choice
  is deliberate and all downstream matrices are built from it, so the
  brute-force validator catches any mixed use.
* Angles are radians everywhere; degrees only exist at the CLI boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ORTHONORMALITY_TOL = 1e-9
_GIMBAL_TOL = 1e-8


def hat(v: np.ndarray) -> np.ndarray:
    """Skew-symmetric matrix of a 3-vector: hat(v) @ w == cross(v, w)."""
    a, b, c = np.asarray(v, dtype=float)
    return np.array([[0.0, -c, b], [c, 0.0, -a], [-b, a, 0.0]])


def unhat(m: np.ndarray) -> np.ndarray:
    """Inverse of :func:`hat`; expects a skew-symmetric matrix."""
    m = np.asarray(m, dtype=float)
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def rot_z(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_y(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def rot_x(alpha: float) -> np.ndarray:
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]])


def is_rotation(r: np.ndarray, tol: float = ORTHONORMALITY_TOL) -> bool:
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        return False
    if np.linalg.norm(r.T @ r - np.eye(3)) > tol:
        return False
    return abs(np.linalg.det(r) - 1.0) <= tol


def orthonormality_drift(r: np.ndarray) -> float:
    """Frobenius distance of R^T R from the identity."""
    return float(np.linalg.norm(r.T @ r - np.eye(3)))


def polar_project(r: np.ndarray) -> np.ndarray:
    """Nearest rotation matrix (polar factor) of a near-rotation matrix."""
    u, _, vt = np.linalg.svd(r)
    out = u @ vt
    if np.linalg.det(out) < 0:
        u[:, -1] = -u[:, -1]
        out = u @ vt
    return out


@dataclass(frozen=True)
class EulerZYX:
    """z-y-x Euler angles (gamma, beta, alpha) with a gimbal-lock marker.

    The defining relation is ``euler_zyx_compose(gamma, beta, alpha) == R``;
    at gimbal lock (|cos beta| < 1e-8) only gamma + alpha (or their
    difference) is determined and the gamma = 0 representative is returned
    with ``gimbal_locked`` set.
    """

    gamma: float
    beta: float
    alpha: float
    gimbal_locked: bool = False

    def as_array(self) -> np.ndarray:
        return np.array([self.gamma, self.beta, self.alpha])


def euler_zyx_compose(gamma: float, beta: float, alpha: float) -> np.ndarray:
    """Rotation from z-y-x Euler angles, product taken as Rx(a) @ Ry(b) @ Rz(g)."""
    return rot_x(alpha) @ rot_y(beta) @ rot_z(gamma)


def euler_zyx_extract(r: np.ndarray) -> EulerZYX:
    """Invert :func:`euler_zyx_compose`.

    With M = Rx(a) Ry(b) Rz(g) in this package's sign layout,
    M[0,2] = -sin(b), M[0,0] = cos(b) cos(g), M[1,2] = sin(a) cos(b).
    """
    m = np.asarray(r, dtype=float)
    sb = -m[0, 2]
    sb = min(1.0, max(-1.0, sb))
    beta = math.asin(sb)
    cb = math.cos(beta)
    if abs(cb) < _GIMBAL_TOL:
        # gamma and alpha degenerate; pick gamma = 0
        sign = 1.0 if sb > 0 else -1.0
        alpha = math.atan2(m[1, 0] * sign, m[2, 0] * sign)
        return EulerZYX(0.0, beta, alpha, gimbal_locked=True)
    gamma = math.atan2(m[0, 1], m[0, 0])
    alpha = math.atan2(m[1, 2], m[2, 2])
    return EulerZYX(gamma, beta, alpha)


@dataclass(frozen=True)
class Pose:
    """SE(3) element: ``rotation`` maps body coordinates to world coordinates."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=float)
        p = np.asarray(self.translation, dtype=float).reshape(3)
        if not is_rotation(r, tol=1e-6):
            raise ValueError("rotation is not orthonormal with det +1")
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", p)

    @staticmethod
    def identity() -> "Pose":
        return Pose(np.eye(3), np.zeros(3))

    def compose(self, other: "Pose") -> "Pose":
        return Pose(
            self.rotation @ other.rotation,
            self.translation + self.rotation @ other.translation,
        )

    def inverse(self) -> "Pose":
        rt = self.rotation.T
        return Pose(rt, -rt @ self.translation)

    def apply(self, point: np.ndarray) -> np.ndarray:
        return self.rotation @ np.asarray(point, dtype=float) + self.translation

    def matrix(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m


def so3_exp(omega: np.ndarray) -> np.ndarray:
    """Rodrigues formula; series branch below 1e-8 rotation angle."""
    omega = np.asarray(omega, dtype=float)
    angle = float(np.linalg.norm(omega))
    k = hat(omega)
    if angle < 1e-8:
        return np.eye(3) + k + 0.5 * (k @ k)
    return (
        np.eye(3)
        + (math.sin(angle) / angle) * k
        + ((1.0 - math.cos(angle)) / angle**2) * (k @ k)
    )


def so3_log(r: np.ndarray) -> np.ndarray:
    """Rotation vector of R; handles the small-angle and near-pi branches."""
    r = np.asarray(r, dtype=float)
    cos_angle = min(1.0, max(-1.0, 0.5 * (np.trace(r) - 1.0)))
    angle = math.acos(cos_angle)
    if angle < 1e-8:
        return unhat(0.5 * (r - r.T))
    if math.pi - angle < 1e-6:
        # axis from the dominant diagonal entry of (R + I)/2
        d = np.diag(r)
        i = int(np.argmax(d))
        axis = np.zeros(3)
        axis[i] = math.sqrt(max(0.0, (d[i] + 1.0) / 2.0))
        j, k = (i + 1) % 3, (i + 2) % 3
        axis[j] = r[i, j] / (2.0 * axis[i])
        axis[k] = r[i, k] / (2.0 * axis[i])
        return angle * axis / np.linalg.norm(axis)
    return angle / (2.0 * math.sin(angle)) * unhat(r - r.T)


def _so3_left_jacobian(omega: np.ndarray) -> np.ndarray:
    omega = np.asarray(omega, dtype=float)
    angle = float(np.linalg.norm(omega))
    k = hat(omega)
    if angle < 1e-8:
        return np.eye(3) + 0.5 * k + (k @ k) / 6.0
    return (
        np.eye(3)
        + ((1.0 - math.cos(angle)) / angle**2) * k
        + ((angle - math.sin(angle)) / angle**3) * (k @ k)
    )


def se3_exp(xi: np.ndarray, dt: float = 1.0) -> Pose:
    """Group exponential of a twist scaled by dt, as a pose increment.

    ``xi`` is (v; w); the returned pose satisfies the one-parameter group
    property se3_exp(xi, a) * se3_exp(xi, b) == se3_exp(xi, a + b).
    """
    if dt < 0:
        raise ValueError("dt must be non-negative")
    xi = np.asarray(xi, dtype=float).reshape(6)
    v = xi[:3] * dt
    w = xi[3:] * dt
    return Pose(so3_exp(w), _so3_left_jacobian(w) @ v)


def se3_log(pose: Pose) -> np.ndarray:
    """Twist xi with se3_exp(xi, 1) == pose."""
    w = so3_log(pose.rotation)
    v = np.linalg.solve(_so3_left_jacobian(w), pose.translation)
    return np.concatenate([v, w])


def pose_distance(a: Pose, b: Pose) -> float:
    """Mixed-unit metric (meters + radians) used for convergence studies."""
    dp = float(np.linalg.norm(a.translation - b.translation))
    dr = float(np.linalg.norm(so3_log(a.rotation.T @ b.rotation)))
    return dp + dr


def twist_matrix(xi: np.ndarray) -> np.ndarray:
    """4x4 matrix form of a twist: [[hat(w), v], [0, 0]]."""
    xi = np.asarray(xi, dtype=float).reshape(6)
    m = np.zeros((4, 4))
    m[:3, :3] = hat(xi[3:])
    m[:3, 3] = xi[:3]
    return m


def twist_unmatrix(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    return np.concatenate([m[:3, 3], unhat(m[:3, :3])])


def adjoint(rotation: np.ndarray, translation: np.ndarray) -> np.ndarray:
    """Twist transform of the pose (R, p): maps body twists into the parent frame.

    For (v; w) ordering the block form is [[R, hat(p) R], [0, R]].
    """
    r = np.asarray(rotation, dtype=float)
    p = np.asarray(translation, dtype=float).reshape(3)
    out = np.zeros((6, 6))
    out[:3, :3] = r
    out[:3, 3:] = hat(p) @ r
    out[3:, 3:] = r
    return out


def wrench_transform(r: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Wrench transport [[R^T, 0], [hat(p) R^T, R^T]].

    ``r`` is the rotation mapping parent coordinates into the wrench's frame
    (so R^T carries the wrench back) and ``p`` is the parent-frame position of
    the point the wrench is taken about.  The result re-expresses a (force;
    moment) pair about the parent origin in parent coordinates.
    """
    r = np.asarray(r, dtype=float)
    p = np.asarray(p, dtype=float).reshape(3)
    rt = r.T
    out = np.zeros((6, 6))
    out[:3, :3] = rt
    out[3:, :3] = hat(p) @ rt
    out[3:, 3:] = rt
    return out

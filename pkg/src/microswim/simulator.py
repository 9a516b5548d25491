"""Gait-driven SE(3) trajectory integration.

The shape is slaved to the gait (it is an input, not a state); each step
evaluates the connection at the gait's midpoint shape and advances the pose
by the group exponential, which keeps the pose on SE(3) by construction and
gives a second-order method.
"""

from __future__ import annotations

import io
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from microswim.connection import (
    RestrictedShape,
    RestrictedVelocity,
    connection_matrix,
)
from microswim.dragmodel import DragParams, reynolds_number
from microswim.liegroup import (
    EulerZYX,
    Pose,
    euler_zyx_extract,
    orthonormality_drift,
    polar_project,
    se3_exp,
)

logger = logging.getLogger("microswim.simulator")

CSV_HEADER = "t,x,y,z,alpha,beta,gamma,vx,vy,vz,wx,wy,wz,theta1,phi1,theta2,phi2"
_REORTHONORMALIZE_TOL = 1e-9


@dataclass(frozen=True)
class JointSinusoid:
    """angle(t) = offset + amplitude * sin(frequency * t + phase), radians."""

    amplitude: float
    frequency: float
    phase: float = 0.0
    offset: float = 0.0

    def angle(self, t: float) -> float:
        return self.offset + self.amplitude * math.sin(self.frequency * t + self.phase)

    def rate(self, t: float) -> float:
        return self.amplitude * self.frequency * math.cos(self.frequency * t + self.phase)


@dataclass(frozen=True)
class SinusoidGait:
    theta1: JointSinusoid
    phi1: JointSinusoid
    theta2: JointSinusoid
    phi2: JointSinusoid

    def joints(self) -> tuple[JointSinusoid, ...]:
        return (self.theta1, self.phi1, self.theta2, self.phi2)

    def shape(self, t: float) -> RestrictedShape:
        return RestrictedShape(*(j.angle(t) for j in self.joints()))

    def rates(self, t: float) -> RestrictedVelocity:
        return RestrictedVelocity(*(j.rate(t) for j in self.joints()))

    @property
    def max_joint_speed(self) -> float:
        return max(abs(j.amplitude * j.frequency) for j in self.joints())

    @property
    def period(self) -> float | None:
        """Common period if every joint shares one frequency, else None."""
        freqs = {abs(j.frequency) for j in self.joints() if j.amplitude != 0.0}
        if len(freqs) != 1:
            return None
        f = freqs.pop()
        return 2.0 * math.pi / f if f > 0 else None


def default_gait() -> SinusoidGait:
    """Out-of-plane rowing gait shipped with the default configuration.

    theta joints sweep +-20 deg in antiphase, phi joints +-5 deg a quarter
    period apart, all at 0.025 rad/s.
    """
    deg = math.pi / 180.0
    w = 1.0 / 40.0
    return SinusoidGait(
        theta1=JointSinusoid(20.0 * deg, w),
        phi1=JointSinusoid(5.0 * deg, w, phase=math.pi / 2.0),
        theta2=JointSinusoid(20.0 * deg, w, phase=math.pi),
        phi2=JointSinusoid(5.0 * deg, w),
    )


def planar_gait() -> SinusoidGait:
    """In-plane variant of :func:`default_gait` (phi joints frozen at zero)."""
    deg = math.pi / 180.0
    w = 1.0 / 40.0
    return SinusoidGait(
        theta1=JointSinusoid(20.0 * deg, w),
        phi1=JointSinusoid(0.0, w),
        theta2=JointSinusoid(20.0 * deg, w, phase=math.pi),
        phi2=JointSinusoid(0.0, w),
    )


def reciprocal_gait() -> SinusoidGait:
    """All joints in phase: the shape retraces one segment back and forth.

    Useful as a scallop-theorem control; any net displacement it produces is
    pure integrator error.  The common phase is nonzero so the retrace is not
    aligned with the step grid and the error is visible (and second order)
    rather than cancelling identically.
    """
    deg = math.pi / 180.0
    w = 1.0 / 40.0
    phase = 0.7
    return SinusoidGait(
        theta1=JointSinusoid(20.0 * deg, w, phase=phase),
        phi1=JointSinusoid(5.0 * deg, w, phase=phase),
        theta2=JointSinusoid(-20.0 * deg, w, phase=phase),
        phi2=JointSinusoid(5.0 * deg, w, phase=phase),
    )


def gait_eval(gait: SinusoidGait, t: float) -> tuple[RestrictedShape, RestrictedVelocity]:
    """Shape and exact analytic shape velocity at time t."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return gait.shape(t), gait.rates(t)


@dataclass(frozen=True)
class SwimmerState:
    t: float
    pose: Pose
    shape: RestrictedShape
    body_velocity: np.ndarray = field(default_factory=lambda: np.zeros(6))


def initial_state(gait: SinusoidGait, drag: DragParams) -> SwimmerState:
    shape, rates = gait_eval(gait, 0.0)
    xi0 = -connection_matrix(shape, drag) @ rates.as_array()
    return SwimmerState(0.0, Pose.identity(), shape, xi0)


def step(state: SwimmerState, gait: SinusoidGait, drag: DragParams, dt: float) -> SwimmerState:
    """One midpoint step: pose times exp(dt * xi0(midpoint shape))."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    t_mid = state.t + 0.5 * dt
    shape_mid, rates_mid = gait_eval(gait, t_mid)
    xi0 = -connection_matrix(shape_mid, drag) @ rates_mid.as_array()
    pose = state.pose.compose(se3_exp(xi0, dt))
    if orthonormality_drift(pose.rotation) > _REORTHONORMALIZE_TOL:
        pose = Pose(polar_project(pose.rotation), pose.translation)
    t_next = state.t + dt
    return SwimmerState(t_next, pose, gait.shape(t_next), xi0)


@dataclass
class Trajectory:
    """Uniform-grid simulation record.

    ``body_velocity[k]`` is the instantaneous -A(r(t_k)) rdot(t_k); the Euler
    angles are the z-y-x extraction of each pose (gimbal flags kept aside).
    """

    times: np.ndarray
    positions: np.ndarray  # (N, 3)
    rotations: np.ndarray  # (N, 3, 3)
    body_velocities: np.ndarray  # (N, 6)
    shapes: np.ndarray  # (N, 4) theta1, phi1, theta2, phi2
    euler_angles: np.ndarray  # (N, 3) gamma, beta, alpha
    gimbal_flags: np.ndarray  # (N,) bool

    def __len__(self) -> int:
        return len(self.times)

    def pose(self, k: int) -> Pose:
        return Pose(self.rotations[k], self.positions[k])

    def final_pose(self) -> Pose:
        return self.pose(len(self) - 1)

    def net_displacement(self) -> float:
        return float(np.linalg.norm(self.positions[-1] - self.positions[0]))

    def drag_centroid(self, k: int, half_length: float) -> np.ndarray:
        """World position of the mean of the three link centers at sample k."""
        from microswim.connection import RestrictedShape, link_frame

        pose = self.pose(k)
        shape = RestrictedShape(*self.shapes[k])
        total = pose.translation.copy()
        for link_index in (1, 2):
            _, _, center = link_frame(link_index, shape, half_length)
            total += pose.apply(center)
        return total / 3.0


def simulate(
    gait: SinusoidGait,
    drag: DragParams,
    duration: float,
    dt: float,
    initial_pose: Pose | None = None,
    fluid_density: float | None = None,
) -> Trajectory:
    """Fixed-step run of :func:`step`, recording every sample.

    ``duration`` must be a whole number of steps (within 1e-9 relative).
    When a fluid density is supplied, warns if the gait's implied Reynolds
    number leaves the creeping-flow regime (> 1e-2).
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if duration < 0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    if duration > 0 and dt > duration:
        raise ValueError(f"dt={dt} exceeds duration={duration}")
    n_steps = int(round(duration / dt)) if duration > 0 else 0
    if abs(n_steps * dt - duration) > 1e-9 * max(1.0, duration):
        raise ValueError(
            f"duration {duration} is not a whole number of steps of dt={dt}"
        )

    if fluid_density is not None:
        tip_speed = gait.max_joint_speed * 2.0 * drag.geometry.half_length
        re = reynolds_number(
            tip_speed, 2.0 * drag.geometry.half_length, drag.fluid, fluid_density
        )
        if re > 1e-2:
            logger.warning(
                "gait implies Reynolds number %.3g > 1e-2; "
                "the creeping-flow model is questionable here",
                re,
            )

    state = initial_state(gait, drag)
    if initial_pose is not None:
        state = SwimmerState(state.t, initial_pose, state.shape, state.body_velocity)

    n = n_steps + 1
    times = np.zeros(n)
    positions = np.zeros((n, 3))
    rotations = np.zeros((n, 3, 3))
    velocities = np.zeros((n, 6))
    shapes = np.zeros((n, 4))
    eulers = np.zeros((n, 3))
    gimbal = np.zeros(n, dtype=bool)

    def record(k: int, st: SwimmerState):
        times[k] = st.t
        positions[k] = st.pose.translation
        rotations[k] = st.pose.rotation
        shape_k, rates_k = gait_eval(gait, st.t)
        velocities[k] = -connection_matrix(shape_k, drag) @ rates_k.as_array()
        shapes[k] = shape_k.angles()
        angles: EulerZYX = euler_zyx_extract(st.pose.rotation)
        eulers[k] = angles.as_array()
        gimbal[k] = angles.gimbal_locked

    record(0, state)
    for k in range(1, n):
        state = step(state, gait, drag, dt)
        record(k, state)
    return Trajectory(times, positions, rotations, velocities, shapes, eulers, gimbal)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def trajectory_to_csv(traj: Trajectory) -> str:
    """CSV with the fixed header; floats printed to 17 significant digits."""
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for k in range(len(traj)):
        row = (
            [traj.times[k]]
            + list(traj.positions[k])
            + [traj.euler_angles[k][2], traj.euler_angles[k][1], traj.euler_angles[k][0]]
            + list(traj.body_velocities[k])
            + list(traj.shapes[k])
        )
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def trajectory_export(traj: Trajectory, format: str = "csv", **svg_options) -> dict[str, bytes]:
    """Serialize a trajectory, keyed by output filename.

    ``csv`` gives {"trajectory.csv": ...}; ``svg`` one entry per figure.
    """
    if format == "csv":
        return {"trajectory.csv": trajectory_to_csv(traj).encode()}
    if format == "svg":
        from microswim.svgplot import trajectory_figures

        return {
            f"fig_{stem}.svg": text.encode()
            for stem, text in trajectory_figures(traj, **svg_options).items()
        }
    raise ValueError(f"unsupported export format {format!r}; use csv or svg")

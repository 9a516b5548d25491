"""microswim: a three-link low-Reynolds-number swimmer with ball-jointed limbs.

Evaluates the local connection form mapping joint rates to the base link's
body velocity, integrates gait-driven SE(3) trajectories, analyzes local
weak controllability, and validates everything against a discretized-rod
brute-force drag model.
"""

from microswim._backend import BACKEND
from microswim.connection import (
    ConnectionForm,
    FullShape,
    FullVelocity,
    RestrictedShape,
    RestrictedVelocity,
    local_connection,
)
from microswim.dragmodel import (
    DragCoefficients,
    DragParams,
    FluidParams,
    LinkGeometry,
    drag_coefficients,
    link_drag_matrix,
    reynolds_number,
)
from microswim.liegroup import Pose, se3_exp
from microswim.oracle import DiscretizationParams, net_wrench_numeric, oracle_connection
from microswim.simulator import SinusoidGait, Trajectory, default_gait, simulate

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConnectionForm",
    "DiscretizationParams",
    "DragCoefficients",
    "DragParams",
    "FluidParams",
    "FullShape",
    "FullVelocity",
    "LinkGeometry",
    "Pose",
    "RestrictedShape",
    "RestrictedVelocity",
    "SinusoidGait",
    "Trajectory",
    "default_gait",
    "drag_coefficients",
    "link_drag_matrix",
    "local_connection",
    "net_wrench_numeric",
    "oracle_connection",
    "reynolds_number",
    "se3_exp",
    "simulate",
    "__version__",
]

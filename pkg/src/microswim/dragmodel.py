"""Slender-body viscous drag: per-length coefficients and the 6x6 link matrix.

Coefficient convention
----------------------
The per-unit-length coefficients are

* ``c_par  = 2 pi mu / ln(2 L / a)``  (force per length per longitudinal speed)
* ``c_perp = 2 c_par``                (lateral; the factor 2 is what makes
  anisotropic rowing produce net thrust)
* ``k_r    = 4 pi mu a**2``           (spin torque per length per rad/s,
  rotating-cylinder value; overridable)

The aggregated per-link matrix is written in a "tabulated" form whose entries
are ``force_scale`` times (c_par L, 2 c_par L, 2 c_par L, k_r L, 2/3 c_par L^3,
2/3 c_par L^3).  At the default ``force_scale = 2`` those equal the plain
integrals of (c_par, c_perp, k_r) over the rod length, which is exactly what
the segment-sum validator computes; the connection form is invariant to the
scale, only wrench magnitudes carry it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class SlendernessError(ValueError):
    """Raised when the geometry is too thick for slender-body drag theory."""


@dataclass(frozen=True)
class FluidParams:
    """Newtonian fluid, characterized by its dynamic viscosity in Pa s."""

    viscosity: float

    def __post_init__(self):
        if not (self.viscosity > 0 and math.isfinite(self.viscosity)):
            raise ValueError(f"viscosity must be positive, got {self.viscosity}")


@dataclass(frozen=True)
class LinkGeometry:
    """Rigid circular rod of full length 2*half_length and radius ``radius``."""

    half_length: float
    radius: float

    def __post_init__(self):
        if not (self.half_length > 0 and math.isfinite(self.half_length)):
            raise ValueError(f"half_length must be positive, got {self.half_length}")
        if not (0 < self.radius < self.half_length):
            raise ValueError(
                f"radius must lie in (0, half_length), got {self.radius}"
            )

    @staticmethod
    def from_slenderness(half_length: float, slenderness_ratio: float) -> "LinkGeometry":
        return LinkGeometry(half_length, slenderness_ratio * half_length)

    @property
    def slenderness_ratio(self) -> float:
        return self.radius / self.half_length


@dataclass(frozen=True)
class DragCoefficients:
    """Per-unit-length drag coefficients; c_perp == 2 * c_par always."""

    c_par: float
    c_perp: float
    k_r: float

    def __post_init__(self):
        if min(self.c_par, self.c_perp, self.k_r) <= 0:
            raise ValueError("drag coefficients must be positive")
        if abs(self.c_perp - 2.0 * self.c_par) > 1e-12 * self.c_par:
            raise ValueError("c_perp must equal 2 * c_par exactly")


def drag_coefficients(
    fluid: FluidParams,
    geometry: LinkGeometry,
    spin_coefficient: float | None = None,
) -> DragCoefficients:
    """Slender-body per-length coefficients for a rod in Stokes flow."""
    log_arg = 2.0 * geometry.half_length / geometry.radius
    log_val = math.log(log_arg)
    if log_val <= 1.0:
        raise SlendernessError(
            f"ln(2L/a) = ln({log_arg:.4g}) <= 1; body is not slender enough"
        )
    c_par = 2.0 * math.pi * fluid.viscosity / log_val
    k_r = (
        spin_coefficient
        if spin_coefficient is not None
        else 4.0 * math.pi * fluid.viscosity * geometry.radius**2
    )
    if k_r <= 0:
        raise ValueError("spin coefficient must be positive")
    return DragCoefficients(c_par=c_par, c_perp=2.0 * c_par, k_r=k_r)


@dataclass(frozen=True)
class DragParams:
    """Everything the force model needs: fluid, geometry, and convention knobs."""

    fluid: FluidParams
    geometry: LinkGeometry
    spin_coefficient: float | None = None
    force_scale: float = 2.0

    def __post_init__(self):
        if not (self.force_scale > 0 and math.isfinite(self.force_scale)):
            raise ValueError(f"force_scale must be positive, got {self.force_scale}")

    @property
    def coefficients(self) -> DragCoefficients:
        return drag_coefficients(self.fluid, self.geometry, self.spin_coefficient)

    def per_length(self) -> tuple[float, float, float]:
        """Effective (longitudinal, lateral, spin) coefficients per unit length.

        These carry the force_scale convention and are shared by the analytic
        matrix and the segment-sum validator, so the two always integrate to
        identical wrenches.  At the default scale they reduce to
        (c_par, c_perp, k_r).
        """
        c = self.coefficients
        s = 0.5 * self.force_scale
        return (s * c.c_par, 2.0 * s * c.c_par, s * c.k_r)

    def with_isotropic_drag(self) -> "IsotropicDragParams":
        return IsotropicDragParams(
            fluid=self.fluid,
            geometry=self.geometry,
            spin_coefficient=self.spin_coefficient,
            force_scale=self.force_scale,
        )


@dataclass(frozen=True)
class IsotropicDragParams(DragParams):
    """Degenerate control case: lateral coefficient forced equal to longitudinal.

    Kills the drag anisotropy that net propulsion relies on; used by negative
    controls and the controllability degeneracy checks.
    """

    def per_length(self) -> tuple[float, float, float]:
        c = self.coefficients
        s = 0.5 * self.force_scale
        # both translational coefficients pinned to the lateral value
        return (2.0 * s * c.c_par, 2.0 * s * c.c_par, s * c.k_r)


def link_drag_matrix(params: DragParams) -> np.ndarray:
    """6x6 diagonal map from a link's body twist to the drag wrench magnitude.

    Entries follow the tabulated form described in the module docstring; the
    actual wrench on a link moving with twist xi is -H @ xi.
    """
    c_long, c_lat, c_spin = params.per_length()
    length = params.geometry.half_length
    return np.diag(
        [
            2.0 * length * c_long,
            2.0 * length * c_lat,
            2.0 * length * c_lat,
            2.0 * length * c_spin,
            (2.0 / 3.0) * length**3 * c_lat,
            (2.0 / 3.0) * length**3 * c_lat,
        ]
    )


def reynolds_number(
    speed: float, length: float, fluid: FluidParams, density: float
) -> float:
    """Re = rho * u * l / mu."""
    if speed < 0 or length <= 0 or density <= 0:
        raise ValueError("speed must be >= 0; length and density positive")
    return density * speed * length / fluid.viscosity

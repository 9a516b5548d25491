"""Run configuration: JSON ingestion, validation, unit conversion.

Angles may be given as plain numbers (radians) or as tagged objects
``{"value": 20, "unit": "deg"}``; conversion happens here and nowhere else.
Validation errors name the offending field path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from microswim.connection import RestrictedShape
from microswim.dragmodel import DragParams, FluidParams, LinkGeometry
from microswim.simulator import JointSinusoid, SinusoidGait

_DEG = math.pi / 180.0
JOINT_NAMES = ("theta1", "phi1", "theta2", "phi2")


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"config field '{path}': {message}")


def _angle(value, path: str) -> float:
    if isinstance(value, dict):
        unknown = set(value) - {"value", "unit"}
        if unknown:
            raise ConfigError(path, f"unknown keys {sorted(unknown)}")
        if "value" not in value:
            raise ConfigError(path, "tagged angle needs a 'value'")
        raw = value["value"]
        unit = value.get("unit", "rad")
        if unit not in ("rad", "deg"):
            raise ConfigError(f"{path}.unit", f"must be 'rad' or 'deg', got {unit!r}")
    else:
        raw, unit = value, "rad"
    if not isinstance(raw, (int, float)) or isinstance(raw, bool):
        raise ConfigError(path, f"expected a number, got {type(raw).__name__}")
    if not math.isfinite(raw):
        raise ConfigError(path, "must be finite")
    return float(raw) * (_DEG if unit == "deg" else 1.0)


def _number(
    value, path: str, positive: bool = False, nonnegative: bool = False
) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(path, f"expected a number, got {type(value).__name__}")
    if not math.isfinite(value):
        raise ConfigError(path, "must be finite")
    if positive and value <= 0:
        raise ConfigError(path, f"must be positive, got {value}")
    if nonnegative and value < 0:
        raise ConfigError(path, f"must be >= 0, got {value}")
    return float(value)


def _integer(value, path: str, minimum: int | None = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(path, f"expected an integer, got {type(value).__name__}")
    if minimum is not None and value < minimum:
        raise ConfigError(path, f"must be >= {minimum}, got {value}")
    return value


def _section(data: dict, name: str, allowed: set[str]) -> dict:
    sec = data.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(name, "expected an object")
    unknown = set(sec) - allowed
    if unknown:
        raise ConfigError(name, f"unknown keys {sorted(unknown)}")
    return sec


@dataclass(frozen=True)
class RunConfig:
    viscosity: float = 0.95
    density: float = 1260.0
    half_length: float = 0.1
    radius: float = 0.01
    spin_coefficient: float | None = None
    force_scale: float = 2.0
    isotropic: bool = False
    gait: SinusoidGait = field(
        default_factory=lambda: SinusoidGait(
            JointSinusoid(20.0 * _DEG, 0.025),
            JointSinusoid(5.0 * _DEG, 0.025, phase=math.pi / 2.0),
            JointSinusoid(20.0 * _DEG, 0.025, phase=math.pi),
            JointSinusoid(5.0 * _DEG, 0.025),
        )
    )
    dt: float = 0.1
    duration: float = 840.0
    analysis_shape: RestrictedShape = field(default_factory=RestrictedShape.collinear)
    depth: int = 3
    rank_tolerance: float = 1e-9
    span_tolerance: float = 1e-8
    fd_step: float = 1e-5
    validation_shapes: int = 200
    validation_segments: int = 2000
    validation_tolerance: float = 1e-6
    validation_workers: int = 1
    theta_range: float = 2.0
    phi_range: float = 1.2
    svg_width: int = 900
    svg_height: int = 320

    def drag_params(self) -> DragParams:
        params = DragParams(
            FluidParams(self.viscosity),
            LinkGeometry(self.half_length, self.radius),
            spin_coefficient=self.spin_coefficient,
            force_scale=self.force_scale,
        )
        return params.with_isotropic_drag() if self.isotropic else params


def _parse_joint(sec: dict, name: str) -> JointSinusoid:
    joint = sec.get(name)
    if joint is None:
        raise ConfigError(f"gait.{name}", "missing joint definition")
    if not isinstance(joint, dict):
        raise ConfigError(f"gait.{name}", "expected an object")
    unknown = set(joint) - {"amplitude", "frequency", "phase", "offset"}
    if unknown:
        raise ConfigError(f"gait.{name}", f"unknown keys {sorted(unknown)}")
    if "frequency" not in joint:
        raise ConfigError(f"gait.{name}.frequency", "missing (rad/s)")
    return JointSinusoid(
        amplitude=_angle(joint.get("amplitude", 0.0), f"gait.{name}.amplitude"),
        frequency=_number(joint["frequency"], f"gait.{name}.frequency"),
        phase=_angle(joint.get("phase", 0.0), f"gait.{name}.phase"),
        offset=_angle(joint.get("offset", 0.0), f"gait.{name}.offset"),
    )


def parse_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("<root>", "top level must be a JSON object")
    unknown = set(data) - {
        "fluid",
        "geometry",
        "drag",
        "gait",
        "integration",
        "analysis",
        "validation",
        "output",
    }
    if unknown:
        raise ConfigError("<root>", f"unknown sections {sorted(unknown)}")

    defaults = RunConfig()
    fluid = _section(data, "fluid", {"viscosity", "density"})
    viscosity = _number(
        fluid.get("viscosity", defaults.viscosity), "fluid.viscosity", positive=True
    )
    density = _number(
        fluid.get("density", defaults.density), "fluid.density", positive=True
    )

    geom = _section(data, "geometry", {"half_length", "radius", "slenderness_ratio"})
    half_length = _number(
        geom.get("half_length", defaults.half_length),
        "geometry.half_length",
        positive=True,
    )
    if "radius" in geom and "slenderness_ratio" in geom:
        raise ConfigError("geometry", "give either radius or slenderness_ratio, not both")
    if "radius" in geom:
        radius = _number(geom["radius"], "geometry.radius", positive=True)
    else:
        sr = _number(
            geom.get("slenderness_ratio", defaults.radius / defaults.half_length),
            "geometry.slenderness_ratio",
            positive=True,
        )
        radius = sr * half_length
    if radius >= half_length:
        raise ConfigError("geometry.radius", "must be smaller than half_length")

    dragsec = _section(data, "drag", {"spin_coefficient", "force_scale", "isotropic"})
    spin = dragsec.get("spin_coefficient")
    if spin is not None:
        spin = _number(spin, "drag.spin_coefficient", positive=True)
    force_scale = _number(
        dragsec.get("force_scale", defaults.force_scale),
        "drag.force_scale",
        positive=True,
    )
    isotropic = dragsec.get("isotropic", False)
    if not isinstance(isotropic, bool):
        raise ConfigError("drag.isotropic", "expected true or false")

    if "gait" in data:
        gaitsec = _section(data, "gait", set(JOINT_NAMES))
        gait = SinusoidGait(*(_parse_joint(gaitsec, n) for n in JOINT_NAMES))
    else:
        gait = defaults.gait

    integ = _section(data, "integration", {"dt", "duration"})
    dt = _number(integ.get("dt", defaults.dt), "integration.dt", positive=True)
    duration = _number(
        integ.get("duration", defaults.duration),
        "integration.duration",
        nonnegative=True,
    )
    if duration > 0 and dt > duration:
        raise ConfigError("integration.dt", f"dt={dt} exceeds duration={duration}")

    analysis = _section(
        data,
        "analysis",
        {"shape", "depth", "rank_tolerance", "span_tolerance", "fd_step"},
    )
    if "shape" in analysis:
        raw_shape = analysis["shape"]
        if not isinstance(raw_shape, list) or len(raw_shape) != 4:
            raise ConfigError(
                "analysis.shape", "expected [theta1, phi1, theta2, phi2]"
            )
        shape = RestrictedShape(
            *(
                _angle(v, f"analysis.shape[{i}]")
                for i, v in enumerate(raw_shape)
            )
        )
    else:
        shape = defaults.analysis_shape
    depth = _integer(analysis.get("depth", defaults.depth), "analysis.depth", 1)
    rank_tol = _number(
        analysis.get("rank_tolerance", defaults.rank_tolerance),
        "analysis.rank_tolerance",
        positive=True,
    )
    span_tol = _number(
        analysis.get("span_tolerance", defaults.span_tolerance),
        "analysis.span_tolerance",
        positive=True,
    )
    fd_step = _number(
        analysis.get("fd_step", defaults.fd_step), "analysis.fd_step", positive=True
    )

    valsec = _section(
        data,
        "validation",
        {"shapes", "segments", "tolerance", "workers", "theta_range", "phi_range"},
    )
    v_shapes = _integer(
        valsec.get("shapes", defaults.validation_shapes), "validation.shapes", 1
    )
    v_segments = _integer(
        valsec.get("segments", defaults.validation_segments), "validation.segments", 10
    )
    v_tol = _number(
        valsec.get("tolerance", defaults.validation_tolerance),
        "validation.tolerance",
        positive=True,
    )
    v_workers = _integer(
        valsec.get("workers", defaults.validation_workers), "validation.workers", 1
    )
    theta_range = _number(
        valsec.get("theta_range", defaults.theta_range),
        "validation.theta_range",
        positive=True,
    )
    phi_range = _number(
        valsec.get("phi_range", defaults.phi_range),
        "validation.phi_range",
        positive=True,
    )

    outsec = _section(data, "output", {"svg_width", "svg_height"})
    svg_w = _integer(outsec.get("svg_width", defaults.svg_width), "output.svg_width", 100)
    svg_h = _integer(
        outsec.get("svg_height", defaults.svg_height), "output.svg_height", 100
    )

    return RunConfig(
        viscosity=viscosity,
        density=density,
        half_length=half_length,
        radius=radius,
        spin_coefficient=spin,
        force_scale=force_scale,
        isotropic=isotropic,
        gait=gait,
        dt=dt,
        duration=duration,
        analysis_shape=shape,
        depth=depth,
        rank_tolerance=rank_tol,
        span_tolerance=span_tol,
        fd_step=fd_step,
        validation_shapes=v_shapes,
        validation_segments=v_segments,
        validation_tolerance=v_tol,
        validation_workers=v_workers,
        theta_range=theta_range,
        phi_range=phi_range,
        svg_width=svg_w,
        svg_height=svg_h,
    )


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"invalid JSON: {exc}") from exc
    return parse_config(data)

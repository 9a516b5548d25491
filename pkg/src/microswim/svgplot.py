"""Minimal SVG line plots (no plotting toolchain, deterministic output)."""

from __future__ import annotations

import numpy as np

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 62, 14, 30, 40


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = np.linspace(lo, hi, count)
    return [float(v) for v in raw]


def _fmt(x: float) -> str:
    return f"{x:.4g}"


def line_plot(
    x: np.ndarray,
    series: list[tuple[str, np.ndarray]],
    title: str,
    xlabel: str,
    ylabel: str,
    width: int = 900,
    height: int = 320,
) -> str:
    """One SVG figure with shared x axis, legend and tick labels."""
    x = np.asarray(x, dtype=float)
    ys = [np.asarray(y, dtype=float) for _, y in series]
    x_lo, x_hi = (float(x.min()), float(x.max())) if x.size else (0.0, 1.0)
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0
    all_y = np.concatenate([y for y in ys if y.size]) if ys else np.zeros(1)
    y_lo, y_hi = float(all_y.min()), float(all_y.max())
    if y_hi <= y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = width - _MARGIN_L - _MARGIN_R
    plot_h = height - _MARGIN_T - _MARGIN_B

    def px(v: float) -> float:
        return _MARGIN_L + (v - x_lo) / (x_hi - x_lo) * plot_w

    def py(v: float) -> float:
        return _MARGIN_T + (y_hi - v) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{title}</text>',
    ]
    # axes box and ticks
    parts.append(
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#444" stroke-width="1"/>'
    )
    for tv in _ticks(x_lo, x_hi):
        xp = px(tv)
        parts.append(
            f'<line x1="{xp:.1f}" y1="{_MARGIN_T + plot_h}" x2="{xp:.1f}" '
            f'y2="{_MARGIN_T + plot_h + 4}" stroke="#444"/>'
        )
        parts.append(
            f'<text x="{xp:.1f}" y="{_MARGIN_T + plot_h + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{_fmt(tv)}</text>'
        )
    for tv in _ticks(y_lo, y_hi):
        yp = py(tv)
        parts.append(
            f'<line x1="{_MARGIN_L - 4}" y1="{yp:.1f}" x2="{_MARGIN_L}" '
            f'y2="{yp:.1f}" stroke="#444"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 6}" y="{yp + 3:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{_fmt(tv)}</text>'
        )
    parts.append(
        f'<text x="{_MARGIN_L + plot_w / 2:.1f}" y="{height - 8}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="11">{xlabel}</text>'
    )
    parts.append(
        f'<text x="14" y="{_MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="11" '
        f'transform="rotate(-90 14 {_MARGIN_T + plot_h / 2:.1f})">{ylabel}</text>'
    )
    # polylines
    for k, (label, y) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        pts = " ".join(
            f"{px(float(xi)):.2f},{py(float(yi)):.2f}" for xi, yi in zip(x, y)
        )
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>'
        )
        lx = _MARGIN_L + plot_w - 110
        ly = _MARGIN_T + 14 + 14 * k
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{lx + 22}" y="{ly}" font-family="sans-serif" '
            f'font-size="10">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def trajectory_figures(traj, width: int = 900, height: int = 320) -> dict[str, str]:
    """The standard figure set for one run, keyed by file stem."""
    t = traj.times
    shapes = traj.shapes
    vel = traj.body_velocities
    joint_rate = np.gradient(shapes, t, axis=0) if len(t) > 1 else np.zeros_like(shapes)
    figs = {
        "joint_positions": line_plot(
            t,
            [
                ("theta1", shapes[:, 0]),
                ("phi1", shapes[:, 1]),
                ("theta2", shapes[:, 2]),
                ("phi2", shapes[:, 3]),
            ],
            "Joint positions",
            "t [s]",
            "angle [rad]",
            width,
            height,
        ),
        "joint_velocities": line_plot(
            t,
            [
                ("dtheta1", joint_rate[:, 0]),
                ("dphi1", joint_rate[:, 1]),
                ("dtheta2", joint_rate[:, 2]),
                ("dphi2", joint_rate[:, 3]),
            ],
            "Joint velocities",
            "t [s]",
            "rate [rad/s]",
            width,
            height,
        ),
        "base_translational_velocity": line_plot(
            t,
            [("vx", vel[:, 0]), ("vy", vel[:, 1]), ("vz", vel[:, 2])],
            "Base link translational velocity (body frame)",
            "t [s]",
            "v [m/s]",
            width,
            height,
        ),
        "base_angular_velocity": line_plot(
            t,
            [("wx", vel[:, 3]), ("wy", vel[:, 4]), ("wz", vel[:, 5])],
            "Base link angular velocity (body frame)",
            "t [s]",
            "w [rad/s]",
            width,
            height,
        ),
        "base_translation": line_plot(
            t,
            [
                ("x", traj.positions[:, 0]),
                ("y", traj.positions[:, 1]),
                ("z", traj.positions[:, 2]),
            ],
            "Base link translation",
            "t [s]",
            "position [m]",
            width,
            height,
        ),
        "base_euler_angles": line_plot(
            t,
            [
                ("alpha", traj.euler_angles[:, 2]),
                ("beta", traj.euler_angles[:, 1]),
                ("gamma", traj.euler_angles[:, 0]),
            ],
            "Base link orientation (z-y-x Euler angles)",
            "t [s]",
            "angle [rad]",
            width,
            height,
        ),
    }
    return figs

"""Command-line front end.

Subcommands: ``connection``, ``simulate``, ``controllability``, ``validate``.
Common flags: ``--config`` (JSON, defaults built in), ``--out`` (output
directory), ``--seed``, ``--format``.  Log level comes from MICROSWIM_LOG.
Output files are written atomically and removed again if the command fails;
every validation or numerical error exits nonzero.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from microswim import _backend
from microswim.config import ConfigError, RunConfig, load_config
from microswim.connection import (
    RESTRICTED_RATE_LABELS,
    TWIST_LABELS,
    SingularResistanceError,
    local_connection,
)
from microswim.controllability import (
    connection_rank,
    filtration,
    planar_decomposition_report,
)
from microswim.dragmodel import reynolds_number
from microswim.oracle import run_validation
from microswim.simulator import simulate, trajectory_to_csv
from microswim.svgplot import trajectory_figures

logger = logging.getLogger("microswim.cli")


class _OutputWriter:
    """Atomic file writes with rollback of everything written on failure."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.written: list[Path] = []

    def write(self, name: str, text: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        target = self.out_dir / name
        tmp = target.with_suffix(target.suffix + ".tmp")
        tmp.write_text(text)
        os.replace(tmp, target)
        self.written.append(target)
        return target

    def rollback(self):
        for path in self.written:
            try:
                path.unlink()
            except OSError:
                pass
        self.written.clear()


def _json_dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _print_matrix(matrix: np.ndarray, col_labels) -> None:
    widths = 13
    print(" " * 5 + "".join(f"{c:>{widths}}" for c in col_labels))
    for label, row in zip(TWIST_LABELS, matrix):
        print(f"{label:>4} " + "".join(f"{v:>{widths}.6g}" for v in row))


def cmd_connection(cfg: RunConfig, writer: _OutputWriter, fmt: str, seed: int) -> int:
    drag = cfg.drag_params()
    form = local_connection(cfg.analysis_shape, drag)
    rank = connection_rank(cfg.analysis_shape, drag, cfg.rank_tolerance)
    print(
        "local connection A(r) at shape "
        f"(theta1={cfg.analysis_shape.theta1:.6g}, phi1={cfg.analysis_shape.phi1:.6g}, "
        f"theta2={cfg.analysis_shape.theta2:.6g}, phi2={cfg.analysis_shape.phi2:.6g}) "
        "[xi0 = -A rdot]"
    )
    _print_matrix(form.matrix, RESTRICTED_RATE_LABELS)
    print(f"rank (tol {cfg.rank_tolerance:g}): {rank}")
    if fmt == "json":
        payload = {
            "shape": list(cfg.analysis_shape.angles()),
            "matrix": form.matrix.tolist(),
            "row_labels": list(TWIST_LABELS),
            "column_labels": list(RESTRICTED_RATE_LABELS),
            "rank": rank,
            "rank_tolerance": cfg.rank_tolerance,
        }
        path = writer.write("connection.json", _json_dumps(payload))
        print(f"wrote {path}")
    return 0


def cmd_simulate(cfg: RunConfig, writer: _OutputWriter, fmt: str, seed: int) -> int:
    drag = cfg.drag_params()
    traj = simulate(
        cfg.gait, drag, cfg.duration, cfg.dt, fluid_density=cfg.density
    )
    path = writer.write("trajectory.csv", trajectory_to_csv(traj))
    print(f"wrote {path} ({len(traj)} samples)")
    if fmt == "svg":
        for stem, svg in trajectory_figures(traj, cfg.svg_width, cfg.svg_height).items():
            print(f"wrote {writer.write(f'fig_{stem}.svg', svg)}")
    elif fmt == "json":
        summary = {
            "samples": len(traj),
            "duration": cfg.duration,
            "dt": cfg.dt,
            "net_displacement": traj.net_displacement(),
            "final_position": traj.positions[-1].tolist(),
            "final_euler_gamma_beta_alpha": traj.euler_angles[-1].tolist(),
        }
        print(f"wrote {writer.write('simulation_summary.json', _json_dumps(summary))}")
    print(f"net displacement: {traj.net_displacement():.6g} m")
    return 0


def cmd_controllability(cfg: RunConfig, writer: _OutputWriter, fmt: str, seed: int) -> int:
    drag = cfg.drag_params()
    rank = connection_rank(cfg.analysis_shape, drag, cfg.rank_tolerance)
    report = filtration(
        cfg.analysis_shape,
        drag,
        depth=cfg.depth,
        fd_step=cfg.fd_step,
        tol=cfg.span_tolerance,
    )
    planar = planar_decomposition_report(
        cfg.analysis_shape,
        drag,
        depth=cfg.depth,
        fd_step=cfg.fd_step,
        tol=cfg.span_tolerance,
    )
    payload = {
        "connection_rank": rank,
        "filtration": report.as_dict(),
        "verdict": report.verdict,
        "planar_decomposition": planar.as_dict(),
    }
    text = _json_dumps(payload)
    print(text, end="")
    if fmt == "json":
        path = writer.write("controllability.json", text)
        logger.info("wrote %s", path)
    return 0


def cmd_validate(cfg: RunConfig, writer: _OutputWriter, fmt: str, seed: int) -> int:
    drag = cfg.drag_params()
    report = run_validation(
        drag,
        n_shapes=cfg.validation_shapes,
        segments=cfg.validation_segments,
        tolerance=cfg.validation_tolerance,
        seed=seed,
        theta_range=cfg.theta_range,
        phi_range=cfg.phi_range,
        workers=cfg.validation_workers,
    )
    tip_speed = cfg.gait.max_joint_speed * 2.0 * cfg.half_length
    report["reynolds"] = {
        "tip_speed": tip_speed,
        "characteristic_length": 2.0 * cfg.half_length,
        "value": reynolds_number(
            tip_speed, 2.0 * cfg.half_length, drag.fluid, cfg.density
        ),
        "value_unit_density": reynolds_number(
            tip_speed, 2.0 * cfg.half_length, drag.fluid, 1.0
        ),
    }
    report["backend"] = _backend.BACKEND
    text = _json_dumps(report)
    path = writer.write("validation.json", text)
    print(
        f"connection match: {'PASS' if report['connection_match'] else 'FAIL'} "
        f"(max deviation {report['max_connection_deviation']:.3e}, "
        f"tolerance {report['tolerance']:g}, {report['shapes']} shapes, "
        f"{report['segments']} segments)"
    )
    print(
        f"wrench cross-check: {'PASS' if report['wrench_match'] else 'FAIL'} "
        f"(relative deviation {report['relative_wrench_deviation']:.3e})"
    )
    print("segment-refinement study:")
    for row in report["convergence"]:
        ratio = row["ratio_vs_coarser"]
        print(
            f"  n={row['segments']:>5}  deviation={row['deviation']:.3e}"
            + (f"  ratio={ratio:.2f}" if ratio else "")
        )
    print(f"wrote {path}")
    if not report["passed"]:
        print("validation FAILED", file=sys.stderr)
        return 1
    return 0


_COMMANDS = {
    "connection": (cmd_connection, {"text", "json"}, "text"),
    "simulate": (cmd_simulate, {"csv", "svg", "json"}, "csv"),
    "controllability": (cmd_controllability, {"text", "json"}, "json"),
    "validate": (cmd_validate, {"text", "json"}, "text"),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="microswim",
        description="Three-link low-Reynolds swimmer: connection form, "
        "trajectory simulation, controllability analysis, brute-force validation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, formats, default_fmt) in _COMMANDS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None, help="JSON config path")
        p.add_argument("--out", type=str, default=".", help="output directory")
        p.add_argument("--seed", type=int, default=0, help="RNG seed")
        p.add_argument(
            "--format",
            type=str,
            default=default_fmt,
            choices=sorted(formats),
            help="output format",
        )
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("MICROSWIM_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = _build_parser().parse_args(argv)
    func, _, _ = _COMMANDS[args.command]
    writer = _OutputWriter(Path(args.out))
    try:
        cfg = load_config(args.config)
        return func(cfg, writer, args.format, args.seed)
    except (ConfigError, SingularResistanceError, ValueError, OSError) as exc:
        writer.rollback()
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except np.linalg.LinAlgError as exc:
        writer.rollback()
        print(f"numerical error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

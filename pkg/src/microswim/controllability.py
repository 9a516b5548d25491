"""Numerical local-controllability analysis of the connection form.

Builds the nested spans

    h1 = span { A(x) X },
    h2 = span { DA(x)(X, Y) },
    h3 = span { L_Z DA - [A(Z), DA],  [DA, DA] },  ...

where DA is the curvature DA(X,Y) = d_X(A Y) - d_Y(A X) - [A X, A Y]
(central differences for the partials, se(3) bracket for the correction) and
each deeper level adds covariant derivatives and brackets of the previous
one.  The structure group is spanned iff the accumulated span reaches all of
se(3), which certifies weak local controllability: the base link can be
steered anywhere in the spanned directions by shape loops.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from microswim.connection import (
    RestrictedShape,
    Shape,
    connection_matrix,
    shape_dimension,
)
from microswim.dragmodel import DragParams
from microswim.liegroup import twist_matrix, twist_unmatrix

TRANSLATION_AXES = ("x", "y", "z")
ROTATION_AXES = ("x", "y", "z")


def se3_bracket(xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """Lie bracket on se(3) via the commutator of 4x4 twist matrices."""
    a = twist_matrix(xi)
    b = twist_matrix(eta)
    return twist_unmatrix(a @ b - b @ a)


def connection_rank(
    shape: Shape, drag: DragParams, tol: float = 1e-9
) -> int:
    """Numerical rank of A(shape) from its singular values."""
    sigma = np.linalg.svd(connection_matrix(shape, drag), compute_uv=False)
    if sigma[0] == 0.0:
        return 0
    return int(np.sum(sigma > tol * sigma[0]))


def _connection_cache(drag: DragParams) -> Callable[[tuple], np.ndarray]:
    cache: dict[tuple, np.ndarray] = {}

    def evaluate(angles: tuple) -> np.ndarray:
        hit = cache.get(angles)
        if hit is None:
            hit = connection_matrix(RestrictedShape(*angles), drag)
            cache[angles] = hit
        return hit

    return evaluate


def curvature(
    shape: RestrictedShape,
    x: np.ndarray,
    y: np.ndarray,
    drag: DragParams,
    fd_step: float = 1e-5,
) -> np.ndarray:
    """DA(shape)(x, y) for shape-tangent vectors x, y (length 4)."""
    a_of = _connection_cache(drag)
    return _curvature_value(a_of, shape.angles(), np.asarray(x, float), np.asarray(y, float), fd_step)


def _shift(r: np.ndarray, direction: np.ndarray, h: float) -> tuple:
    return tuple(r + h * direction)


def _curvature_value(a_of, r: np.ndarray, x: np.ndarray, y: np.ndarray, h: float) -> np.ndarray:
    d_x_ay = (a_of(_shift(r, x, h)) @ y - a_of(_shift(r, x, -h)) @ y) / (2.0 * h)
    d_y_ax = (a_of(_shift(r, y, h)) @ x - a_of(_shift(r, y, -h)) @ x) / (2.0 * h)
    a_here = a_of(tuple(r))
    return d_x_ay - d_y_ax - se3_bracket(a_here @ x, a_here @ y)


class _Generator:
    """A labelled se(3)-valued field over shape space, evaluable at any point."""

    def __init__(self, label: str, func: Callable[[np.ndarray], np.ndarray]):
        self.label = label
        self.func = func

    def __call__(self, r: np.ndarray) -> np.ndarray:
        return self.func(r)


def _filtration_generators(
    a_of,
    m: int,
    depth: int,
    fd_step: float,
    tangent_labels: tuple[str, ...],
    tangent_basis: np.ndarray,
) -> list[list[_Generator]]:
    """Generator fields per level, following the h_k recursion."""
    basis = [tangent_basis[:, k] for k in range(tangent_basis.shape[1])]
    levels: list[list[_Generator]] = []

    def a_field(x: np.ndarray, label: str) -> _Generator:
        return _Generator(label, lambda r, x=x: a_of(tuple(r)) @ x)

    levels.append([a_field(x, f"A({lbl})") for x, lbl in zip(basis, tangent_labels)])

    if depth >= 2:
        pairs = list(itertools.combinations(range(len(basis)), 2))
        level2 = [
            _Generator(
                f"DA({tangent_labels[i]},{tangent_labels[j]})",
                lambda r, xi=basis[i], yj=basis[j]: _curvature_value(
                    a_of, np.asarray(r, float), xi, yj, fd_step
                ),
            )
            for i, j in pairs
        ]
        levels.append(level2)

    for _ in range(3, depth + 1):
        previous = levels[-1]
        bracket_pool = [g for lvl in levels[1:] for g in lvl]
        new: list[_Generator] = []
        for g in previous:
            for x, lbl in zip(basis, tangent_labels):
                def cov(r, g=g, x=x):
                    r = np.asarray(r, float)
                    dg = (g(r + fd_step * x) - g(r - fd_step * x)) / (2.0 * fd_step)
                    return dg - se3_bracket(a_of(tuple(r)) @ x, g(r))

                new.append(_Generator(f"D_{lbl}[{g.label}]", cov))
        for eta, xi in itertools.combinations(bracket_pool, 2):
            new.append(
                _Generator(
                    f"[{eta.label},{xi.label}]",
                    lambda r, e=eta, x=xi: se3_bracket(e(r), x(r)),
                )
            )
        levels.append(new)
    return levels


def _accumulate_span(
    vectors: list[np.ndarray], tol: float
) -> tuple[np.ndarray, int]:
    """Orthonormal basis and rank of the span of the given 6-vectors.

    Vectors enter unnormalized and the cutoff is relative to the largest
    singular value of the whole collection, so finite-difference noise in a
    near-zero generator cannot masquerade as a reachable direction.
    """
    m = np.column_stack(vectors) if vectors else np.zeros((6, 0))
    if m.size == 0 or not np.any(m):
        return np.zeros((6, 0)), 0
    u, sigma, _ = np.linalg.svd(m, full_matrices=False)
    rank = int(np.sum(sigma > tol * sigma[0]))
    return u[:, :rank], rank


def _axis_membership(basis: np.ndarray, tol: float = 1e-6) -> tuple[list[str], list[str]]:
    translations, rotations = [], []
    for k in range(3):
        e = np.zeros(6)
        e[k] = 1.0
        if np.linalg.norm(e - basis @ (basis.T @ e)) < tol:
            translations.append(TRANSLATION_AXES[k])
        e = np.zeros(6)
        e[3 + k] = 1.0
        if np.linalg.norm(e - basis @ (basis.T @ e)) < tol:
            rotations.append(ROTATION_AXES[k])
    return translations, rotations


@dataclass
class FiltrationReport:
    shape: RestrictedShape
    depth: int
    dims: list[int]  # cumulative span dimension after each level
    basis: np.ndarray  # orthonormal basis of the accumulated span (6 x dim)
    tolerance: float
    generator_counts: list[int] = field(default_factory=list)

    @property
    def spans_se3(self) -> bool:
        return self.dims[-1] == 6

    @property
    def reachable_translations(self) -> list[str]:
        return _axis_membership(self.basis)[0]

    @property
    def reachable_rotations(self) -> list[str]:
        return _axis_membership(self.basis)[1]

    @property
    def verdict(self) -> str:
        if self.spans_se3:
            return "locally weakly controllable on all of SE(3)"
        t = ",".join(self.reachable_translations) or "none"
        r = ",".join(self.reachable_rotations) or "none"
        return (
            f"weakly controllable in {self.dims[-1]} of 6 directions "
            f"(translation axes: {t}; rotation axes: {r})"
        )

    def as_dict(self) -> dict:
        return {
            "shape": list(self.shape.angles()),
            "depth": self.depth,
            "dims": self.dims,
            "spans_se3": self.spans_se3,
            "reachable_translations": self.reachable_translations,
            "reachable_rotations": self.reachable_rotations,
            "basis": self.basis.T.tolist(),
            "tolerance": self.tolerance,
            "generator_counts": self.generator_counts,
        }


def filtration(
    shape: RestrictedShape,
    drag: DragParams,
    depth: int = 3,
    fd_step: float = 1e-5,
    tol: float = 1e-8,
    tangent_indices: tuple[int, ...] = (0, 1, 2, 3),
) -> FiltrationReport:
    """Accumulate the controllability spans h1 + h2 + ... at one shape.

    ``tangent_indices`` restricts the allowed shape directions (used by the
    planar decomposition).  Depth beyond 4 is rejected: the generator count
    grows combinatorially and adds nothing once the span saturates.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if depth > 4:
        raise ValueError("depth > 4 is combinatorially explosive; use <= 4")
    m = shape_dimension(shape)
    labels_all = ("dtheta1", "dphi1", "dtheta2", "dphi2")
    tangent_basis = np.zeros((m, len(tangent_indices)))
    for col, idx in enumerate(tangent_indices):
        tangent_basis[idx, col] = 1.0
    labels = tuple(labels_all[i] for i in tangent_indices)

    a_of = _connection_cache(drag)
    levels = _filtration_generators(a_of, m, depth, fd_step, labels, tangent_basis)

    r0 = shape.angles()
    values: list[np.ndarray] = []
    dims: list[int] = []
    counts: list[int] = []
    basis = np.zeros((6, 0))
    saturated = False
    for level in levels:
        if not saturated:
            values.extend(g(r0) for g in level)
            basis, rank = _accumulate_span(values, tol)
        counts.append(len(level))
        dims.append(basis.shape[1])
        saturated = dims[-1] == 6
    return FiltrationReport(shape, depth, dims, basis, tol, counts)


@dataclass
class PlaneRestrictionReport:
    """Filtration with actuation confined to one pair of joint angles."""

    name: str
    joint_labels: tuple[str, str]
    report: FiltrationReport

    @property
    def reachable_translations(self) -> list[str]:
        return self.report.reachable_translations

    @property
    def reachable_rotations(self) -> list[str]:
        return self.report.reachable_rotations

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "joints": list(self.joint_labels),
            "filtration": self.report.as_dict(),
        }


@dataclass
class PlanarDecompositionReport:
    """Reachable directions when actuation is split into the two joint planes.

    theta-only actuation swings the limbs in the base xy-plane; phi-only
    actuation swings them in the base xz-plane.  Each restriction behaves as
    a planar three-link swimmer, fully controllable in its own plane (two
    in-plane translations plus rotation about the plane normal); the union
    covers every direction except roll about the base link's own axis.
    """

    in_plane_xy: PlaneRestrictionReport
    in_plane_xz: PlaneRestrictionReport

    @property
    def union_translations(self) -> list[str]:
        seen = dict.fromkeys(
            self.in_plane_xy.reachable_translations
            + self.in_plane_xz.reachable_translations
        )
        return list(seen)

    @property
    def union_rotations(self) -> list[str]:
        seen = dict.fromkeys(
            self.in_plane_xy.reachable_rotations + self.in_plane_xz.reachable_rotations
        )
        return list(seen)

    @property
    def missing_directions(self) -> list[str]:
        missing = [f"v{a}" for a in TRANSLATION_AXES if a not in self.union_translations]
        missing += [f"w{a}" for a in ROTATION_AXES if a not in self.union_rotations]
        return missing

    def as_dict(self) -> dict:
        return {
            "xy_plane": self.in_plane_xy.as_dict(),
            "xz_plane": self.in_plane_xz.as_dict(),
            "union_translations": self.union_translations,
            "union_rotations": self.union_rotations,
            "missing_directions": self.missing_directions,
        }


def planar_decomposition_report(
    shape: RestrictedShape,
    drag: DragParams,
    depth: int = 3,
    fd_step: float = 1e-5,
    tol: float = 1e-8,
) -> PlanarDecompositionReport:
    xy = filtration(shape, drag, depth, fd_step, tol, tangent_indices=(0, 2))
    xz = filtration(shape, drag, depth, fd_step, tol, tangent_indices=(1, 3))
    return PlanarDecompositionReport(
        PlaneRestrictionReport("xy", ("dtheta1", "dtheta2"), xy),
        PlaneRestrictionReport("xz", ("dphi1", "dphi2"), xz),
    )

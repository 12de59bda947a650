"""Support function h(u) = max{u.x : x in body} of an intersection of balls.

Two independent evaluators:

* :func:`support_function` projects a far point ``c + R u`` onto the body with
  cyclic Dykstra projections.  It is simple and generic but slow (thousands
  of sweeps per direction) and biased low by roughly diam^2 / R on smooth
  faces.
* :func:`support_exact` enumerates the points where a linear functional can
  peak on a ball intersection (face points ``c_i + r_i u``, the maximiser on
  every pairwise circle, and every triple-sphere vertex), keeps the feasible
  ones and takes the maximum.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from ..geometry import BallmError, BallSet, Direction

__all__ = [
    "ConvergenceError",
    "EmptyIntersectionError",
    "dykstra_project",
    "support_function",
    "support_dykstra",
    "support_exact",
    "triple_points",
    "check_nonempty",
]

FAR_FACTOR = 100.0
MAX_SWEEPS = 100_000
FEASIBILITY_SLACK = 1e-10


class ConvergenceError(BallmError):
    """Dykstra's iteration hit the sweep cap."""

    def __init__(self, message, iterate=None, sweeps=None):
        super().__init__(message)
        self.iterate = iterate
        self.sweeps = sweeps


class EmptyIntersectionError(BallmError):
    """The balls have no common point."""


def dykstra_project(B: BallSet, points, tol: float = 1e-10, max_sweeps: int = MAX_SWEEPS):
    """Project each row of ``points`` onto the intersection of the balls.

    Returns ``(projections, sweeps)``.  A row stops once a full sweep moves it
    by less than ``tol``; rows still moving after ``max_sweeps`` raise
    :class:`ConvergenceError`.
    """
    x = np.array(points, dtype=float, ndmin=2)
    n, m = len(x), len(B)
    centers, radii = B.centers, B.radii
    increments = np.zeros((m, n, 3))
    sweeps = np.zeros(n, dtype=int)
    active = np.arange(n)
    for _ in range(max_sweeps):
        if active.size == 0:
            break
        xa = x[active]
        before = xa.copy()
        for i in range(m):
            y = xa + increments[i, active]
            d = y - centers[i]
            norm = np.linalg.norm(d, axis=1)
            scale = np.where(norm > radii[i], radii[i] / np.maximum(norm, 1e-300), 1.0)
            proj = centers[i] + d * scale[:, None]
            increments[i, active] = y - proj
            xa = proj
        x[active] = xa
        sweeps[active] += 1
        moved = np.linalg.norm(xa - before, axis=1)
        active = active[moved >= tol]
    if active.size:
        raise ConvergenceError(
            f"Dykstra did not converge in {max_sweeps} sweeps for {active.size} point(s); "
            f"first iterate {x[active[0]]}",
            iterate=x[active],
            sweeps=max_sweeps,
        )
    return x, sweeps


def _pairwise_disjoint(B: BallSet) -> bool:
    c, r = B.centers, B.radii
    d = np.linalg.norm(c[:, None] - c[None], axis=-1)
    return bool(np.any(d > r[:, None] + r[None]))


def check_nonempty(B: BallSet, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """A common point of the balls, found by projecting the centroid of the centres."""
    if _pairwise_disjoint(B):
        raise EmptyIntersectionError("two balls are disjoint")
    try:
        x, _ = dykstra_project(B, B.centers.mean(axis=0), tol=1e-13, max_sweeps=max_sweeps)
    except ConvergenceError as exc:
        x = exc.iterate
    x = x[0]
    if np.any(np.linalg.norm(B.centers - x, axis=1) > B.radii + 1e-8):
        raise EmptyIntersectionError("no point satisfies every ball constraint")
    return x


def _far_radius(B: BallSet) -> float:
    return FAR_FACTOR * (np.linalg.norm(B.centers, axis=1).max() + B.radii.max())


def support_dykstra(B: BallSet, U, tol: float = 1e-10) -> np.ndarray:
    """Vectorised far-point support values for the unit rows of ``U``."""
    U = np.array(U, dtype=float, ndmin=2)
    far = B.centers.mean(axis=0) + _far_radius(B) * U
    x, _ = dykstra_project(B, far, tol=tol)
    return np.einsum("ij,ij->i", U, x)


def support_function(B: BallSet, u, tol: float = 1e-10) -> float:
    """h(u) via Dykstra projection of a far point onto the body."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    u = u.u if isinstance(u, Direction) else Direction(tuple(u)).u
    check_nonempty(B)
    return float(support_dykstra(B, u[None], tol)[0])


def triple_points(B: BallSet) -> np.ndarray:
    """All points lying on three of the spheres (0, 1 or 2 per triple)."""
    pts = []
    c, r = B.centers, B.radii
    for i, j, k in combinations(range(len(B)), 3):
        # radical planes: 2 (c_a - c_i).x = |c_a|^2 - |c_i|^2 - r_a^2 + r_i^2
        A = 2 * np.array([c[j] - c[i], c[k] - c[i]])
        rhs = np.array([
            c[j] @ c[j] - c[i] @ c[i] - r[j] ** 2 + r[i] ** 2,
            c[k] @ c[k] - c[i] @ c[i] - r[k] ** 2 + r[i] ** 2,
        ])
        n = np.cross(A[0], A[1])
        nn = n @ n
        if nn < 1e-24:
            continue
        # point on both planes closest to the origin, then move along n
        p0 = np.linalg.lstsq(A, rhs, rcond=None)[0]
        q = p0 - c[i]
        n_hat = n / np.sqrt(nn)
        b = q @ n_hat
        disc = b * b - (q @ q - r[i] ** 2)
        if disc < -1e-14:
            continue
        s = np.sqrt(max(disc, 0.0))
        pts.append(p0 + (-b + s) * n_hat)
        pts.append(p0 + (-b - s) * n_hat)
    return np.array(pts).reshape(-1, 3)


def support_exact(B: BallSet, U, chunk: int = 20_000) -> np.ndarray:
    """Exact support values for the unit rows of ``U`` by candidate enumeration."""
    U = np.array(U, dtype=float, ndmin=2)
    c, r = B.centers, B.radii
    scale = r.max()
    slack = FEASIBILITY_SLACK * scale

    circles = []
    for i, j in combinations(range(len(B)), 2):
        v = c[j] - c[i]
        d = np.linalg.norm(v)
        if d >= r[i] + r[j] or d <= abs(r[i] - r[j]):
            continue
        n = v / d
        h = (d * d + r[i] ** 2 - r[j] ** 2) / (2 * d)
        circles.append((c[i] + h * n, np.sqrt(r[i] ** 2 - h * h), n))

    verts = triple_points(B)
    if len(verts):
        ok = np.all(np.linalg.norm(verts[:, None] - c, axis=-1) <= r + slack, axis=1)
        verts = verts[ok]
    vert_best = verts @ U.T if len(verts) else None  # (n_verts, n_dirs)

    out = np.full(len(U), -np.inf)
    for lo in range(0, len(U), chunk):
        u = U[lo:lo + chunk]
        cands = [c[None] + r[None, :, None] * u[:, None]]  # (n, m, 3)
        for m_, rho, n_ in circles:
            t = u - (u @ n_)[:, None] * n_
            tn = np.linalg.norm(t, axis=1, keepdims=True)
            t = np.where(tn > 1e-12, t / np.maximum(tn, 1e-300), 0.0)
            cands.append((m_ + rho * t)[:, None])
        P = np.concatenate(cands, axis=1)
        dist = np.linalg.norm(P[:, :, None] - c[None, None], axis=-1)
        feasible = np.all(dist <= r + slack, axis=-1)
        vals = np.einsum("nkj,nj->nk", P, u)
        vals = np.where(feasible, vals, -np.inf)
        best = vals.max(axis=1)
        if vert_best is not None and vert_best.size:
            best = np.maximum(best, vert_best[:, lo:lo + chunk].max(axis=0))
        out[lo:lo + chunk] = best
    if not np.all(np.isfinite(out)):
        raise EmptyIntersectionError("no feasible support candidate; the balls have no common point")
    return out

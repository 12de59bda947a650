"""Deterministic volume from the divergence theorem, V = (1/3) sum_f int_f x.n dA.

Each face on sphere i (centre c, radius r) is an intersection of caps, so in
spherical coordinates about an interior axis it is star-shaped: polar angle
runs from 0 to an exit angle T(psi) set by the nearest cap rim.  The polar
integral of (c.n + r) r^2 sin(theta) has a closed form; the azimuthal one is
done by adaptive quadrature, split at the azimuths of the face's vertices where
T(psi) has kinks.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from ..geometry import BallmError, BallSet
from ..skeleton import Skeleton, build_skeleton

__all__ = ["QuadratureError", "divergence_volume", "face_integrals"]

TWO_PI = 2.0 * math.pi


class QuadratureError(BallmError):
    """Adaptive quadrature did not reach its tolerance."""


def _caps(B: BallSet, i: int):
    """(axis, cos angular radius) of every cap of sphere i cut out by another ball."""
    caps = []
    ci, ri = B[i].c, B[i].radius
    for j, s in enumerate(B):
        if j == i:
            continue
        v = s.c - ci
        d = float(np.linalg.norm(v))
        cos_rho = (d * d + ri * ri - s.radius**2) / (2 * d * ri)
        if cos_rho <= -1.0:
            continue  # ball j swallows sphere i
        caps.append((v / d, cos_rho))
    return caps


def _face_axis(skel: Skeleton, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Interior axis of face i and the boundary points whose azimuths are kinks."""
    B = skel.ballset
    ci = B[i].c
    pts = []
    corners = []
    for arc in skel.edges:
        if i not in arc.circle.pair:
            continue
        theta = np.linspace(arc.start, arc.end, 5)
        pts.append(arc.circle.point(theta))
        if arc.endpoints is not None:
            corners.extend(arc.endpoints)
    if not pts:
        return None, np.empty((0, 3))
    dirs = np.vstack(pts) - ci
    axis = dirs.sum(axis=0)
    axis /= np.linalg.norm(axis)
    return axis, np.array(corners).reshape(-1, 3)


def _exit_angle(axis, w, caps):
    """Polar angle at which the great-circle ray axis->w leaves the face."""
    T = math.pi
    for m, cos_rho in caps:
        A, Bc = axis @ m, w @ m
        R = math.hypot(A, Bc)
        if cos_rho <= -R:
            continue
        phi0 = math.atan2(Bc, A)
        beta = math.acos(min(1.0, cos_rho / R))
        T = min(T, phi0 + beta)
    return max(T, 0.0)


def face_integrals(B: BallSet, skel: Skeleton, i: int, epsabs: float = 1e-12):
    """(area, flux) of face i, where flux = int_f x.n dA.

    ``epsabs`` is the absolute tolerance for a unit radius; it is rescaled
    with the face radius.
    """
    ci, r = B[i].c, B[i].radius
    caps = _caps(B, i)
    face = skel.faces[i]
    if face.area == 0.0:
        return 0.0, 0.0
    axis, corners = _face_axis(skel, i)
    if axis is None:
        # whole sphere: flux = r * 4 pi r^2 (c.n integrates to zero)
        return 4 * math.pi * r * r, 4 * math.pi * r**3
    u = np.cross(axis, [1.0, 0.0, 0.0])
    if np.linalg.norm(u) < 1e-6:
        u = np.cross(axis, [0.0, 1.0, 0.0])
    u /= np.linalg.norm(u)
    v = np.cross(axis, u)
    c_axis, c_u, c_v = ci @ axis, ci @ u, ci @ v

    def pieces(psi):
        w = math.cos(psi) * u + math.sin(psi) * v
        T = _exit_angle(axis, w, caps)
        one_minus_cos = 2 * math.sin(T / 2) ** 2
        sin2 = math.sin(T) ** 2
        c_w = math.cos(psi) * c_u + math.sin(psi) * c_v
        area = r * r * one_minus_cos
        flux = r * r * (r * one_minus_cos + c_axis * sin2 / 2 + c_w * (T / 2 - math.sin(2 * T) / 4))
        return area, flux

    rel = corners - ci
    kinks = sorted({float(np.arctan2(p @ v, p @ u) % TWO_PI) for p in rel})
    edges = [0.0] + [k for k in kinks if 1e-12 < k < TWO_PI - 1e-12] + [TWO_PI]
    area = flux = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo < 1e-14:
            continue
        for k, acc in ((0, "area"), (1, "flux")):
            # area scales like r^2 and flux like r^3
            eps = epsabs * r ** (2 + k)
            val, err = integrate.quad(lambda p: pieces(p)[k], lo, hi, epsabs=eps, epsrel=0, limit=200)
            if not err <= max(1e3 * eps, 1e-10 * r ** (2 + k)):
                raise QuadratureError(f"face {i} {acc} on [{lo}, {hi}]: error estimate {err}")
            if k == 0:
                area += val
            else:
                flux += val
    return area, flux


def divergence_volume(B: BallSet, skel: Skeleton | None = None) -> float:
    """Volume of an equal-radius ball intersection by surface quadrature."""
    if skel is None:
        skel = build_skeleton(B)
    return math.fsum(face_integrals(B, skel, i)[1] for i in range(len(B))) / 3.0

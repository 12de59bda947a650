"""Convex bodies that are not plain ball intersections.

Each body is centred at the origin with the z axis as its symmetry axis and
offers the same duck-typed interface as :class:`~ballm.geometry.BallSet`
for the Monte Carlo estimators:

``contains(P)``
    vectorised membership.
``bounding_box()``
    axis-aligned box ``(lo, hi)``.
``support(U)``
    support function for unit rows of ``U``.
``line_hits(U, Q)``
    whether the line ``Q + t U`` meets the body (``Q`` orthogonal to ``U``),
    i.e. whether ``Q`` lies in the shadow cast along ``U``.
``circumradius``
    radius of a ball about the origin containing the body.

The bodies of revolution also expose ``profile()`` and ``flat_disks`` for
:func:`ballm.numerics.quadrature.revolution_measures`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exact import AngularRadius, CylinderLength, DomainError, HALF_PI
from .geometry import BallSet, canonical_ballsets

__all__ = ["CappedCylinder", "SymmetricSegment", "CapBody", "MeissnerTetrahedron"]

SLACK = 1e-12


def _rows(P) -> np.ndarray:
    return np.array(P, dtype=float, ndmin=2)


def _in_cone_hull(v_axis: np.ndarray, v_perp: np.ndarray, L) -> np.ndarray:
    """Inside hull(unit ball, apex) minus the ball, apex at distance L > 1.

    ``v_axis`` is the coordinate along the apex-to-centre axis measured from
    the apex, ``v_perp`` the distance from that axis.
    """
    L = np.asarray(L, dtype=float)
    big = L > 1 + 1e-15
    Ls = np.where(big, L, 2.0)
    foot = (Ls * Ls - 1) / Ls
    tan_a = 1 / np.sqrt(Ls * Ls - 1)
    ok = (v_axis >= -SLACK) & (v_axis <= foot + SLACK) & (v_perp <= v_axis * tan_a + SLACK)
    return big & ok


@dataclass(frozen=True)
class CappedCylinder:
    """Points within distance 1 of the axial segment [-ell/2, ell/2]."""

    ell: float

    def __post_init__(self):
        object.__setattr__(self, "ell", CylinderLength.of(self.ell).ell)

    @property
    def half(self) -> float:
        return self.ell / 2

    @property
    def circumradius(self) -> float:
        return self.half + 1.0

    def bounding_box(self):
        h = self.half + 1
        return np.array([-1.0, -1.0, -h]), np.array([1.0, 1.0, h])

    def contains(self, P) -> np.ndarray:
        P = _rows(P)
        zc = np.clip(P[:, 2], -self.half, self.half)
        d2 = P[:, 0] ** 2 + P[:, 1] ** 2 + (P[:, 2] - zc) ** 2
        return d2 <= 1 + SLACK

    def support(self, U) -> np.ndarray:
        return 1.0 + self.half * np.abs(_rows(U)[:, 2])

    def line_hits(self, U, Q) -> np.ndarray:
        U, Q = _rows(U), _rows(Q)
        a = np.array([0.0, 0.0, 1.0]) - U[:, 2:3] * U  # e_z projected off u
        aa = np.einsum("ij,ij->i", a, a)
        s = np.where(aa > 1e-30, np.einsum("ij,ij->i", a, Q) / np.maximum(aa, 1e-30), 0.0)
        s = np.clip(s, -self.half, self.half)
        d = s[:, None] * a - Q
        return np.einsum("ij,ij->i", d, d) <= 1 + SLACK

    def profile(self):
        h = self.half
        return [
            (-h - 1, -h, lambda z: math.sqrt(max(1 - (z + h) ** 2, 0.0)), lambda z: -(z + h)),
            (-h, h, lambda z: 1.0, lambda z: 0.0),
            (h, h + 1, lambda z: math.sqrt(max(1 - (z - h) ** 2, 0.0)), lambda z: -(z - h)),
        ]

    flat_disks = ()
    support_kinks = ()


@dataclass(frozen=True)
class SymmetricSegment:
    """Unit ball with the two caps |z| > cos(phi) removed."""

    phi: float

    def __post_init__(self):
        object.__setattr__(self, "phi", AngularRadius.of(self.phi).phi)

    @property
    def cz(self) -> float:
        return math.cos(self.phi)

    circumradius = 1.0

    def bounding_box(self):
        c = self.cz
        return np.array([-1.0, -1.0, -c]), np.array([1.0, 1.0, c])

    def contains(self, P) -> np.ndarray:
        P = _rows(P)
        return (np.einsum("ij,ij->i", P, P) <= 1 + SLACK) & (np.abs(P[:, 2]) <= self.cz + SLACK)

    def support(self, U) -> np.ndarray:
        t = np.abs(_rows(U)[:, 2])
        c, s = self.cz, math.sin(self.phi)
        return np.where(t <= c, 1.0, s * np.sqrt(np.maximum(1 - t * t, 0.0)) + c * t)

    def line_hits(self, U, Q) -> np.ndarray:
        U, Q = _rows(U), _rows(Q)
        qq = np.einsum("ij,ij->i", Q, Q)
        w = np.sqrt(np.maximum(1 - qq, 0.0))
        c, uz, qz = self.cz, U[:, 2], Q[:, 2]
        flat = np.abs(uz) < 1e-15
        safe = np.where(flat, 1.0, uz)
        t1, t2 = (-c - qz) / safe, (c - qz) / safe
        lo = np.where(flat, -np.inf, np.minimum(t1, t2))
        hi = np.where(flat, np.inf, np.maximum(t1, t2))
        slab_ok = ~flat | (np.abs(qz) <= c + SLACK)
        return (qq <= 1 + SLACK) & slab_ok & (np.maximum(lo, -w) <= np.minimum(hi, w) + SLACK)

    def profile(self):
        c = self.cz
        return [(-c, c, lambda z: math.sqrt(max(1 - z * z, 0.0)), lambda z: -z)]

    @property
    def flat_disks(self) -> tuple:
        s = math.sin(self.phi)
        return (s, s)

    @property
    def support_kinks(self) -> tuple:
        return (self.cz,)


@dataclass(frozen=True)
class CapBody:
    """Convex hull of the unit ball and the axial segment of half-length 1/cos(phi)."""

    phi: float

    def __post_init__(self):
        phi = AngularRadius.of(self.phi).phi
        if phi >= HALF_PI:
            raise DomainError(f"cap body needs phi < pi/2, got {phi}")
        object.__setattr__(self, "phi", phi)

    @property
    def apex(self) -> float:
        return 1 / math.cos(self.phi)

    @property
    def circumradius(self) -> float:
        return self.apex

    def bounding_box(self):
        d = self.apex
        return np.array([-1.0, -1.0, -d]), np.array([1.0, 1.0, d])

    def contains(self, P) -> np.ndarray:
        P = _rows(P)
        d = self.apex
        out = np.einsum("ij,ij->i", P, P) <= 1 + SLACK
        r_perp = np.hypot(P[:, 0], P[:, 1])
        for sign in (1.0, -1.0):
            out |= _in_cone_hull(d - sign * P[:, 2], r_perp, d)
        return out

    def support(self, U) -> np.ndarray:
        return np.maximum(1.0, self.apex * np.abs(_rows(U)[:, 2]))

    def line_hits(self, U, Q) -> np.ndarray:
        # shadow = hull(unit disk, p+) union hull(unit disk, p-), p = +-d e_z off u
        U, Q = _rows(U), _rows(Q)
        d = self.apex
        p = d * (np.array([0.0, 0.0, 1.0]) - U[:, 2:3] * U)
        L = np.linalg.norm(p, axis=1)
        out = np.einsum("ij,ij->i", Q, Q) <= 1 + SLACK
        axis = -p / np.maximum(L, 1e-300)[:, None]
        for sign in (1.0, -1.0):
            v = Q - sign * p
            along = np.einsum("ij,ij->i", v, sign * axis)
            perp = np.linalg.norm(v - along[:, None] * sign * axis, axis=1)
            out |= _in_cone_hull(along, perp, L)
        return out

    def profile(self):
        c, s, d = math.cos(self.phi), math.sin(self.phi), self.apex
        k = s / (d - c) if d > c else 0.0
        pieces = [(-c, c, lambda z: math.sqrt(max(1 - z * z, 0.0)), lambda z: -z)]
        if d > c:
            pieces.append((c, d, lambda z: k * (d - z), lambda z: -k * k * (d - z)))
            pieces.append((-d, -c, lambda z: k * (d + z), lambda z: k * k * (d + z)))
        return pieces

    flat_disks = ()

    @property
    def support_kinks(self) -> tuple:
        return (math.cos(self.phi),)


def _arc_farthest_sq(P: np.ndarray, arc) -> np.ndarray:
    """Squared distance from each point to the farthest point of an edge arc."""
    circ = arc.circle
    rel = P - circ.center
    a = rel @ circ.e1
    b = rel @ circ.e2
    rr = np.einsum("ij,ij->i", rel, rel) + circ.radius**2
    # interior stationary point: theta = atan2(b, a) + pi
    theta = (np.arctan2(b, a) + math.pi - arc.start) % (2 * math.pi)
    inside = theta <= arc.end - arc.start
    best = rr + 2 * circ.radius * np.hypot(a, b)
    ends = []
    for t in (arc.start, arc.end):
        e = circ.point(t)
        ends.append(np.einsum("ij,ij->i", P - e, P - e))
    return np.where(inside, best, np.maximum(*ends))


@dataclass(frozen=True)
class MeissnerTetrahedron:
    """Reuleaux tetrahedron with the three edges at one vertex rounded.

    Each rounded edge is replaced by the part of the body within distance 1
    of every point of the opposite edge, which gives constant width 1.
    """

    reuleaux: BallSet = field(default_factory=lambda: canonical_ballsets("tetrahedron"))

    def __post_init__(self):
        from .skeleton import edge_arcs

        if len(self.reuleaux) != 4:
            raise DomainError("a Meissner tetrahedron needs the four-ball Reuleaux tetrahedron")
        apex = len(self.reuleaux) - 1
        # arcs on circles of pairs (i, apex) join two base vertices; they are
        # opposite the edges through the apex
        opposite = tuple(a for a in edge_arcs(self.reuleaux) if apex in a.circle.pair)
        object.__setattr__(self, "_opposite", opposite)

    @property
    def circumradius(self) -> float:
        c = self.reuleaux.centers
        return float(np.linalg.norm(c, axis=1).max() + 1.0)

    def bounding_box(self):
        return self.reuleaux.bounding_box()

    def contains(self, P) -> np.ndarray:
        P = _rows(P)
        out = self.reuleaux.contains(P)
        for arc in self._opposite:
            out &= _arc_farthest_sq(P, arc) <= 1 + SLACK
        return out

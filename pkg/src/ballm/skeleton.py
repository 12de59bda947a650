"""Boundary structure of an intersection of balls.

Faces are spherical patches, edges are circular arcs where two spheres meet,
and vertices are where three or more spheres meet.  Face areas come from the
Gauss-Bonnet theorem applied to each patch, and mean width from

    MW = (1/2pi) sum_f A_f / r_f + (1/4pi) sum_e alpha_e L_e

with alpha_e the exterior dihedral angle and L_e the arc length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .geometry import BallmError, BallSet, Measures, Sphere

__all__ = [
    "DegenerateIntersectionError",
    "UnsupportedBallSetError",
    "IntersectionCircle",
    "TangentPoint",
    "EdgeArc",
    "FacePatch",
    "Vertex",
    "Skeleton",
    "BodyMeasures",
    "intersection_circle",
    "exterior_dihedral_angle",
    "clip_circle_by_balls",
    "edge_arcs",
    "face_areas",
    "vertices",
    "indirect_mean_width",
    "build_skeleton",
    "ballset_measures",
    "adjacent_vertex_distance",
]

TWO_PI = 2.0 * math.pi
ANGLE_TOL = 1e-10
VERTEX_MATCH_TOL = 1e-8
FRAME_FALLBACK_TOL = 1e-8


class DegenerateIntersectionError(BallmError):
    """The intersection has no interior (empty, a point, or coincident spheres)."""


class UnsupportedBallSetError(BallmError):
    """The requested computation is limited to equal-radius ball sets."""


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


@dataclass(frozen=True, eq=False)
class IntersectionCircle:
    """Circle where two spheres meet, with a fixed right-handed frame.

    ``normal`` points from sphere ``pair[0]`` towards sphere ``pair[1]``;
    angle 0 lies along the projection of +z on the circle plane (+x when the
    normal is within 1e-8 of +-z), and ``e1 x e2 = normal``.
    """

    center: np.ndarray
    radius: float
    normal: np.ndarray
    pair: tuple[int, int]
    e1: np.ndarray = field(repr=False)
    e2: np.ndarray = field(repr=False)

    def point(self, theta):
        theta = np.asarray(theta, dtype=float)[..., None]
        return self.center + self.radius * (np.cos(theta) * self.e1 + np.sin(theta) * self.e2)

    def tangent(self, theta):
        """Unit tangent in the direction of increasing angle."""
        theta = np.asarray(theta, dtype=float)[..., None]
        return -np.sin(theta) * self.e1 + np.cos(theta) * self.e2


@dataclass(frozen=True)
class TangentPoint:
    """Two spheres touching in a single point."""

    point: np.ndarray
    pair: tuple[int, int]


def _frame(normal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ref = np.array([0.0, 0.0, 1.0])
    if abs(normal @ ref) > 1.0 - FRAME_FALLBACK_TOL:
        ref = np.array([1.0, 0.0, 0.0])
    e1 = _unit(ref - (ref @ normal) * normal)
    e2 = np.cross(normal, e1)
    return e1, e2


def intersection_circle(s1: Sphere, s2: Sphere, pair: tuple[int, int] = (0, 1)):
    """Circle, tangent point, or ``None`` for two spheres.

    Raises :class:`DegenerateIntersectionError` for coincident spheres.
    """
    c1, c2 = s1.c, s2.c
    r1, r2 = s1.radius, s2.radius
    d = float(np.linalg.norm(c2 - c1))
    scale = max(r1, r2)
    if d <= 1e-15 * scale and abs(r1 - r2) <= 1e-15 * scale:
        raise DegenerateIntersectionError(f"spheres {pair} coincide")
    tol = 1e-12 * scale
    if d > r1 + r2 + tol or d < abs(r1 - r2) - tol:
        return None
    n = (c2 - c1) / d
    if abs(d - (r1 + r2)) <= tol:
        return TangentPoint(c1 + r1 * n, pair)
    if abs(d - abs(r1 - r2)) <= tol:
        sign = 1.0 if r1 >= r2 else -1.0
        return TangentPoint(c1 + sign * r1 * n, pair)
    h = (d * d + r1 * r1 - r2 * r2) / (2 * d)
    rho = math.sqrt(max(r1 * r1 - h * h, 0.0))
    e1, e2 = _frame(n)
    return IntersectionCircle(c1 + h * n, rho, n, pair, e1, e2)


def exterior_dihedral_angle(s1: Sphere, s2: Sphere) -> float:
    """Angle between the outward normals of two spheres along their common circle."""
    circle = intersection_circle(s1, s2)
    if not isinstance(circle, IntersectionCircle):
        raise DegenerateIntersectionError("spheres do not meet in a circle")
    d2 = float(np.sum((s1.c - s2.c) ** 2))
    r1, r2 = s1.radius, s2.radius
    cos_a = (r1 * r1 + r2 * r2 - d2) / (2 * r1 * r2)
    return math.acos(min(1.0, max(-1.0, cos_a)))


# Angular intervals on a circle are (start, end) with 0 <= start < 2pi and
# start < end <= start + 2pi; they are half-open, [start, end).


def _ball_interval(circle: IntersectionCircle, ball: Sphere):
    """Angular set of the circle inside ``ball``: None (empty), 'all', or (start, end)."""
    m = circle.center
    rho = circle.radius
    rel = ball.c - m
    a, b = rel @ circle.e1, rel @ circle.e2
    R = math.hypot(a, b)
    K = (rel @ rel + rho * rho - ball.radius**2) / (2 * rho)
    if R <= 1e-15:
        return "all" if K <= 0 else None
    ratio = K / R
    if ratio <= -1.0 + 1e-12:
        return "all"
    if ratio >= 1.0 - 1e-12:
        return None
    psi = math.atan2(b, a)
    beta = math.acos(ratio)
    start = (psi - beta) % TWO_PI
    return (start, start + 2 * beta)


def _to_linear(intervals):
    out = []
    for s, e in intervals:
        if e <= TWO_PI:
            out.append((s, e))
        else:
            out.append((s, TWO_PI))
            out.append((0.0, e - TWO_PI))
    return sorted(out)


def _intersect_linear(xs, ys):
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        lo = max(xs[i][0], ys[j][0])
        hi = min(xs[i][1], ys[j][1])
        if hi - lo > ANGLE_TOL:
            out.append((lo, hi))
        if xs[i][1] < ys[j][1]:
            i += 1
        else:
            j += 1
    return out


def _to_circular(linear):
    linear = [iv for iv in linear if iv[1] - iv[0] > ANGLE_TOL]
    if not linear:
        return []
    if len(linear) == 1 and linear[0][0] <= ANGLE_TOL and linear[0][1] >= TWO_PI - ANGLE_TOL:
        return [(0.0, TWO_PI)]
    if len(linear) > 1 and linear[0][0] <= ANGLE_TOL and linear[-1][1] >= TWO_PI - ANGLE_TOL:
        first = linear.pop(0)
        last = linear.pop()
        linear.append((last[0], TWO_PI + first[1]))
    return sorted(linear)


def clip_circle_by_balls(circle: IntersectionCircle, B: BallSet) -> list[tuple[float, float]]:
    """Angular intervals of ``circle`` lying inside every ball of ``B`` except its own pair."""
    current = [(0.0, TWO_PI)]
    for k, ball in enumerate(B):
        if k in circle.pair:
            continue
        iv = _ball_interval(circle, ball)
        if iv is None:
            return []
        if iv == "all":
            continue
        current = _intersect_linear(_to_linear(current), _to_linear([iv]))
        current = _to_circular(current)
        if not current:
            return []
    return current


@dataclass(frozen=True, eq=False)
class EdgeArc:
    circle: IntersectionCircle
    start: float
    end: float
    exterior_angle: float

    @property
    def angle(self) -> float:
        return self.end - self.start

    @property
    def arc_length(self) -> float:
        return self.circle.radius * self.angle

    @property
    def endpoints(self) -> tuple[np.ndarray, np.ndarray] | None:
        if self.angle >= TWO_PI - ANGLE_TOL:
            return None
        return self.circle.point(self.start), self.circle.point(self.end)

    def chord(self) -> float:
        return 2 * self.circle.radius * math.sin(min(self.angle, TWO_PI) / 2)


@dataclass(frozen=True)
class FacePatch:
    sphere: int
    area: float
    curvature_radius: float
    loops: int = 1

    def __post_init__(self):
        cap = 4 * math.pi * self.curvature_radius**2
        if not (-1e-9 * cap <= self.area <= cap * (1 + 1e-9)):
            raise DegenerateIntersectionError(
                f"face {self.sphere} area {self.area} outside [0, {cap}]"
            )
        # Gauss-Bonnet sums can drift past the limits by rounding
        object.__setattr__(self, "area", min(max(self.area, 0.0), cap))


@dataclass(frozen=True)
class Vertex:
    position: np.ndarray
    spheres: tuple[int, ...]


def edge_arcs(B: BallSet) -> list[EdgeArc]:
    """Clipped boundary arcs for every pair of spheres meeting in a circle."""
    arcs = []
    for i, j in combinations(range(len(B)), 2):
        circle = intersection_circle(B[i], B[j], (i, j))
        if not isinstance(circle, IntersectionCircle):
            continue
        alpha = exterior_dihedral_angle(B[i], B[j])
        for start, end in clip_circle_by_balls(circle, B):
            arcs.append(EdgeArc(circle, start, end, alpha))
    return arcs


@dataclass
class _OrientedArc:
    arc: EdgeArc
    forward: bool

    def start_point(self):
        a = self.arc
        return a.circle.point(a.start if self.forward else a.end)

    def end_point(self):
        a = self.arc
        return a.circle.point(a.end if self.forward else a.start)

    def start_tangent(self):
        a = self.arc
        t = a.circle.tangent(a.start if self.forward else a.end)
        return t if self.forward else -t

    def end_tangent(self):
        a = self.arc
        t = a.circle.tangent(a.end if self.forward else a.start)
        return t if self.forward else -t

    @property
    def closed(self) -> bool:
        return self.arc.angle >= TWO_PI - ANGLE_TOL


def _face_boundary(B: BallSet, arcs: list[EdgeArc], i: int) -> list[_OrientedArc]:
    # Face i lies in the cap of sphere i facing the other sphere; walking the
    # circle counterclockwise about the normal pointing into that cap keeps
    # the face on the left as seen from outside.
    out = []
    for arc in arcs:
        if arc.circle.pair[0] == i:
            out.append(_OrientedArc(arc, True))
        elif arc.circle.pair[1] == i:
            out.append(_OrientedArc(arc, False))
    return out


def _cos_angular_radius(B: BallSet, i: int, j: int) -> float:
    """cos of the angular radius, seen from centre i, of the circle shared with sphere j."""
    d = float(np.linalg.norm(B[j].c - B[i].c))
    ri, rj = B[i].radius, B[j].radius
    return (d * d + ri * ri - rj * rj) / (2 * d * ri)


def _face_area(B: BallSet, arcs: list[EdgeArc], i: int) -> FacePatch:
    r = B[i].radius
    boundary = _face_boundary(B, arcs, i)
    if not boundary:
        probe = B[i].c + r * np.array([[0, 0, 1.0], [1.0, 0, 0], [0, 1.0, 0]])
        others = BallSet(tuple(s for k, s in enumerate(B) if k != i)) if len(B) > 1 else None
        full = others is None or bool(np.all(others.contains(probe, slack=-1e-12)))
        return FacePatch(i, 4 * math.pi * r * r if full else 0.0, r, loops=0)

    curvature = 0.0
    for oa in boundary:
        j = oa.arc.circle.pair[1] if oa.forward else oa.arc.circle.pair[0]
        curvature += _cos_angular_radius(B, i, j) * oa.arc.angle

    open_arcs = [oa for oa in boundary if not oa.closed]
    loops = len(boundary) - len(open_arcs)
    starts = np.array([oa.start_point() for oa in open_arcs]).reshape(-1, 3)
    turning = 0.0
    successor = {}
    for k, oa in enumerate(open_arcs):
        end = oa.end_point()
        dist = np.linalg.norm(starts - end, axis=1)
        cand = np.flatnonzero(dist <= VERTEX_MATCH_TOL * max(1.0, r))
        cand = [c for c in cand if c != k] or list(cand)
        if not cand:
            raise DegenerateIntersectionError(f"face {i}: unmatched arc endpoint {end}")
        # several arcs can start at one vertex when >3 spheres meet there;
        # follow the one that turns least to the left
        normal = (end - B[i].c) / r
        t_in = oa.end_tangent()
        best, best_angle = None, None
        for c in cand:
            t_out = open_arcs[c].start_tangent()
            ang = math.atan2(normal @ np.cross(t_in, t_out), t_in @ t_out)
            if best_angle is None or ang < best_angle:
                best, best_angle = c, ang
        successor[k] = best
        turning += best_angle
    seen = set()
    for k in successor:
        if k in seen:
            continue
        loops += 1
        while k not in seen:
            seen.add(k)
            k = successor[k]
    chi = 2 - loops
    area = r * r * (TWO_PI * chi - curvature - turning)
    return FacePatch(i, area, r, loops=loops)


def face_areas(B: BallSet, arcs: list[EdgeArc] | None = None) -> list[FacePatch]:
    """Gauss-Bonnet area of each sphere's share of the boundary.

    A patch with L boundary loops on a sphere of radius r has area
    r^2 (2 pi (2 - L) - sum of geodesic curvature - sum of turning angles);
    an arc of a circle with angular radius rho contributes cos(rho) per
    radian.  Each patch is assumed connected, which holds for equal radii.
    """
    if arcs is None:
        arcs = edge_arcs(B)
    faces = [_face_area(B, arcs, i) for i in range(len(B))]
    if not any(f.area > 0 for f in faces):
        raise DegenerateIntersectionError("the intersection has no boundary area")
    return faces


def vertices(B: BallSet, arcs: list[EdgeArc] | None = None) -> list[Vertex]:
    """Distinct arc endpoints together with the spheres they lie on."""
    if arcs is None:
        arcs = edge_arcs(B)
    found: list[np.ndarray] = []
    for arc in arcs:
        ends = arc.endpoints
        if ends is None:
            continue
        for p in ends:
            if not any(np.linalg.norm(p - q) <= VERTEX_MATCH_TOL for q in found):
                found.append(p)
    out = []
    for p in found:
        d = np.abs(np.linalg.norm(B.centers - p, axis=1) - B.radii)
        out.append(Vertex(p, tuple(int(k) for k in np.flatnonzero(d <= 1e-9))))
    return out


def adjacent_vertex_distance(arcs: list[EdgeArc]) -> float | None:
    """Shortest chord between the two endpoints of an edge arc, if any arc has endpoints."""
    chords = [a.chord() for a in arcs if a.endpoints is not None]
    return min(chords) if chords else None


def indirect_mean_width(faces: list[FacePatch], edges: list[EdgeArc]) -> float:
    curvature = sum(f.area / f.curvature_radius for f in faces)
    edge_term = sum(e.exterior_angle * e.arc_length for e in edges)
    return curvature / TWO_PI + edge_term / (4 * math.pi)


@dataclass(frozen=True)
class Skeleton:
    ballset: BallSet
    edges: list[EdgeArc]
    faces: list[FacePatch]
    vertices: list[Vertex]

    @property
    def surface_area(self) -> float:
        return math.fsum(f.area for f in self.faces)

    @property
    def mean_width(self) -> float:
        return indirect_mean_width(self.faces, self.edges)

    @property
    def lam(self) -> float | None:
        return adjacent_vertex_distance(self.edges)


def _pairwise_disjoint(B: BallSet) -> bool:
    for i, j in combinations(range(len(B)), 2):
        d = float(np.linalg.norm(B[i].c - B[j].c))
        if d >= B[i].radius + B[j].radius - 1e-12 * max(B[i].radius, B[j].radius):
            return True
    return False


def build_skeleton(B: BallSet) -> Skeleton:
    if _pairwise_disjoint(B):
        raise DegenerateIntersectionError("two of the balls are disjoint or tangent")
    arcs = edge_arcs(B)
    faces = face_areas(B, arcs)
    return Skeleton(B, arcs, faces, vertices(B, arcs))


@dataclass(frozen=True)
class BodyMeasures:
    """Measures of a ball intersection plus how the volume was obtained."""

    measures: Measures
    empty: bool = False
    volume_method: str = "quadrature"
    volume_std_error: float | None = None
    lam: float | None = None
    skeleton: Skeleton | None = field(default=None, repr=False)


def ballset_measures(B: BallSet, volume_method: str = "divergence", mc_config=None) -> BodyMeasures:
    """Volume, surface area and mean width of an equal-radius ball intersection.

    ``volume_method`` is ``"divergence"`` (deterministic surface quadrature)
    or ``"monte-carlo"`` (rejection sampling with ``mc_config``).  An empty
    or zero-volume intersection gives zero measures with ``empty=True``.
    """
    if not B.equal_radii:
        raise UnsupportedBallSetError("skeleton measures need all radii equal")
    try:
        skel = build_skeleton(B)
    except DegenerateIntersectionError:
        return BodyMeasures(Measures(0.0, 0.0, 0.0), empty=True, volume_method="none")
    std = None
    if volume_method == "divergence":
        from .numerics.divergence import divergence_volume

        volume = divergence_volume(B, skel)
        tag = "quadrature"
    elif volume_method == "monte-carlo":
        from .numerics.montecarlo import McConfig, mc_volume

        est = mc_volume(B, mc_config or McConfig())
        volume, std, tag = est.value, est.std_error, "monte-carlo"
    else:
        raise ValueError(f"unknown volume method {volume_method!r}")
    return BodyMeasures(
        Measures(volume, skel.surface_area, skel.mean_width),
        volume_method=tag,
        volume_std_error=std,
        lam=skel.lam,
        skeleton=skel,
    )

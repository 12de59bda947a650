"""Spheres, ball sets and the measure triple shared by the rest of the package."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BallmError",
    "DomainError",
    "Sphere",
    "BallSet",
    "Measures",
    "Direction",
    "point_in_ballset",
    "scale_ballset",
    "canonical_ballsets",
    "CANONICAL_NAMES",
]

MEMBERSHIP_SLACK = 1e-12


class BallmError(Exception):
    """Base class for errors raised by this package."""


class DomainError(BallmError, ValueError):
    """A parameter lies outside the domain of an operation."""


@dataclass(frozen=True)
class Sphere:
    center: tuple[float, float, float]
    radius: float

    def __post_init__(self):
        c = tuple(float(v) for v in self.center)
        if len(c) != 3:
            raise DomainError(f"sphere center needs 3 coordinates, got {len(c)}")
        if not all(math.isfinite(v) for v in c):
            raise DomainError(f"sphere center must be finite, got {c}")
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0):
            raise DomainError(f"sphere radius must be positive and finite, got {r}")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", r)

    @property
    def c(self) -> np.ndarray:
        return np.array(self.center)


@dataclass(frozen=True)
class BallSet:
    """Ordered collection of spheres; the body is the intersection of their balls."""

    spheres: tuple[Sphere, ...]

    def __post_init__(self):
        spheres = tuple(self.spheres)
        if not spheres:
            raise DomainError("a ball set needs at least one sphere")
        seen = set()
        for s in spheres:
            key = (s.center, s.radius)
            if key in seen:
                raise DomainError(f"duplicate sphere {s}")
            seen.add(key)
        object.__setattr__(self, "spheres", spheres)

    @classmethod
    def from_arrays(cls, centers, radii) -> "BallSet":
        centers = np.atleast_2d(np.asarray(centers, dtype=float))
        radii = np.broadcast_to(np.asarray(radii, dtype=float), (len(centers),))
        return cls(tuple(Sphere(tuple(c), r) for c, r in zip(centers, radii)))

    def __len__(self) -> int:
        return len(self.spheres)

    def __iter__(self):
        return iter(self.spheres)

    def __getitem__(self, i) -> Sphere:
        return self.spheres[i]

    @property
    def centers(self) -> np.ndarray:
        return np.array([s.center for s in self.spheres])

    @property
    def radii(self) -> np.ndarray:
        return np.array([s.radius for s in self.spheres])

    @property
    def equal_radii(self) -> bool:
        r = self.radii
        return bool(np.all(np.abs(r - r[0]) <= 1e-12 * r[0]))

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        """Intersection of the axis-aligned boxes of all spheres."""
        c, r = self.centers, self.radii[:, None]
        return (c - r).max(axis=0), (c + r).min(axis=0)

    def contains(self, points, slack: float = MEMBERSHIP_SLACK) -> np.ndarray:
        """Vectorised closed membership for an (n, 3) array of points."""
        p = np.asarray(points, dtype=float)
        d = np.linalg.norm(p[..., None, :] - self.centers, axis=-1)
        return np.all(d <= self.radii + slack, axis=-1)


@dataclass(frozen=True)
class Measures:
    volume: float
    surface_area: float
    mean_width: float

    def __post_init__(self):
        for name in ("volume", "surface_area", "mean_width"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v >= 0):
                raise DomainError(f"{name} must be finite and non-negative, got {v}")
            object.__setattr__(self, name, v)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.volume, self.surface_area, self.mean_width)

    def scaled(self, s: float) -> "Measures":
        return Measures(self.volume * s**3, self.surface_area * s**2, self.mean_width * s)


@dataclass(frozen=True)
class Direction:
    components: tuple[float, float, float]

    def __post_init__(self):
        u = tuple(float(v) for v in self.components)
        if len(u) != 3 or abs(math.sqrt(sum(v * v for v in u)) - 1.0) > 1e-12:
            raise DomainError(f"direction must be a unit 3-vector, got {u}")
        object.__setattr__(self, "components", u)

    @classmethod
    def normalized(cls, v: Iterable[float]) -> "Direction":
        v = np.asarray(list(v), dtype=float)
        n = np.linalg.norm(v)
        if n == 0 or not np.isfinite(n):
            raise DomainError("cannot normalise a zero or non-finite vector")
        return cls(tuple(v / n))

    @property
    def u(self) -> np.ndarray:
        return np.array(self.components)


def point_in_ballset(p: Sequence[float], B: BallSet) -> bool:
    """True iff ``p`` lies in every closed ball of ``B`` (1e-12 boundary slack)."""
    p = np.asarray(p, dtype=float)
    if p.shape != (3,) or not np.all(np.isfinite(p)):
        raise DomainError(f"point must be 3 finite coordinates, got {p}")
    return bool(B.contains(p))


def scale_ballset(B: BallSet, s: float) -> BallSet:
    if not s > 0:
        raise DomainError(f"scale factor must be positive, got {s}")
    return BallSet(tuple(Sphere(tuple(s * v for v in sp.center), s * sp.radius) for sp in B))


def _dihedron() -> BallSet:
    return BallSet.from_arrays([[0.5, 0, 0], [-0.5, 0, 0]], 1.0)


def _trihedron() -> BallSet:
    s3 = math.sqrt(3.0)
    return BallSet.from_arrays(
        [[1 / s3, 0, 0], [-1 / (2 * s3), 0.5, 0], [-1 / (2 * s3), -0.5, 0]], 1.0
    )


def _tetrahedron() -> BallSet:
    s3 = math.sqrt(3.0)
    return BallSet.from_arrays(
        [
            [1 / s3, 0, 0],
            [-1 / (2 * s3), 0.5, 0],
            [-1 / (2 * s3), -0.5, 0],
            [0, 0, math.sqrt(2.0 / 3.0)],
        ],
        1.0,
    )


def _hexahedron() -> BallSet:
    a = 1 / math.sqrt(2.0)
    return BallSet.from_arrays(np.vstack([a * np.eye(3), -a * np.eye(3)])[[0, 3, 1, 4, 2, 5]], 1.0)


def _dodecahedron() -> BallSet:
    # centres along the 12 icosahedron vertex directions, neighbours at distance 1
    g = (1 + math.sqrt(5.0)) / 2
    verts = []
    for a in (-1.0, 1.0):
        for b in (-g, g):
            verts += [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)]
    dirs = np.array(verts) / math.hypot(1.0, g)
    return BallSet.from_arrays(dirs / math.sqrt(2 - 2 / math.sqrt(5.0)), 1.0)


_CANONICAL = {
    "dihedron": _dihedron,
    "trihedron": _trihedron,
    "tetrahedron": _tetrahedron,
    "hexahedron": _hexahedron,
    "dodecahedron": _dodecahedron,
}
CANONICAL_NAMES = tuple(_CANONICAL)


def canonical_ballsets(name: str) -> BallSet:
    """Unit-ball configurations of the named spherical polyhedra.

    ``dihedron``, ``trihedron`` and ``tetrahedron`` have mutually unit-distant
    centres; ``hexahedron`` has centres at distance 1/sqrt(2) along each axis;
    ``dodecahedron`` has twelve centres in icosahedral directions with
    neighbouring centres at distance 1.
    """
    try:
        return _CANONICAL[name]()
    except KeyError:
        raise DomainError(
            f"unknown solid {name!r}; expected one of {', '.join(CANONICAL_NAMES)}"
        ) from None

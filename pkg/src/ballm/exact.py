"""Closed-form volume, surface area and mean width of lens-like solids.

Every solid is built from unit balls (radius 1).  Mean width follows the
normalisation in which the unit ball has mean width 2; some authors report
twice this value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import DomainError, Measures

__all__ = [
    "AngularRadius",
    "CenterDistance",
    "CylinderLength",
    "arcsec",
    "dihedron_measures",
    "lens_measures",
    "lens_volume_from_delta",
    "trihedron_measures",
    "reuleaux_tetrahedron_measures",
    "meissner_measures",
    "capped_cylinder_measures",
    "symmetric_segment_measures",
    "cap_body_measures",
    "unit_ball_measures",
]

HALF_PI = 0.5 * math.pi
# typed-in decimals such as 1.5707963268 overshoot pi/2 slightly; snap them
ENDPOINT_SNAP = 1e-9


def _snap(x: float, lo: float, hi: float) -> float:
    if lo - ENDPOINT_SNAP <= x < lo:
        return lo
    if hi < x <= hi + ENDPOINT_SNAP:
        return hi
    return x


@dataclass(frozen=True)
class AngularRadius:
    """Angular radius of a spherical cap, in radians, on [0, pi/2]."""

    phi: float

    def __post_init__(self):
        phi = _snap(float(self.phi), 0.0, HALF_PI)
        if not (0.0 <= phi <= HALF_PI):
            raise DomainError(f"angular radius phi must lie in [0, pi/2], got {phi}")
        object.__setattr__(self, "phi", phi)

    @classmethod
    def of(cls, value) -> "AngularRadius":
        return value if isinstance(value, cls) else cls(value)

    @classmethod
    def from_delta(cls, delta) -> "AngularRadius":
        d = CenterDistance.of(delta).delta
        return cls(math.acos(d / 2.0))


@dataclass(frozen=True)
class CenterDistance:
    """Distance between the centres of two unit spheres, on [0, 2]."""

    delta: float

    def __post_init__(self):
        d = _snap(float(self.delta), 0.0, 2.0)
        if not (0.0 <= d <= 2.0):
            raise DomainError(f"centre distance delta must lie in [0, 2], got {d}")
        object.__setattr__(self, "delta", d)

    @classmethod
    def of(cls, value) -> "CenterDistance":
        return value if isinstance(value, cls) else cls(value)


@dataclass(frozen=True)
class CylinderLength:
    ell: float

    def __post_init__(self):
        ell = float(self.ell)
        if not (ell >= 0.0 and math.isfinite(ell)):
            raise DomainError(f"cylinder length ell must be >= 0, got {ell}")
        object.__setattr__(self, "ell", ell)

    @classmethod
    def of(cls, value) -> "CylinderLength":
        return value if isinstance(value, cls) else cls(value)


def arcsec(x: float) -> float:
    if not x >= 1:
        raise DomainError(f"arcsec is only defined here for x >= 1, got {x}")
    return math.acos(1.0 / x)


def unit_ball_measures() -> Measures:
    return Measures(4 * math.pi / 3, 4 * math.pi, 2.0)


def dihedron_measures() -> Measures:
    """Symmetric lens of two unit balls through each other's centres."""
    pi = math.pi
    return Measures(5 * pi / 12, 2 * pi, 1 + pi / (4 * math.sqrt(3.0)))


def lens_measures(phi) -> Measures:
    """Symmetric lens whose two caps have angular radius ``phi``."""
    phi = AngularRadius.of(phi).phi
    c, s = math.cos(phi), math.sin(phi)
    # 1 - cos(phi) without cancellation; 2 - 3c + c^3 = (1 - c)^2 (2 + c)
    t = 2 * math.sin(phi / 2) ** 2
    return Measures(
        (2 * math.pi / 3) * t * t * (2 + c),
        4 * math.pi * t,
        2 * t + (HALF_PI - phi) * s,
    )


def lens_volume_from_delta(delta) -> float:
    d = CenterDistance.of(delta).delta
    # 1 - 3d/4 + d^3/16 = (1 - d/2)^2 (1 + d/4)
    g = 1 - d / 2
    return (4 * math.pi / 3) * g * g * (1 + d / 4)


def trihedron_measures() -> Measures:
    pi, a = math.pi, arcsec(3)
    s3 = math.sqrt(3.0)
    return Measures(
        (2 * math.sqrt(2.0) + 24 * pi - 57 * a) / 12,
        6 * (pi - 2 * a),
        (12 * pi - (24 - s3 * pi) * a) / (4 * pi),
    )


def reuleaux_tetrahedron_measures() -> Measures:
    pi, a = math.pi, arcsec(3)
    s3 = math.sqrt(3.0)
    return Measures(
        (3 * math.sqrt(2.0) + 32 * pi - 81 * a) / 12,
        2 * (4 * pi - 9 * a),
        (16 * pi - (36 - s3 * pi) * a) / (4 * pi),
    )


def meissner_measures() -> Measures:
    """Meissner tetrahedron of constant width 1."""
    pi, a = math.pi, arcsec(3)
    s3 = math.sqrt(3.0)
    return Measures((8 - 3 * s3 * a) * pi / 12, (4 - s3 * a) * pi / 2, 1.0)


def capped_cylinder_measures(ell) -> Measures:
    """Unit-radius cylinder of length ``ell`` with hemispherical ends."""
    ell = CylinderLength.of(ell).ell
    pi = math.pi
    return Measures((ell + 4 / 3) * pi, 2 * (ell + 2) * pi, (ell + 4) / 2)


def symmetric_segment_measures(phi) -> Measures:
    """Unit ball with two opposite caps of angular radius ``phi`` cut off."""
    phi = AngularRadius.of(phi).phi
    c, s = math.cos(phi), math.sin(phi)
    return Measures(
        (2 * math.pi / 3) * (2 + s * s) * c,
        2 * math.pi * (2 * c + s * s),
        2 * c + phi * s,
    )


def cap_body_measures(phi) -> Measures:
    """Convex hull of the unit ball and a centred axial segment.

    The segment half-length is 1/cos(phi), so phi = pi/2 is excluded.
    """
    phi = AngularRadius.of(phi).phi
    if phi >= HALF_PI:
        raise DomainError(f"cap body needs phi < pi/2, got {phi}")
    c = math.cos(phi)
    factor = (1 + c * c) / c
    return Measures((2 * math.pi / 3) * factor, 2 * math.pi * factor, factor)

"""Volume, surface area and mean width of intersections of balls and related solids."""

from .exact import (
    AngularRadius,
    CenterDistance,
    CylinderLength,
    cap_body_measures,
    capped_cylinder_measures,
    dihedron_measures,
    lens_measures,
    lens_volume_from_delta,
    meissner_measures,
    reuleaux_tetrahedron_measures,
    symmetric_segment_measures,
    trihedron_measures,
    unit_ball_measures,
)
from .geometry import (
    BallmError,
    BallSet,
    CANONICAL_NAMES,
    Direction,
    DomainError,
    Measures,
    Sphere,
    canonical_ballsets,
    point_in_ballset,
    scale_ballset,
)
from .hyperlens import gamma_real, gauss_2f1, ndim_lens_area, ndim_lens_volume
from .skeleton import ballset_measures, build_skeleton

__version__ = "0.1.0"

import math

import pytest

from ballm import exact
from ballm.geometry import BallSet, Sphere, canonical_ballsets
from ballm.numerics.divergence import divergence_volume
from ballm.numerics.quadrature import paper_quadrature, revolution_measures
from ballm.hulls import CapBody, CappedCylinder, SymmetricSegment

A3 = math.acos(1 / 3)
CLOSED = {
    "dihedron": exact.dihedron_measures,
    "trihedron": exact.trihedron_measures,
    "tetrahedron": exact.reuleaux_tetrahedron_measures,
}


def test_examples():
    assert paper_quadrature("dihedron", "VL") == pytest.approx(5 * math.pi / 12, abs=1e-8)
    assert paper_quadrature("tetrahedron", "VL") == pytest.approx((3 * math.sqrt(2) + 32 * math.pi - 81 * A3) / 12, abs=1e-8)
    assert paper_quadrature("trihedron", "AR") == pytest.approx(6 * (math.pi - 2 * A3), abs=1e-8)


@pytest.mark.parametrize("name", sorted(CLOSED))
def test_oracle_triangle(name):
    m = CLOSED[name]()
    q_vl, q_ar = paper_quadrature(name, "VL"), paper_quadrature(name, "AR")
    d_vl = divergence_volume(canonical_ballsets(name))
    for a, b in [(q_vl, m.volume), (d_vl, m.volume), (q_vl, d_vl), (q_ar, m.surface_area)]:
        assert abs(a - b) <= 1e-7


def test_bad_arguments():
    with pytest.raises(ValueError):
        paper_quadrature("hexahedron", "VL")
    with pytest.raises(ValueError):
        paper_quadrature("dihedron", "MW")


def test_divergence_unit_ball():
    assert divergence_volume(BallSet((Sphere((0.3, -1, 2), 1),))) == pytest.approx(4 * math.pi / 3, abs=1e-9)


def test_divergence_is_translation_invariant():
    B = BallSet.from_arrays(canonical_ballsets("trihedron").centers + [0.3, -2.0, 5.0], 1.0)
    assert divergence_volume(B) == pytest.approx(exact.trihedron_measures().volume, abs=1e-9)


@pytest.mark.parametrize(
    "body, closed",
    [
        (CappedCylinder(1.5), exact.capped_cylinder_measures(1.5)),
        (SymmetricSegment(0.9), exact.symmetric_segment_measures(0.9)),
        (CapBody(1.2), exact.cap_body_measures(1.2)),
    ],
)
def test_revolution_measures(body, closed):
    for got, want in zip(revolution_measures(body), closed.as_tuple()):
        assert got == pytest.approx(want, abs=1e-10)

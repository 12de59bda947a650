import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ballm.exact import lens_measures
from ballm.geometry import DomainError
from ballm.hyperlens import (
    Dimension,
    HypergeomParams,
    gamma_real,
    gauss_2f1,
    ndim_lens_area,
    ndim_lens_volume,
)

mp.mp.dps = 60


def test_gamma_known_values():
    assert gamma_real(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma_real(5) == pytest.approx(24, rel=1e-14)
    assert gamma_real(1) == pytest.approx(1, rel=1e-14)
    with pytest.raises(DomainError):
        gamma_real(0)


@given(st.floats(1e-3, 100))
def test_gamma_against_mpmath(x):
    assert gamma_real(x) == pytest.approx(float(mp.gamma(x)), rel=1e-13)


def test_2f1_known_values():
    # 2F1(1, 1; 2; z) = -log(1 - z) / z
    z = 0.5
    assert gauss_2f1(HypergeomParams(1, 1, 2, z)) == pytest.approx(-math.log(1 - z) / z, rel=1e-14)
    # terminating series: 2F1(-2, b; c; z) is a quadratic
    assert gauss_2f1(HypergeomParams(-2, 1, 1, 0.3)) == pytest.approx((1 - 0.3) ** 2, rel=1e-15)
    assert gauss_2f1(HypergeomParams(0.5, 0.5, 1.5, 0)) == 1.0


@pytest.mark.parametrize(
    "a, b, c, z",
    [(0.5, -1, 1.5, 0.9), (0.5, -3.5, 1.5, 0.99), (0.5, 2.5, 1.5, 0.95), (1.3, 0.7, 2.9, 0.999), (0.25, 0.5, 0.75, 0.6)],
)
def test_2f1_against_mpmath(a, b, c, z):
    assert gauss_2f1(HypergeomParams(a, b, c, z)) == pytest.approx(float(mp.hyp2f1(a, b, c, z)), rel=1e-12)


@pytest.mark.parametrize("bad", [dict(c=0), dict(c=-2), dict(z=1.0), dict(z=-0.1)])
def test_2f1_domain(bad):
    kw = dict(a=0.5, b=0.5, c=1.5, z=0.5) | bad
    with pytest.raises(DomainError):
        HypergeomParams(**kw)


@pytest.mark.parametrize("n", [1, 0, 2.5, True])
def test_dimension_domain(n):
    with pytest.raises(DomainError):
        Dimension(n)


def mp_lens(n, phi, which):
    """Reference via the regularised incomplete beta at 60 digits."""
    x = mp.sin(mp.mpf(phi)) ** 2
    if which == "volume":
        whole = mp.pi ** (mp.mpf(n) / 2) / mp.gamma(1 + mp.mpf(n) / 2)
        p = mp.mpf(n + 1) / 2
    else:
        whole = 2 * mp.pi ** (mp.mpf(n) / 2) / mp.gamma(mp.mpf(n) / 2)
        p = mp.mpf(n - 1) / 2
    return whole * mp.betainc(p, mp.mpf(1) / 2, 0, x, regularized=True)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 8, 13])
@pytest.mark.parametrize("phi", [1e-3, 0.2, math.pi / 4, 1.0, 1.5, math.pi / 2])
def test_ndim_lens_against_mpmath(n, phi):
    assert ndim_lens_volume(n, phi) == pytest.approx(float(mp_lens(n, phi, "volume")), rel=1e-12)
    assert ndim_lens_area(n, phi) == pytest.approx(float(mp_lens(n, phi, "area")), rel=1e-12)


def test_two_dimensional_lens_is_a_circular_lens():
    # two unit discs: area 2(phi - sin phi cos phi), perimeter 4 phi
    phi = 0.7
    assert ndim_lens_volume(2, phi) == pytest.approx(2 * (phi - math.sin(phi) * math.cos(phi)), rel=1e-13)
    assert ndim_lens_area(2, phi) == pytest.approx(4 * phi, rel=1e-13)


def test_full_overlap_is_the_ball():
    for n in (2, 3, 6):
        ball = math.pi ** (n / 2) / math.gamma(1 + n / 2)
        assert ndim_lens_volume(n, math.pi / 2) == pytest.approx(ball, rel=1e-13)
    assert ndim_lens_volume(4, 0) == 0.0


@given(st.floats(0, math.pi / 2))
def test_three_dimensional_reduction(phi):
    m = lens_measures(phi)
    assert ndim_lens_volume(3, phi) == pytest.approx(m.volume, rel=1e-12, abs=1e-300)
    assert ndim_lens_area(3, phi) == pytest.approx(m.surface_area, rel=1e-12, abs=1e-300)


@given(st.integers(2, 12), st.floats(0, math.pi / 2), st.floats(0, math.pi / 2))
def test_monotone_in_phi(n, a, b):
    lo, hi = sorted((a, b))
    assert ndim_lens_volume(n, lo) <= ndim_lens_volume(n, hi) * (1 + 1e-13)


def test_vectorised_grid_is_finite():
    vals = [ndim_lens_volume(n, p) for n in range(2, 30) for p in np.linspace(0, math.pi / 2, 9)]
    assert np.all(np.isfinite(vals))

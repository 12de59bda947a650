"""Iterated adaptive quadrature of the explicit volume and area integrals.

Dihedron, trihedron and Reuleaux tetrahedron are integrated as graphs over a
symmetric piece of their footprint, then multiplied by the symmetry order.
The area integrands blow up like 1/sqrt at the face rim, where the graph
meets the plane z = 0 vertically; the inner variable is therefore
substituted so that the rim maps to t = 0 and the Jacobian absorbs the
singularity.

Surfaces of revolution (capped cylinder, symmetric segment, cap body) are
handled by :func:`revolution_measures` from the body's profile.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .divergence import QuadratureError

__all__ = ["paper_quadrature", "revolution_measures", "QuadratureError", "QUAD_TOL"]

QUAD_TOL = 1e-9
_INNER = 1e-13
_OUTER = 1e-12
SQ3 = math.sqrt(3.0)


def _quad(f, a, b, eps, what):
    if b <= a:
        return 0.0
    val, err, *rest = integrate.quad(f, a, b, epsabs=eps, epsrel=0.0, limit=400, full_output=1)
    if len(rest) >= 2 and err > QUAD_TOL:
        raise QuadratureError(f"{what} on [{a}, {b}]: error estimate {err:.3e} ({rest[1]})")
    return val


def _sqrt0(x):
    return math.sqrt(max(x, 0.0))


# dihedron: centres (+-1/2, 0, 0); first-octant piece 0 <= x <= 1/2


def _dihedron(which):
    def f(x, y):
        return _sqrt0(1 - (x + 0.5) ** 2 - y * y)

    def a(x):
        return _sqrt0(1 - (x + 0.5) ** 2)

    def inner(x):
        if which == "AR":
            # y = a sin t turns (1/f) dy into dt over [0, pi/2]
            return math.pi / 2
        A = a(x)
        return _quad(lambda t: f(x, A * math.sin(t)) * A * math.cos(t), 0.0, math.pi / 2, _INNER, "dihedron inner")

    return 8 * _quad(inner, 0.0, 0.5, _OUTER, "dihedron outer")


# trihedron and tetrahedron share the sphere centred at (x0, 0, 0), x0 = 1/sqrt3


_X0 = 1 / SQ3


def _f(x, y):
    return _sqrt0(1 - (x - _X0) ** 2 - y * y)


def _tri_c(y):
    """c(y): the bisecting line between neighbouring faces, x = -y / sqrt3."""
    return -y / SQ3


def _rim_piece(y, x_hi, which):
    """Integral over x from the rim a(y) = x0 - W to x_hi, W = sqrt(1 - y^2).

    With x = x0 - W cos t the graph is f = W sin t and dx = W sin t dt, so the
    area integrand (1/f) dx becomes dt and the inner area integral is t_hi.
    """
    W = _sqrt0(1 - y * y)
    t_hi = math.acos(max(-1.0, min(1.0, (_X0 - x_hi) / W)))
    if which == "AR":
        return t_hi

    def g(t):
        x = _X0 - W * math.cos(t)
        return _f(x, y) * W * math.sin(t)

    return _quad(g, 0.0, t_hi, _INNER, "rim piece")


def _trihedron(which):
    def inner(y):
        return _rim_piece(y, _tri_c(y), which)

    return 12 * _quad(inner, 0.0, 0.5, _OUTER, "trihedron outer")


_TOP = math.sqrt(2.0 / 3.0)


def _g(x, y):
    """Lower cap of the top ball, centred at (0, 0, sqrt(2/3))."""
    return _TOP - _sqrt0(1 - x * x - y * y)


def _tet_b(y):
    """b(y): where the lower cap of the top ball meets the lower half of the face sphere.

    For x in [a, b] the body spans -f..f; on [b, c] the top ball cuts it off
    from below, leaving thickness f - g.  The crossing g = -f lies on the
    radical plane of the two spheres, which reduces to a quadratic in x.
    """
    return (1.0 - _sqrt0(6.0 - 8.0 * y * y)) / (2.0 * SQ3)


def _tetrahedron(which):
    def inner(y):
        b = _tet_b(y)
        c = _tri_c(y)
        first = _rim_piece(y, b, which)
        if which == "VL":
            second = _quad(lambda x: _f(x, y) - _g(x, y), b, c, _INNER, "sliver VL")
        else:

            def surf(x):
                fv = _f(x, y)
                gv = _sqrt0(1 - x * x - y * y)
                top = 1 / fv if fv > 0 else 0.0
                bot = 1 / gv if gv > 0 else 0.0
                return top + bot

            second = _quad(surf, b, c, _INNER, "sliver AR")
        return 12 * first + 6 * second

    return _quad(inner, 0.0, 0.5, _OUTER, "tetrahedron outer")


_SOLIDS = {"dihedron": _dihedron, "trihedron": _trihedron, "tetrahedron": _tetrahedron}


def paper_quadrature(solid: str, which: str) -> float:
    """Volume (``"VL"``) or surface area (``"AR"``) from the explicit double integrals."""
    if solid not in _SOLIDS:
        raise ValueError(f"no explicit integrals for {solid!r}; choose from {sorted(_SOLIDS)}")
    if which not in ("VL", "AR"):
        raise ValueError(f"which must be 'VL' or 'AR', got {which!r}")
    return _SOLIDS[solid](which)


def revolution_measures(body) -> tuple[float, float, float]:
    """(volume, area, mean width) of a body of revolution about the z axis.

    ``body.profile()`` yields ``(z0, z1, rho, rho_drho)`` pieces giving the
    radius and rho * d(rho)/dz; ``body.flat_disks`` lists radii of planar
    end disks; the mean width integrates the support function over a
    meridian, MW = 2 int_0^1 h(t e_z + sqrt(1 - t^2) e_x) dt.
    """
    vol = area = 0.0
    for z0, z1, rho, rr in body.profile():
        vol += _quad(lambda z: math.pi * rho(z) ** 2, z0, z1, 1e-13, "revolution volume")
        area += _quad(
            lambda z: 2 * math.pi * math.sqrt(rho(z) ** 2 + rr(z) ** 2), z0, z1, 1e-13, "revolution area"
        )
    area += sum(math.pi * r * r for r in body.flat_disks)

    def h(t):
        u = np.array([[math.sqrt(max(1 - t * t, 0.0)), 0.0, t]])
        return float(body.support(u)[0])

    kinks = sorted(k for k in getattr(body, "support_kinks", ()) if 0 < k < 1)
    pts = [0.0] + kinks + [1.0]
    mw = 2 * sum(_quad(h, a, b, 1e-13, "support integral") for a, b in zip(pts[:-1], pts[1:]))
    return vol, area, mw

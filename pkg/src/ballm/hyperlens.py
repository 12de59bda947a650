"""Gamma, Gauss 2F1 and the n-dimensional symmetric lens.

The n-dimensional formulas give volume and boundary measure of the
intersection of two unit n-balls whose caps have angular radius ``phi``.
At n = 3 they collapse to the familiar cubic/linear expressions in cos(phi).
Only volume and surface area generalise this way; there is no mean-width
analogue here.  For k = 3 the normalised quermassintegral
``2 Gamma(1 + k/2) / pi**(k/2) * W_{k-1}`` coincides with mean width, but the
W_k family is not implemented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exact import AngularRadius
from .geometry import BallmError, DomainError

__all__ = [
    "Dimension",
    "HypergeomParams",
    "SeriesDivergenceError",
    "gamma_real",
    "gauss_2f1",
    "ndim_lens_volume",
    "ndim_lens_area",
]

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2 * math.pi)

MAX_TERMS = 10_000
TAIL_TOL = 1e-14


class SeriesDivergenceError(BallmError, ArithmeticError):
    """The hypergeometric series could not be summed to the requested accuracy."""


@dataclass(frozen=True)
class Dimension:
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def of(cls, value) -> "Dimension":
        return value if isinstance(value, cls) else cls(value)


def _nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


@dataclass(frozen=True)
class HypergeomParams:
    a: float
    b: float
    c: float
    z: float

    def __post_init__(self):
        if _nonpositive_integer(self.c):
            raise DomainError(f"c must not be a non-positive integer, got {self.c}")
        if not (0.0 <= self.z < 1.0):
            raise DomainError(f"z must lie in [0, 1), got {self.z}")


def gamma_real(x: float) -> float:
    """Euler's gamma function for real ``x > 0``."""
    if not x > 0:
        raise DomainError(f"gamma_real needs x > 0, got {x}")
    return _gamma(x)


def _gamma(x: float) -> float:
    if x < 0.5:
        if float(x).is_integer():
            raise DomainError(f"gamma has a pole at {x}")
        # reflection; used only by the 1 - z continuation below
        return math.pi / (math.sin(math.pi * x) * _gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for k, coef in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += coef / (x + k)
    t = x + _LANCZOS_G + 0.5
    return _SQRT_2PI * t ** (x + 0.5) * math.exp(-t) * acc


def _ratio_sup(a: float, b: float, c: float, z: float, k: int) -> float | None:
    """Upper bound on |t_{j+1} / t_j| for all j >= k, or None if not yet available.

    The ratio is z (j + a)/(j + 1) * (j + b)/(j + c); once every shifted
    parameter is positive each factor is monotone in j and tends to 1, so
    its supremum over j >= k is max(value at k, 1).
    """
    if k + min(a, b, c) <= 0:
        return None
    return z * max((k + a) / (k + 1), 1.0) * max((k + b) / (k + c), 1.0)


def _series(a: float, b: float, c: float, z: float) -> float:
    """Direct power series stopped by a rigorous geometric tail bound."""
    total, term = 1.0, 1.0
    for k in range(MAX_TERMS):
        num = (a + k) * (b + k)
        if num == 0.0:
            return total  # terminating series, summed exactly
        term *= num / ((c + k) * (k + 1)) * z
        total += term
        R = _ratio_sup(a, b, c, z, k + 1)
        if R is not None and R < 1.0:
            tail = abs(term) * R / (1.0 - R)
            if tail <= TAIL_TOL * abs(total) or tail == 0.0:
                return total
    raise SeriesDivergenceError(
        f"2F1({a}, {b}; {c}; {z}) did not reach tail bound {TAIL_TOL} in {MAX_TERMS} terms"
    )


def gauss_2f1(p: HypergeomParams) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for 0 <= z < 1."""
    a, b, c, z = p.a, p.b, p.c, p.z
    if z == 0.0 or _nonpositive_integer(a) or _nonpositive_integer(b) or z <= 0.75:
        return _series(a, b, c, z)
    s = c - a - b
    if _nonpositive_integer(c - a) or _nonpositive_integer(c - b):
        # Euler: F(a, b; c; z) = (1 - z)^(c - a - b) F(c - a, c - b; c; z), a polynomial here
        return (1.0 - z) ** s * _series(c - a, c - b, c, z)
    if float(s).is_integer():
        return _series(a, b, c, z)
    # Near z = 1 the direct series needs too many terms; continue via 1 - z.
    w = 1.0 - z
    g = _gamma
    first = g(c) * g(s) / (g(c - a) * g(c - b)) * _series(a, b, 1.0 - s, w)
    second = w**s * g(c) * g(-s) / (g(a) * g(b)) * _series(c - a, c - b, 1.0 + s, w)
    return first + second


def _lens_bracket(p: float, b: float, coef: float, phi: float) -> float:
    """1 - coef * cos(phi) * 2F1(1/2, b; 3/2; cos(phi)^2).

    The bracket is the lens's share of the full ball (or sphere).  For
    phi <= pi/4 it is summed as the equivalent regularised incomplete beta
    I_x(p, 1/2), x = sin(phi)^2, whose series has only positive terms; the
    direct form cancels catastrophically there.
    """
    c = math.cos(phi)
    x = math.sin(phi) ** 2
    if x > 0.5:
        return 1 - coef * c * gauss_2f1(HypergeomParams(0.5, b, 1.5, c * c))
    q = 0.5
    beta = _gamma(p) * _gamma(q) / _gamma(p + q)
    return x**p * c / (p * beta) * _series(p + q, 1.0, p + 1.0, x)


def ndim_lens_volume(n, phi) -> float:
    """Volume of the symmetric lens of two unit n-balls with cap angle ``phi``."""
    n = Dimension.of(n).n
    phi = AngularRadius.of(phi).phi
    ball = math.pi ** (n / 2) / gamma_real(1 + n / 2)
    if phi == 0.0:
        return 0.0
    coef = 2 * gamma_real(1 + n / 2) / (math.sqrt(math.pi) * gamma_real((n + 1) / 2))
    return ball * _lens_bracket((n + 1) / 2, (1 - n) / 2, coef, phi)


def ndim_lens_area(n, phi) -> float:
    """Boundary measure of the same lens (a perimeter when n = 2)."""
    n = Dimension.of(n).n
    phi = AngularRadius.of(phi).phi
    sphere = 2 * math.pi ** (n / 2) / gamma_real(n / 2)
    if phi == 0.0:
        return 0.0
    coef = 2 * gamma_real(n / 2) / (math.sqrt(math.pi) * gamma_real((n - 1) / 2))
    return sphere * _lens_bracket((n - 1) / 2, (3 - n) / 2, coef, phi)

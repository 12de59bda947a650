"""Cross-check every closed form against independent numerical oracles.

Closed forms are looked up on :mod:`ballm.exact` at call time so a perturbed
formula (for example in a mutation test) is caught by the same suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import exact, hyperlens
from .geometry import canonical_ballsets
from .hulls import CapBody, CappedCylinder, MeissnerTetrahedron, SymmetricSegment
from .numerics.montecarlo import McConfig, mc_mean_width, mc_surface_area, mc_volume
from .numerics.quadrature import paper_quadrature, revolution_measures
from .numerics.support import support_exact
from .skeleton import ballset_measures

__all__ = ["Check", "run_verify", "worst", "ELL_GRID", "PHI_GRID", "MC_SIGMAS"]

MC_SIGMAS = 4.0
ELL_GRID = (0.0, 0.5, 1.0, 2.0)
PHI_GRID = (0.0, math.pi / 6, math.pi / 3, 4 * math.pi / 9)
LENS_PHI_GRID = tuple(k * math.pi / 40 for k in range(1, 21))
RATIO_TARGETS = {"trihedron": (0.154, 1e-3), "tetrahedron": (0.422, 1e-3), "hexahedron": (1.508, 2e-3)}
_FIELDS = ("volume", "surface_area", "mean_width")


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    reference: float
    tolerance: float
    method: str

    @property
    def error(self) -> float:
        return abs(self.value - self.reference)

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tolerance)

    @property
    def severity(self) -> float:
        """Error in units of the tolerance; above 1 means failure."""
        if self.tolerance > 0:
            return self.error / self.tolerance
        return 0.0 if self.error == 0 else math.inf


def worst(checks: list[Check]) -> Check:
    return max(checks, key=lambda c: c.severity)


def _closed_forms():
    return {
        "dihedron": exact.dihedron_measures(),
        "trihedron": exact.trihedron_measures(),
        "tetrahedron": exact.reuleaux_tetrahedron_measures(),
    }


def _mc(name, est, reference) -> Check:
    return Check(name, est.value, reference, MC_SIGMAS * est.std_error + 1e-12, "monte-carlo")


def _ball_solids(tol, cfg, n_dirs):
    out = []
    for solid, m in _closed_forms().items():
        for which, ref in (("VL", m.volume), ("AR", m.surface_area)):
            out.append(Check(f"{solid} {which} quadrature", paper_quadrature(solid, which), ref, tol, "quadrature"))
        B = canonical_ballsets(solid)
        body = ballset_measures(B)
        sm = body.measures
        out.append(Check(f"{solid} VL divergence", sm.volume, m.volume, tol, "quadrature"))
        out.append(Check(f"{solid} AR Gauss-Bonnet", sm.surface_area, m.surface_area, tol, "skeleton"))
        out.append(Check(f"{solid} MW indirect", sm.mean_width, m.mean_width, tol, "skeleton"))
        if solid in RATIO_TARGETS:
            target, width = RATIO_TARGETS[solid]
            out.append(Check(f"{solid} VL/lambda^3", m.volume / body.lam**3, target, width, "closed-form"))
        if cfg is not None:
            out.append(_mc(f"{solid} VL monte-carlo", mc_volume(B, cfg), m.volume))
            out.append(_mc(f"{solid} AR monte-carlo", mc_surface_area(B, cfg), m.surface_area))
            out.append(_mc(f"{solid} MW monte-carlo", mc_mean_width(B, n_dirs, cfg.seed), m.mean_width))
    return out


def _reuleaux_widths(n_dirs, seed):
    rng = np.random.default_rng(seed)
    U = rng.standard_normal((n_dirs, 3))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    h = support_exact(canonical_ballsets("tetrahedron"), np.vstack([U, -U]))
    w = h[:n_dirs] + h[n_dirs:]
    lo, hi = 1.0, math.sqrt(3.0) - 1 / math.sqrt(2.0)
    # report how far the sampled widths stray outside [lo, hi]
    return [
        Check("tetrahedron widths >= 1", max(lo - float(w.min()), 0.0), 0.0, 1e-6, "skeleton"),
        Check("tetrahedron widths <= sqrt3 - 1/sqrt2", max(float(w.max()) - hi, 0.0), 0.0, 1e-6, "skeleton"),
    ]


def _meissner(tol, cfg):
    m = exact.meissner_measures()
    r = exact.reuleaux_tetrahedron_measures()
    w = m.mean_width
    out = [
        # constant-width bodies satisfy V = w S / 2 - pi w^3 / 3
        Check("meissner Blaschke relation", m.volume, w * m.surface_area / 2 - math.pi * w**3 / 3, tol, "closed-form"),
        Check("meissner constant width", w, 1.0, tol, "closed-form"),
        Check("meissner VL below Reuleaux", float(m.volume < r.volume), 1.0, 0.0, "closed-form"),
        Check("meissner AR below Reuleaux", float(m.surface_area < r.surface_area), 1.0, 0.0, "closed-form"),
        Check("meissner MW below Reuleaux", float(m.mean_width < r.mean_width), 1.0, 0.0, "closed-form"),
    ]
    if cfg is not None:
        out.append(_mc("meissner VL monte-carlo", mc_volume(MeissnerTetrahedron(), cfg), m.volume))
    return out


def _families(tol, cfg, n_dirs):
    cases = [(f"capped-cylinder ell={v:g}", CappedCylinder(v), exact.capped_cylinder_measures(v)) for v in ELL_GRID]
    for phi in PHI_GRID:
        cases.append((f"segment phi={phi:.6f}", SymmetricSegment(phi), exact.symmetric_segment_measures(phi)))
        cases.append((f"cap-body phi={phi:.6f}", CapBody(phi), exact.cap_body_measures(phi)))
    out = []
    for label, body, m in cases:
        q = revolution_measures(body)
        for field, value in zip(_FIELDS, q):
            out.append(Check(f"{label} {field} revolution", value, getattr(m, field), tol, "quadrature"))
        if cfg is not None:
            out.append(_mc(f"{label} VL monte-carlo", mc_volume(body, cfg), m.volume))
            out.append(_mc(f"{label} AR monte-carlo", mc_surface_area(body, cfg), m.surface_area))
            out.append(_mc(f"{label} MW monte-carlo", mc_mean_width(body, n_dirs, cfg.seed), m.mean_width))
    return out


def _reductions():
    out = []
    ball = exact.unit_ball_measures()
    degenerate = {
        "capped-cylinder ell=0": exact.capped_cylinder_measures(0.0),
        "segment phi=0": exact.symmetric_segment_measures(0.0),
        "cap-body phi=0": exact.cap_body_measures(0.0),
        "lens phi=pi/2": exact.lens_measures(math.pi / 2),
    }
    for label, m in degenerate.items():
        for field in _FIELDS:
            out.append(Check(f"{label} {field} = unit ball", getattr(m, field), getattr(ball, field), 1e-13, "closed-form"))
    for phi in LENS_PHI_GRID:
        lm = exact.lens_measures(phi)
        rel = 1e-12
        out.append(Check(f"lens phi={phi:.4f} VL n=3", hyperlens.ndim_lens_volume(3, phi), lm.volume, rel * lm.volume, "closed-form"))
        out.append(Check(f"lens phi={phi:.4f} AR n=3", hyperlens.ndim_lens_area(3, phi), lm.surface_area, rel * lm.surface_area, "closed-form"))
        out.append(Check(f"lens phi={phi:.4f} VL from delta", exact.lens_volume_from_delta(2 * math.cos(phi)), lm.volume, rel * lm.volume, "closed-form"))
    # the symmetric lens through each other's centres is the dihedron
    d, lm = exact.dihedron_measures(), exact.lens_measures(math.pi / 3)
    for field in _FIELDS:
        out.append(Check(f"lens phi=pi/3 {field} = dihedron", getattr(lm, field), getattr(d, field), 1e-13, "closed-form"))
    return out


def _hexahedron(cfg):
    B = canonical_ballsets("hexahedron")
    body = ballset_measures(B)
    skel = body.skeleton
    target, width = RATIO_TARGETS["hexahedron"]
    out = [
        Check("hexahedron VL/lambda^3", body.measures.volume / body.lam**3, target, width, "quadrature"),
        Check("hexahedron edge count", float(len(skel.edges)), 12.0, 0.0, "skeleton"),
    ]
    dev = max(abs(e.exterior_angle - math.pi / 3) for e in skel.edges)
    out.append(Check("hexahedron exterior angles = pi/3", dev, 0.0, 1e-9, "skeleton"))
    if cfg is not None:
        out.append(_mc("hexahedron VL monte-carlo", mc_volume(B, cfg), body.measures.volume))
        out.append(_mc("hexahedron AR monte-carlo", mc_surface_area(B, cfg), body.measures.surface_area))
    return out


def run_verify(tolerance: float = 1e-6, samples: int = 10_000_000, seed: int = 42, *, monte_carlo: bool = True) -> list[Check]:
    """Every check of the oracle suite, in a fixed order.

    Deterministic comparisons use the absolute ``tolerance``; Monte Carlo
    comparisons pass within 4 standard errors.  The parametric families use
    a tenth of ``samples`` per grid point and mean widths use at most 10^5
    directions.
    """
    cfg = McConfig(samples, seed, min(16, samples)) if monte_carlo else None
    grid_n = max(samples // 10, 1000)
    grid_cfg = McConfig(grid_n, seed, min(16, grid_n)) if monte_carlo else None
    n_dirs = min(samples, 100_000)
    checks = []
    checks += _ball_solids(tolerance, cfg, n_dirs)
    checks += _reuleaux_widths(n_dirs, seed)
    checks += _meissner(tolerance, cfg)
    checks += _families(tolerance, grid_cfg, n_dirs)
    checks += _reductions()
    checks += _hexahedron(cfg)
    return checks

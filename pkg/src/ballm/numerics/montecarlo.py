"""Seeded Monte Carlo estimators for volume, surface area and mean width.

Work is split into chunks.  Chunk ``k`` of stream ``tag`` draws from its own
generator seeded by ``SeedSequence(seed, spawn_key=(tag, k))``, so results
depend only on ``(seed, n_samples, n_chunks)`` and never on how many workers
run the chunks.  Hit counts are integers; float partial sums are combined
in chunk order with ``math.fsum``.

Estimators accept any body exposing ``contains(points)`` and
``bounding_box()``.  Surface area uses sphere sampling for a
:class:`~ballm.geometry.BallSet` and Cauchy's projection formula for bodies
with ``line_hits``; mean width needs ``support(U)`` or a ball set.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..geometry import BallSet, DomainError
from . import support as _support

__all__ = [
    "McConfig",
    "Estimate",
    "mc_volume",
    "mc_surface_area",
    "mc_mean_width",
    "chunk_sizes",
]

BATCH = 1 << 19
_STREAM = {"volume": 1, "area": 2, "width": 3, "projection": 4}


@dataclass(frozen=True)
class McConfig:
    n_samples: int = 10_000_000
    seed: int = 42
    n_chunks: int = 16

    def __post_init__(self):
        for name in ("n_samples", "seed", "n_chunks"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                raise DomainError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.n_samples <= 0:
            raise DomainError("n_samples must be positive")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.n_chunks < 1 or self.n_samples < self.n_chunks:
            raise DomainError("need 1 <= n_chunks <= n_samples")


@dataclass(frozen=True)
class Estimate:
    value: float
    std_error: float
    n_samples: int

    def __post_init__(self):
        if not (math.isfinite(self.std_error) and self.std_error >= 0):
            raise ValueError(f"std_error must be finite and >= 0, got {self.std_error}")

    def agrees(self, target: float, k: float = 4.0) -> bool:
        """|value - target| <= k * std_error (exact match needed when std_error is 0)."""
        return abs(self.value - target) <= k * self.std_error + 1e-12 * max(1.0, abs(target))


def chunk_sizes(n: int, n_chunks: int) -> list[int]:
    base, extra = divmod(n, n_chunks)
    return [base + (k < extra) for k in range(n_chunks)]


def _rng(seed: int, stream: str, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(_STREAM[stream], chunk))
    return np.random.Generator(np.random.PCG64(ss))


def _run_chunks(fn, cfg: McConfig, stream: str, workers: int):
    """fn(rng, size) for every chunk, results in chunk order."""
    jobs = [(k, size) for k, size in enumerate(chunk_sizes(cfg.n_samples, cfg.n_chunks))]

    def run(job):
        k, size = job
        return fn(_rng(cfg.seed, stream, k), size)

    if workers <= 1:
        return [run(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, jobs))


def _batches(size: int):
    while size > 0:
        step = min(size, BATCH)
        yield step
        size -= step


def _unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, 3))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _binomial(scale: float, hits: int, n: int) -> tuple[float, float]:
    p = hits / n
    return scale * p, scale * math.sqrt(p * (1 - p) / n)


def mc_volume(body, cfg: McConfig | None = None, workers: int = 1) -> Estimate:
    """Rejection-sampling volume inside the body's bounding box."""
    cfg = cfg or McConfig()
    lo, hi = body.bounding_box()
    if np.any(hi <= lo):
        return Estimate(0.0, 0.0, cfg.n_samples)
    box = float(np.prod(hi - lo))

    def count(rng, size):
        hits = 0
        for step in _batches(size):
            pts = lo + (hi - lo) * rng.random((step, 3))
            hits += int(np.count_nonzero(body.contains(pts)))
        return hits

    hits = sum(_run_chunks(count, cfg, "volume", workers))
    value, std = _binomial(box, hits, cfg.n_samples)
    return Estimate(value, std, cfg.n_samples)


def _sphere_area(B: BallSet, cfg: McConfig, workers: int) -> Estimate:
    m = len(B)
    c, r = B.centers, B.radii

    def count(rng, size):
        hits = np.zeros(m, dtype=np.int64)
        for step in _batches(size):
            for i in range(m):
                pts = c[i] + r[i] * _unit_vectors(rng, step)
                inside = np.ones(step, dtype=bool)
                for j in range(m):
                    if j != i:
                        inside &= np.einsum("ij,ij->i", pts - c[j], pts - c[j]) < r[j] ** 2
                hits[i] += int(np.count_nonzero(inside))
        return hits

    # each sphere gets n_samples points, split across chunks
    hits = np.sum(_run_chunks(count, cfg, "area", workers), axis=0)
    n = cfg.n_samples
    values, variances = [], []
    for i in range(m):
        v, s = _binomial(4 * math.pi * r[i] ** 2, int(hits[i]), n)
        values.append(v)
        variances.append(s * s)
    return Estimate(math.fsum(values), math.sqrt(math.fsum(variances)), n * m)


def _plane_basis(U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    helper = np.where(np.abs(U[:, :1]) < 0.9, [[1.0, 0.0, 0.0]], [[0.0, 1.0, 0.0]])
    e1 = np.cross(U, helper)
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    return e1, np.cross(U, e1)


def _projection_area(body, cfg: McConfig, workers: int) -> Estimate:
    """Cauchy: S = 4 E_u[area of the shadow along u], shadow hit-tested by lines."""
    R = float(body.circumradius)
    square = (2 * R) ** 2

    def count(rng, size):
        hits = 0
        for step in _batches(size):
            U = _unit_vectors(rng, step)
            e1, e2 = _plane_basis(U)
            ab = R * (2 * rng.random((step, 2)) - 1)
            Q = ab[:, :1] * e1 + ab[:, 1:] * e2
            hits += int(np.count_nonzero(body.line_hits(U, Q)))
        return hits

    hits = sum(_run_chunks(count, cfg, "projection", workers))
    value, std = _binomial(4 * square, hits, cfg.n_samples)
    return Estimate(value, std, cfg.n_samples)


def mc_surface_area(body, cfg: McConfig | None = None, workers: int = 1) -> Estimate:
    """Surface area by sphere sampling (ball sets) or projected shadows (other bodies).

    For a ball set every sphere receives ``n_samples`` uniform points, and a
    point counts when it lies strictly inside every other ball.
    """
    cfg = cfg or McConfig()
    if isinstance(body, BallSet):
        return _sphere_area(body, cfg, workers)
    if hasattr(body, "line_hits"):
        return _projection_area(body, cfg, workers)
    raise TypeError(f"no surface-area estimator for {type(body).__name__}")


def _support_values(body, U: np.ndarray, evaluator: str) -> np.ndarray:
    if isinstance(body, BallSet):
        if evaluator == "exact":
            return _support.support_exact(body, U)
        if evaluator == "dykstra":
            return _support.support_dykstra(body, U)
        raise ValueError(f"unknown support evaluator {evaluator!r}")
    return body.support(U)


def mc_mean_width(
    body,
    n_dirs: int = 100_000,
    seed: int = 42,
    *,
    evaluator: str = "exact",
    n_chunks: int = 16,
    workers: int = 1,
) -> Estimate:
    """Mean of the width h(u) + h(-u) over uniform random directions.

    The pair (u, -u) is evaluated together.  ``evaluator`` selects the ball-set
    support function: ``"exact"`` candidate enumeration or ``"dykstra"``
    far-point projection.
    """
    cfg = McConfig(n_dirs, seed, min(n_chunks, n_dirs))
    if isinstance(body, BallSet):
        _support.check_nonempty(body)

    def partial(rng, size):
        s = s2 = 0.0
        parts, parts2 = [], []
        for step in _batches(size):
            U = _unit_vectors(rng, step)
            w = _support_values(body, np.vstack([U, -U]), evaluator)
            w = w[:step] + w[step:]
            parts.append(math.fsum(w))
            parts2.append(math.fsum(w * w))
        s, s2 = math.fsum(parts), math.fsum(parts2)
        return s, s2

    results = _run_chunks(partial, cfg, "width", workers)
    n = cfg.n_samples
    mean = math.fsum(r[0] for r in results) / n
    var = max(math.fsum(r[1] for r in results) / n - mean * mean, 0.0)
    std = math.sqrt(var / (n - 1)) if n > 1 else 0.0
    return Estimate(mean, std, n)

"""Seeded synthetic dataset families with ground-truth labels.

Every family is deterministic in the seed: the same GenSpec always produces
bit-identical points.  Families and their params (all floats unless noted):

- blobs: isotropic Gaussian clusters on a grid.
  components (int, 3), spread (1.0), separation (10.0)
- circles: concentric rings with radial noise.
  components (int, 3), spread (0.05), radius_step (2.0)
- spiral: interleaved spiral arms.
  components (int, 3), spread (0.02), scale (1.0)
- unbalance: Gaussian clusters with very uneven sizes.
  ratios (tuple, (20, 20, 20, 1, 1, 1, 1, 1)), spread (1.0), separation (10.0)
- line_clusters: parallel line segments.
  components (int, 3), length (10.0), separation (2.0), spread (0.1)
"""

from __future__ import annotations

import inspect
import math
from dataclasses import dataclass, field

import numpy as np

from .dataio import PointSet

__all__ = ["GenSpec", "generate", "FAMILIES"]


@dataclass
class GenSpec:
    family: str
    n: int
    seed: int = 0
    params: dict = field(default_factory=dict)


def _split_sizes(n: int, weights) -> np.ndarray:
    """Apportion n into len(weights) positive integer parts, sum exactly n."""
    w = np.asarray(weights, dtype=np.float64)
    if (w <= 0).any():
        raise ValueError("component weights must be positive")
    raw = w / w.sum() * n
    sizes = np.floor(raw).astype(np.int64)
    rem = raw - sizes
    deficit = int(n - sizes.sum())
    bump = np.argsort(-rem, kind="stable")[:deficit]
    sizes[bump] += 1
    while (sizes == 0).any():
        sizes[int(np.argmax(sizes == 0))] += 1
        sizes[int(np.argmax(sizes))] -= 1
    return sizes


def _grid_centers(c: int, separation: float) -> np.ndarray:
    g = math.ceil(math.sqrt(c))
    return np.array(
        [(separation * (i % g), separation * (i // g)) for i in range(c)],
        dtype=np.float64,
    )


def _gaussian_components(rng, n, centers, spread, weights=None):
    c = centers.shape[0]
    sizes = _split_sizes(n, np.ones(c) if weights is None else weights)
    pts = np.empty((n, 2), dtype=np.float64)
    labels = np.empty(n, dtype=np.int64)
    at = 0
    for i, m in enumerate(sizes):
        pts[at : at + m] = centers[i] + rng.normal(0.0, spread, size=(m, 2))
        labels[at : at + m] = i
        at += m
    return pts, labels


def _blobs(rng, n, components=3, spread=1.0, separation=10.0):
    centers = _grid_centers(int(components), float(separation))
    return _gaussian_components(rng, n, centers, float(spread))


def _unbalance(rng, n, ratios=(20, 20, 20, 1, 1, 1, 1, 1), spread=1.0, separation=10.0):
    ratios = tuple(float(r) for r in np.atleast_1d(ratios))
    centers = _grid_centers(len(ratios), float(separation))
    return _gaussian_components(rng, n, centers, float(spread), weights=ratios)


def _circles(rng, n, components=3, spread=0.05, radius_step=2.0):
    c = int(components)
    sizes = _split_sizes(n, np.ones(c))
    pts = np.empty((n, 2), dtype=np.float64)
    labels = np.empty(n, dtype=np.int64)
    at = 0
    for i, m in enumerate(sizes):
        radius = float(radius_step) * (i + 1)
        # even angles with bounded jitter keep the largest within-ring gap
        # far below the ring separation
        theta = 2.0 * np.pi * (np.arange(m) + rng.uniform(-0.3, 0.3, size=m)) / m
        r = radius + rng.normal(0.0, float(spread), size=m)
        pts[at : at + m, 0] = r * np.cos(theta)
        pts[at : at + m, 1] = r * np.sin(theta)
        labels[at : at + m] = i
        at += m
    return pts, labels


def _spiral(rng, n, components=3, spread=0.02, scale=1.0):
    c = int(components)
    sizes = _split_sizes(n, np.ones(c))
    pts = np.empty((n, 2), dtype=np.float64)
    labels = np.empty(n, dtype=np.int64)
    theta0, theta1 = 0.5 * np.pi, 2.5 * np.pi
    at = 0
    for i, m in enumerate(sizes):
        phase = 2.0 * np.pi * i / c
        theta = np.linspace(theta0, theta1, m)
        r = float(scale) * theta
        pts[at : at + m, 0] = r * np.cos(theta + phase)
        pts[at : at + m, 1] = r * np.sin(theta + phase)
        pts[at : at + m] += rng.normal(0.0, float(spread), size=(m, 2))
        labels[at : at + m] = i
        at += m
    return pts, labels


def _line_clusters(rng, n, components=3, length=10.0, separation=2.0, spread=0.1):
    c = int(components)
    sizes = _split_sizes(n, np.ones(c))
    pts = np.empty((n, 2), dtype=np.float64)
    labels = np.empty(n, dtype=np.int64)
    at = 0
    for i, m in enumerate(sizes):
        x = float(length) * (np.arange(m) + rng.uniform(-0.3, 0.3, size=m)) / m
        y = float(separation) * i + rng.normal(0.0, float(spread), size=m)
        pts[at : at + m, 0] = x
        pts[at : at + m, 1] = y
        labels[at : at + m] = i
        at += m
    return pts, labels


FAMILIES = {
    "blobs": _blobs,
    "circles": _circles,
    "spiral": _spiral,
    "unbalance": _unbalance,
    "line_clusters": _line_clusters,
}


def generate(spec: GenSpec) -> PointSet:
    """Sample a dataset; labels identify the generating component."""
    if spec.family not in FAMILIES:
        raise ValueError(
            f"unknown family {spec.family!r}; choose from {sorted(FAMILIES)}"
        )
    if spec.n < 1:
        raise ValueError("n must be >= 1")
    fam = FAMILIES[spec.family]
    allowed = set(inspect.signature(fam).parameters) - {"rng", "n"}
    unknown = set(spec.params) - allowed
    if unknown:
        raise ValueError(
            f"unknown params for family {spec.family!r}: {sorted(unknown)} "
            f"(accepted: {sorted(allowed)})"
        )
    rng = np.random.default_rng(spec.seed)
    pts, labels = fam(rng, spec.n, **spec.params)
    return PointSet(pts, labels)

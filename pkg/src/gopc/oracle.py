"""Exhaustive reference solver for the medoid-sum objective on small inputs."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, fsum

import numpy as np

from .core import dissimilarity_values

__all__ = ["OracleResult", "brute_force", "SUBSET_LIMIT"]

#: Refuse enumerations larger than this many medoid subsets.
SUBSET_LIMIT = 1_000_000


@dataclass
class OracleResult:
    best_objective: float
    best_medoid_sets: list[tuple[int, ...]]  # every argmin subset, ascending ids
    evaluated: int


def brute_force(mm, k: int, limit: int = SUBSET_LIMIT) -> OracleResult:
    """Evaluate every k-subset of objects as a medoid set and keep the minima.

    The objective of a subset is the sum over objects of the minimum distance
    to the subset; sums are exactly rounded so tied subsets (and the
    clustering path, which rounds the same way) compare equal as floats.
    Raises when C(n, k) exceeds ``limit``.
    """
    values = dissimilarity_values(mm)
    n = values.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n={n}, got {k}")
    total = comb(n, k)
    if total > limit:
        raise ValueError(f"C({n}, {k}) = {total} subsets exceeds the limit of {limit}")
    best = np.inf
    best_sets: list[tuple[int, ...]] = []
    idx = np.empty(k, dtype=np.int64)
    for subset in combinations(range(n), k):
        idx[:] = subset
        objective = fsum(values[idx].min(axis=0).tolist())
        if objective < best:
            best = objective
            best_sets = [subset]
        elif objective == best:
            best_sets.append(subset)
    return OracleResult(float(best), best_sets, total)

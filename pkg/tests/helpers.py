"""Shared fixtures-in-spirit: reference oracles and tiny pipeline shortcuts.

The oracles here are deliberately independent of the library internals:
minimax distances come from enumerating simple paths (or a closure sweep),
agreement indices from counting object pairs one by one, and optimal
objectives from scoring every medoid subset.
"""

from __future__ import annotations

import math
from itertools import combinations, permutations
from math import log

import numpy as np

from gopc import PointSet, build_tree, euclidean_matrix, minimax_all_pairs

# 1-D chain with a wide gap: two natural groups {0, 1, 3} and {10, 11.5}.
CHAIN_POINTS = np.array([[0.0], [1.0], [3.0], [10.0], [11.5]])
CHAIN_TREE_EDGES = [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 7.0), (3, 4, 1.5)]
CHAIN_MINIMAX = np.array(
    [
        [0.0, 1.0, 2.0, 7.0, 7.0],
        [1.0, 0.0, 2.0, 7.0, 7.0],
        [2.0, 2.0, 0.0, 7.0, 7.0],
        [7.0, 7.0, 7.0, 0.0, 1.5],
        [7.0, 7.0, 7.0, 1.5, 0.0],
    ]
)
CHAIN_DEGREES = np.array([17.0, 17.0, 18.0, 22.5, 22.5])

# Three collinear points spaced 10 apart: every minimax distance is 10.
TRIPLE_POINTS = np.array([[0.0], [10.0], [20.0]])


def pipeline(points):
    """points -> (DistanceMatrix, SpanningTree, MinimaxMatrix)."""
    dm = euclidean_matrix(PointSet(np.asarray(points, dtype=np.float64)))
    tree = build_tree(dm)
    return dm, tree, minimax_all_pairs(tree, dm)


def random_points(rng, n, dims=2):
    return rng.uniform(0.0, 1.0, size=(n, dims))


def minimax_by_path_enumeration(values, similarity=False):
    """Optimum path bottleneck by trying every simple path (n <= 8)."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            others = [v for v in range(n) if v not in (i, j)]
            best = -np.inf if similarity else np.inf
            for r in range(len(others) + 1):
                for mid in permutations(others, r):
                    path = (i, *mid, j)
                    steps = [values[a, b] for a, b in zip(path, path[1:])]
                    if similarity:
                        best = max(best, min(steps))
                    else:
                        best = min(best, max(steps))
            out[i, j] = out[j, i] = best
    return out


def minimax_closure(values, similarity=False):
    """Relaxation sweep: tighten d(i,j) through every intermediate node."""
    d = np.asarray(values, dtype=float).copy()
    n = d.shape[0]
    for k in range(n):
        via = (
            np.minimum(d[:, k : k + 1], d[k : k + 1, :])
            if similarity
            else np.maximum(d[:, k : k + 1], d[k : k + 1, :])
        )
        d = np.maximum(d, via) if similarity else np.minimum(d, via)
    return d


def best_medoids_exhaustive(values, k):
    """(best objective, all argmin subsets) by scoring every k-subset.

    Sums are exactly rounded (fsum) so mathematically tied subsets land on
    the same float and the argmin set list is complete.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    best = np.inf
    sets = []
    for subset in combinations(range(n), k):
        obj = math.fsum(values[list(subset)].min(axis=0).tolist())
        if obj < best:
            best, sets = obj, [subset]
        elif obj == best:
            sets.append(subset)
    return best, sets


def pairwise_rand(a, b):
    """Rand index by explicit agreement counting over all object pairs."""
    n = len(a)
    agree = 0
    for i in range(n):
        for j in range(i + 1, n):
            agree += (a[i] == a[j]) == (b[i] == b[j])
    return agree / (n * (n - 1) / 2)


def pairwise_ari(a, b):
    """Adjusted Rand from raw pair counts (permutation-model correction)."""
    n = len(a)
    ss = sa = sb = 0
    for i in range(n):
        for j in range(i + 1, n):
            same_a = a[i] == a[j]
            same_b = b[i] == b[j]
            sa += same_a
            sb += same_b
            ss += same_a and same_b
    total = n * (n - 1) / 2
    expected = sa * sb / total
    maximum = (sa + sb) / 2
    if maximum == expected:
        return 1.0
    return (ss - expected) / (maximum - expected)


def direct_nmi(a, b, average="arithmetic"):
    """NMI straight from the probability definitions."""
    n = len(a)
    ca = {v: np.sum(np.asarray(a) == v) / n for v in set(a)}
    cb = {v: np.sum(np.asarray(b) == v) / n for v in set(b)}
    mi = 0.0
    for va, pa in ca.items():
        for vb, pb in cb.items():
            pab = np.sum((np.asarray(a) == va) & (np.asarray(b) == vb)) / n
            if pab > 0:
                mi += pab * log(pab / (pa * pb))
    ha = -sum(p * log(p) for p in ca.values())
    hb = -sum(p * log(p) for p in cb.values())
    norm = (ha + hb) / 2 if average == "arithmetic" else (ha * hb) ** 0.5
    if norm == 0.0:
        return 1.0
    return mi / norm

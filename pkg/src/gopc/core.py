"""Greedy globally-optimal medoid selection on path-extreme distances.

The objective minimized is the sum over all objects of the distance to the
nearest selected medoid, with distances taken from a minimax (tree-path)
matrix.  Selection is greedy per epoch on the improvement score

    r(x) = sum_y max(d(y, tau(y)) - d(y, x), 0)

where tau(y) is y's current nearest medoid; on such matrices the greedy
argmax sequence attains the global optimum of the objective, which the test
suite certifies against exhaustive enumeration.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .validation import DISSIMILARITY

__all__ = [
    "DegreeTable",
    "NnTable",
    "ClusterModel",
    "dissimilarity_values",
    "compute_degrees",
    "compute_nn",
    "gain",
    "run",
    "assign",
    "resolve_noise",
]

NOISE_SEPARATE = "separate"
NOISE_MST_MERGE = "mst_merge"

_GAIN_CHUNK = 512


@dataclass
class DegreeTable:
    """Per-object distance-sum degrees and the (degree asc, index asc) order."""

    degrees: np.ndarray  # (n,) float64
    order: np.ndarray  # (n,) int64, a permutation of 0..n-1


@dataclass
class NnTable:
    """nn[x] = nearest object among those strictly preceding x in the order.

    The first object of the order has no predecessor; its entry is -1.
    Distance ties resolve to the earliest order position.
    """

    nn: np.ndarray  # (n,) int64


@dataclass
class ClusterModel:
    """Result of one clustering run.

    ``medoids`` is in selection order, so cluster t is the cluster of
    ``medoids[t]``.  ``labels`` holds -1 for unresolved tie-noise objects;
    ``noise_flags`` stays set even after noise is merged into a cluster.
    ``objective`` is the sum of per-object distance to the assigned medoid
    (tie-noise contributes its tied minimum until merged).
    """

    medoids: np.ndarray  # (k,) int64, selection order
    tau: np.ndarray  # (n,) int64, assigned medoid object index
    labels: np.ndarray  # (n,) int64, -1 = noise kept separate
    noise_flags: np.ndarray  # (n,) bool
    objective: float
    gain_trace: np.ndarray  # (k-1,) float64, max r per epoch 2..k
    elapsed: dict = field(default_factory=dict)  # phase -> seconds

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    @property
    def k(self) -> int:
        return self.medoids.shape[0]


def dissimilarity_values(mm) -> np.ndarray:
    """Matrix entries in dissimilarity form.

    Similarity-mode input is flipped by d = max_entry - s with a zero
    diagonal, which preserves every comparison the algorithm makes.
    """
    values = mm.values
    if mm.mode == DISSIMILARITY:
        return values
    out = values.max() - values
    np.fill_diagonal(out, 0.0)
    return out


def compute_degrees(mm) -> DegreeTable:
    """degree(x) = sum of distances from x to everything, plus the scan order.

    The order sorts by (degree ascending, index ascending); it is the strict
    total order used everywhere ties must break deterministically.
    """
    values = dissimilarity_values(mm)
    degrees = values.sum(axis=1)
    order = np.argsort(degrees, kind="stable")
    return DegreeTable(degrees, order.astype(np.int64))


def compute_nn(mm, table: DegreeTable | None = None) -> NnTable:
    """Nearest predecessor in the degree order for every object but the first."""
    values = dissimilarity_values(mm)
    if table is None:
        table = compute_degrees(mm)
    order = table.order
    n = order.shape[0]
    nn = np.full(n, -1, dtype=np.int64)
    for j in range(1, n):
        x = order[j]
        col = values[order[:j], x]
        # first occurrence of the minimum = earliest order position
        nn[x] = order[int(np.argmin(col))]
    return NnTable(nn)


def gain(x: int, tau: np.ndarray, mm) -> float:
    """Objective improvement from promoting object x to medoid.

    ``tau`` maps each object to its currently assigned medoid's index.
    The sum is exactly rounded so that mathematically tied gains compare
    equal as floats.
    """
    values = dissimilarity_values(mm)
    n = values.shape[0]
    cur = values[np.arange(n), np.asarray(tau, dtype=np.int64)]
    return _exact_gain(values, int(x), cur)


def _exact_gain(values: np.ndarray, x: int, cur: np.ndarray) -> float:
    return math.fsum(np.maximum(cur - values[x], 0.0).tolist())


def _batch_gains(values: np.ndarray, candidates: np.ndarray, cur: np.ndarray) -> np.ndarray:
    out = np.empty(candidates.shape[0], dtype=np.float64)
    for s in range(0, candidates.shape[0], _GAIN_CHUNK):
        block = values[candidates[s : s + _GAIN_CHUNK]]
        out[s : s + _GAIN_CHUNK] = np.maximum(cur[None, :] - block, 0.0).sum(axis=1)
    return out


def _assignment(values: np.ndarray, medoids: np.ndarray, tie_eps: float):
    """Labels, noise flags, tau, and objective for a fixed medoid set."""
    n = values.shape[0]
    k = medoids.shape[0]
    dist_to_med = values[medoids]  # (k, n)
    cur = dist_to_med.min(axis=0)
    first = dist_to_med.argmin(axis=0)  # earliest-selected medoid attaining the min
    n_tied = (dist_to_med <= cur[None, :] + tie_eps).sum(axis=0)
    noise = n_tied >= 2
    noise[medoids] = False  # medoids are never noise
    labels = first.astype(np.int64)
    labels[medoids] = np.arange(k, dtype=np.int64)
    labels[noise] = -1
    tau = medoids[first]
    tau[medoids] = medoids
    # exactly rounded so ties with the enumeration oracle compare equal
    objective = math.fsum(cur.tolist())
    return labels, noise, tau, objective


def assign(mm, medoids, tie_eps: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Label every object by its strictly nearest medoid.

    An object whose minimum medoid distance is attained (within ``tie_eps``)
    by two or more medoids is flagged as noise and labeled -1.  Medoids are
    never noise.  Returns (labels, noise_flags); cluster ids follow medoid
    selection order.
    """
    values = dissimilarity_values(mm)
    medoids = np.asarray(medoids, dtype=np.int64)
    if medoids.ndim != 1 or medoids.shape[0] < 1:
        raise ValueError("need at least one medoid")
    if tie_eps < 0:
        raise ValueError("tie_eps must be >= 0")
    labels, noise, _, _ = _assignment(values, medoids, tie_eps)
    return labels, noise


def run(mm, k: int, candidate_filter: bool = True, tie_eps: float = 0.0) -> ClusterModel:
    """Cluster into k groups by greedy epoch-wise medoid selection.

    Parameters
    ----------
    mm : MinimaxMatrix
        Path-extreme distances (either mode; similarity is converted).
    k : int
        Number of clusters, 1 <= k <= n.
    candidate_filter : bool
        When on, an epoch only scores objects whose nearest smaller-degree
        neighbour is already a medoid; the medoid sequence is unchanged,
        only the work per epoch shrinks.
    tie_eps : float
        Assignment tie tolerance passed through to noise detection.

    Returns
    -------
    ClusterModel
        Medoids in selection order, assignment, objective, and the per-epoch
        maximum-gain trace.
    """
    values = dissimilarity_values(mm)
    n = values.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n={n}, got {k}")
    if tie_eps < 0:
        raise ValueError("tie_eps must be >= 0")
    elapsed: dict[str, float] = {}

    t0 = time.perf_counter()
    table = compute_degrees(mm)
    order = table.order
    elapsed["degrees"] = time.perf_counter() - t0

    nn = None
    t0 = time.perf_counter()
    if candidate_filter and k > 1:
        nn = compute_nn(mm, table).nn
    elapsed["nn"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    medoids = np.empty(k, dtype=np.int64)
    medoids[0] = order[0]
    is_medoid = np.zeros(n, dtype=bool)
    is_medoid[order[0]] = True
    cur = values[order[0]].copy()
    trace = np.empty(k - 1, dtype=np.float64)

    if nn is not None:
        has_nn = nn >= 0
        safe_nn = np.where(has_nn, nn, 0)

    for t in range(1, k):
        if nn is not None:
            eligible = ~is_medoid & has_nn & is_medoid[safe_nn]
        else:
            eligible = ~is_medoid
        candidates = order[eligible[order]]  # ascending order position
        if candidates.shape[0] == 0:
            raise RuntimeError("epoch has no candidates; filter invariant broken")
        gains = _batch_gains(values, candidates, cur)
        j = int(np.argmax(gains))  # first max = earliest order position
        gmax = float(gains[j])
        if gmax > 0.0:
            # Block-summed gains can round mathematically tied candidates a
            # few ulps apart, which would make the winner depend on the
            # candidate set.  Re-score everything within rounding reach of
            # the max with an exactly rounded sum; ties still fall to the
            # earliest order position.
            window = np.nonzero(gains >= gmax * (1.0 - 1e-12))[0]
            best = -1.0
            for idx in window:
                exact = _exact_gain(values, int(candidates[idx]), cur)
                if exact > best:
                    best, j = exact, int(idx)
            trace[t - 1] = best
        else:
            trace[t - 1] = 0.0
        m = int(candidates[j])
        medoids[t] = m
        is_medoid[m] = True
        row = values[m]
        np.minimum(cur, row, out=cur)
    elapsed["epochs"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    labels, noise, tau, objective = _assignment(values, medoids, tie_eps)
    elapsed["assign"] = time.perf_counter() - t0

    return ClusterModel(medoids, tau, labels, noise, objective, trace, elapsed)


def resolve_noise(model: ClusterModel, strategy: str, *, tree=None, mm=None) -> ClusterModel:
    """Apply a noise strategy to a fitted model.

    ``separate`` keeps tie-noise in its own -1 cluster (the model is already
    in that form).  ``mst_merge`` dissolves the noise cluster along the
    spanning tree: among tree edges touching a noise object, repeatedly take
    the lightest whose other endpoint is resolved and copy that endpoint's
    label (edges between two unresolved objects wait; edges whose endpoints
    are both resolved are dropped).  The objective is then re-computed over
    the final labels.  ``mst_merge`` requires ``tree`` and ``mm``.
    """
    if strategy in ("merge", NOISE_MST_MERGE):
        strategy = NOISE_MST_MERGE
    elif strategy != NOISE_SEPARATE:
        raise ValueError(f"unknown noise strategy {strategy!r}")
    if strategy == NOISE_SEPARATE or not model.noise_flags.any():
        return model
    if tree is None or mm is None:
        raise ValueError("mst_merge needs the spanning tree and the minimax matrix")

    labels = model.labels.copy()
    resolved = labels >= 0
    if not resolved.any():
        raise RuntimeError("every object is noise; nothing to merge into")

    lam = [
        (float(wt), min(int(a), int(b)), max(int(a), int(b)))
        for a, b, wt in zip(tree.u, tree.v, tree.w)
        if model.noise_flags[a] or model.noise_flags[b]
    ]
    heapq.heapify(lam)
    deferred: list[tuple[float, int, int]] = []
    while lam:
        edge = heapq.heappop(lam)
        _, a, b = edge
        if resolved[a] and resolved[b]:
            continue
        if not resolved[a] and not resolved[b]:
            deferred.append(edge)
            continue
        src, dst = (a, b) if resolved[a] else (b, a)
        labels[dst] = labels[src]
        resolved[dst] = True
        for e in deferred:
            heapq.heappush(lam, e)
        deferred.clear()
    if not resolved.all():
        raise RuntimeError("noise merge left unresolved objects; tree disconnected?")

    values = dissimilarity_values(mm)
    n = values.shape[0]
    tau = model.medoids[labels]
    objective = math.fsum(values[np.arange(n), tau].tolist())
    return replace(model, labels=labels, tau=tau, objective=objective)

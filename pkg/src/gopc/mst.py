"""Spanning trees over the complete graph and path-extreme (minimax) distances.

In dissimilarity mode the minimum spanning tree is built and the derived
matrix holds, for every pair, the smallest achievable maximum edge weight
over connecting paths; that optimum is attained on the tree path.  In
similarity mode the dual holds: maximum spanning tree, largest achievable
minimum edge weight.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .dataio import FLOAT_FMT, DistanceMatrix
from .validation import DISSIMILARITY, SIMILARITY, check_mode

__all__ = [
    "SpanningTree",
    "MinimaxMatrix",
    "build_tree",
    "minimax_all_pairs",
    "verify_ultrametric",
    "write_tree",
]


@dataclass
class SpanningTree:
    """Tree over ``n_nodes`` vertices; parallel edge arrays in build order."""

    n_nodes: int
    u: np.ndarray  # (n_nodes - 1,) int64
    v: np.ndarray  # (n_nodes - 1,) int64
    w: np.ndarray  # (n_nodes - 1,) float64

    def __post_init__(self) -> None:
        self.u = np.asarray(self.u, dtype=np.int64)
        self.v = np.asarray(self.v, dtype=np.int64)
        self.w = np.asarray(self.w, dtype=np.float64)
        if not (self.u.shape == self.v.shape == self.w.shape == (self.n_nodes - 1,)):
            raise ValueError(
                f"a tree over {self.n_nodes} nodes needs exactly "
                f"{self.n_nodes - 1} edges"
            )

    def edge_list(self) -> list[tuple[int, int, float]]:
        return [
            (int(a), int(b), float(wt)) for a, b, wt in zip(self.u, self.v, self.w)
        ]

    def neighbors(self) -> list[list[tuple[int, float]]]:
        """Adjacency: for each node, its (neighbor, edge weight) pairs."""
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n_nodes)]
        for a, b, wt in zip(self.u, self.v, self.w):
            adj[int(a)].append((int(b), float(wt)))
            adj[int(b)].append((int(a), float(wt)))
        return adj


@dataclass
class MinimaxMatrix:
    """All-pairs path-extreme distances; same layout contract as DistanceMatrix."""

    values: np.ndarray  # (n, n) float64
    mode: str = DISSIMILARITY

    def __post_init__(self) -> None:
        self.mode = check_mode(self.mode)
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"matrix must be square, got shape {v.shape}")
        self.values = v

    @property
    def n(self) -> int:
        return self.values.shape[0]


def build_tree(dm: DistanceMatrix) -> SpanningTree:
    """Dense Prim over the complete graph, O(n^2) time and O(n) extra space.

    Minimum spanning tree in dissimilarity mode, maximum spanning tree in
    similarity mode.  Growth starts at node 0; ties among candidate edges are
    broken by the smallest node index of the new vertex, and an equal-weight
    alternative never displaces the recorded attachment edge, so the edge
    sequence is fully deterministic.
    """
    values = dm.values
    n = dm.n
    if n == 1:
        return SpanningTree(1, np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0))
    minimize = dm.mode == DISSIMILARITY
    sentinel = np.inf if minimize else -np.inf

    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best_w = values[0].copy()
    best_from = np.zeros(n, dtype=np.int64)
    eu = np.empty(n - 1, dtype=np.int64)
    ev = np.empty(n - 1, dtype=np.int64)
    ew = np.empty(n - 1, dtype=np.float64)

    for step in range(n - 1):
        keyed = np.where(in_tree, sentinel, best_w)
        # argmin/argmax return the first occurrence: smallest new-vertex index wins ties
        nxt = int(np.argmin(keyed)) if minimize else int(np.argmax(keyed))
        eu[step] = best_from[nxt]
        ev[step] = nxt
        ew[step] = best_w[nxt]
        in_tree[nxt] = True
        row = values[nxt]
        improved = (row < best_w) if minimize else (row > best_w)
        improved &= ~in_tree
        best_w[improved] = row[improved]
        best_from[improved] = nxt
    return SpanningTree(n, eu, ev, ew)


def _bfs_order(tree: SpanningTree) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Breadth-first order from node 0 with per-node parent and entry edge weight."""
    n = tree.n_nodes
    adj = tree.neighbors()
    order = np.empty(n, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    pweight = np.zeros(n, dtype=np.float64)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    order[0] = 0
    queue = deque([0])
    filled = 1
    while queue:
        node = queue.popleft()
        for nb, wt in adj[node]:
            if not seen[nb]:
                seen[nb] = True
                parent[nb] = node
                pweight[nb] = wt
                order[filled] = nb
                filled += 1
                queue.append(nb)
    if filled != n:
        raise ValueError("tree is not connected")
    return order, parent, pweight


def minimax_all_pairs(tree: SpanningTree, dm: DistanceMatrix) -> MinimaxMatrix:
    """All-pairs extreme edge weight along tree paths, O(n^2) total.

    Nodes are placed in a traversal order where each arrives attached to an
    already-placed parent, so the running extreme propagates in one pass:
    for new node v with parent p, mm(u, v) = extreme(mm(u, p), w(p, v)) for
    every placed u.  Max of path edges in dissimilarity mode, min in
    similarity mode.
    """
    if tree.n_nodes != dm.n:
        raise ValueError(f"tree has {tree.n_nodes} nodes but matrix has n={dm.n}")
    n = tree.n_nodes
    combine = np.maximum if dm.mode == DISSIMILARITY else np.minimum
    mm = np.zeros((n, n), dtype=np.float64)
    if dm.mode == SIMILARITY:
        # +inf is the identity for the running minimum, so a parent's own
        # diagonal entry never clips the propagated path value
        np.fill_diagonal(mm, np.inf)
    if n > 1:
        order, parent, pweight = _bfs_order(tree)
        for i in range(1, n):
            v = order[i]
            p = parent[v]
            placed = order[:i]
            vals = combine(mm[p, placed], pweight[v])
            mm[v, placed] = vals
            mm[placed, v] = vals
    if dm.mode == SIMILARITY:
        # self-similarity: the largest value the maximin can take
        np.fill_diagonal(mm, tree.w.max() if n > 1 else 0.0)
    return MinimaxMatrix(mm, dm.mode)


def verify_ultrametric(
    mm: MinimaxMatrix, tol: float = 0.0, max_report: int | None = None
) -> list[tuple[int, int, int]]:
    """Return triples violating the strong triangle inequality (none expected).

    Dissimilarity mode checks d(x,y) <= max(d(x,z), d(y,z)) + tol; similarity
    mode checks the dual s(x,y) >= min(s(x,z), s(y,z)) - tol.  Exhaustive for
    n <= 200; above that at least 1e5 deterministically sampled triples.
    """
    values = mm.values
    n = mm.n
    out: list[tuple[int, int, int]] = []
    if n <= 200:
        for z in range(n):
            col = values[:, z]
            if mm.mode == DISSIMILARITY:
                bad = values > np.maximum(col[:, None], col[None, :]) + tol
            else:
                bad = values < np.minimum(col[:, None], col[None, :]) - tol
            bad[z, :] = False
            bad[:, z] = False
            np.fill_diagonal(bad, False)
            for x, y in zip(*np.nonzero(bad)):
                out.append((int(x), int(y), int(z)))
                if max_report is not None and len(out) >= max_report:
                    return out
    else:
        rng = np.random.default_rng(0)
        n_samples = 100_000
        xs = rng.integers(0, n, size=n_samples)
        ys = rng.integers(0, n, size=n_samples)
        zs = rng.integers(0, n, size=n_samples)
        dxy = values[xs, ys]
        dxz = values[xs, zs]
        dyz = values[ys, zs]
        if mm.mode == DISSIMILARITY:
            bad = dxy > np.maximum(dxz, dyz) + tol
        else:
            bad = dxy < np.minimum(dxz, dyz) - tol
        bad &= (xs != ys) & (xs != zs) & (ys != zs)
        for i in np.nonzero(bad)[0]:
            out.append((int(xs[i]), int(ys[i]), int(zs[i])))
            if max_report is not None and len(out) >= max_report:
                return out
    return out


def write_tree(path, tree: SpanningTree) -> None:
    """Dump edges as ``u v w`` lines in build order."""
    with open(path, "w") as fh:
        for a, b, wt in zip(tree.u, tree.v, tree.w):
            fh.write(f"{int(a)} {int(b)} {format(float(wt), FLOAT_FMT)}\n")

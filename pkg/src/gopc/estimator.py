"""scikit-learn style estimator wrapping the full clustering pipeline."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from . import core, decision
from .dataio import DistanceMatrix, PointSet, euclidean_matrix
from .mst import build_tree, minimax_all_pairs
from .validation import check_mode, check_points, check_square_values

__all__ = ["GOPC"]


class GOPC(ClusterMixin, BaseEstimator):
    """Clustering by globally optimal medoid selection on tree-path distances.

    Builds a spanning tree over the complete pairwise graph, replaces every
    distance by the extreme edge weight along the tree path (the smallest
    achievable path bottleneck), and greedily selects medoids that minimize
    the summed distance of every object to its nearest medoid — a greedy
    that is exact for this class of distances.  Objects equidistant from two
    or more medoids are tie-noise, either kept in their own ``-1`` cluster or
    merged back along the tree.

    Parameters
    ----------
    n_clusters : int or "auto", default=2
        Number of clusters.  "auto" picks k at the sharpest drop in the
        per-epoch gain trace, scanning up to ``k_max`` epochs.
    metric : {"euclidean", "precomputed"}, default="euclidean"
        With "euclidean", ``fit`` expects raw feature vectors.  With
        "precomputed", ``fit`` expects a square pairwise matrix whose
        semantics are given by ``mode``.
    mode : {"dissimilarity", "similarity"}, default="dissimilarity"
        Only used with ``metric="precomputed"``.  Similarity input selects a
        maximum spanning tree and path-minimum distances.
    noise_strategy : {"merge", "separate"}, default="merge"
        "separate" leaves tie-noise labeled -1; "merge" dissolves it along
        the spanning tree into neighbouring clusters.
    candidate_filter : bool, default=True
        Restrict each epoch's scoring to provably sufficient candidates.
        The result is identical; large inputs run faster.
    tie_eps : float, default=0.0
        Assignment distances within ``tie_eps`` of the minimum count as tied
        for noise detection.
    k_max : int, default=20
        Epoch budget for ``n_clusters="auto"``.

    Attributes
    ----------
    labels_ : ndarray of shape (n,)
        Cluster id per object (-1 only with ``noise_strategy="separate"``).
    medoids_ : ndarray of shape (k,)
        Medoid object indices in selection order.
    noise_mask_ : ndarray of shape (n,)
        True for objects flagged as tie-noise (set even after merging).
    objective_ : float
        Summed distance of every object to its assigned medoid.
    gain_trace_ : ndarray of shape (k - 1,)
        Maximum gain per selection epoch.
    n_clusters_ : int
        The k actually used (estimated when ``n_clusters="auto"``).
    tree_ : SpanningTree
        The spanning tree the distances were derived from.

    Examples
    --------
    >>> from gopc import GOPC
    >>> import numpy as np
    >>> X = np.array([[0.0], [1.0], [3.0], [10.0], [11.5]])
    >>> GOPC(n_clusters=2).fit_predict(X)
    array([0, 0, 0, 1, 1])
    """

    def __init__(
        self,
        n_clusters=2,
        *,
        metric="euclidean",
        mode="dissimilarity",
        noise_strategy="merge",
        candidate_filter=True,
        tie_eps=0.0,
        k_max=20,
    ):
        self.n_clusters = n_clusters
        self.metric = metric
        self.mode = mode
        self.noise_strategy = noise_strategy
        self.candidate_filter = candidate_filter
        self.tie_eps = tie_eps
        self.k_max = k_max

    def fit(self, X, y=None):
        """Cluster X (feature rows, or a square matrix when precomputed)."""
        if self.metric == "precomputed":
            mode = check_mode(self.mode)
            values = check_square_values(X, mode)
            dm = DistanceMatrix(values, mode)
        elif self.metric == "euclidean":
            pts = check_points(X)
            self.n_features_in_ = pts.shape[1]
            dm = euclidean_matrix(PointSet(pts))
        else:
            raise ValueError(
                f"metric must be 'euclidean' or 'precomputed', got {self.metric!r}"
            )
        tree = build_tree(dm)
        mmx = minimax_all_pairs(tree, dm)
        n = dm.n

        if self.n_clusters == "auto":
            k_max = min(int(self.k_max), n)
            if k_max < 2:
                k = 1
            else:
                tr = decision.trace(mmx, k_max, candidate_filter=self.candidate_filter)
                self.decision_trace_ = tr
                k = decision.estimate_k(tr)
        else:
            k = int(self.n_clusters)

        model = core.run(
            mmx, k, candidate_filter=self.candidate_filter, tie_eps=self.tie_eps
        )
        model = core.resolve_noise(model, self.noise_strategy, tree=tree, mm=mmx)

        self.n_clusters_ = k
        self.labels_ = model.labels
        self.medoids_ = model.medoids
        self.noise_mask_ = model.noise_flags
        self.objective_ = model.objective
        self.gain_trace_ = model.gain_trace
        self.tree_ = tree
        return self

    def _more_tags(self):
        return {"pairwise": self.metric == "precomputed"}

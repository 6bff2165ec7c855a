"""Decision graph: per-epoch maximum gains and cluster-count estimation."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import core
from .dataio import FLOAT_FMT

__all__ = ["DecisionTrace", "trace", "estimate_k", "write_trace"]

#: Guard against division by zero in the drop-ratio scan.
RATIO_EPS = 1e-12


@dataclass
class DecisionTrace:
    """Maximum gain per epoch t = 2..k_max (values[i] belongs to epoch i + 2)."""

    k_max: int
    values: np.ndarray  # (k_max - 1,) float64


def trace(mm, k_max: int, candidate_filter: bool = True) -> DecisionTrace:
    """Run k_max epochs and keep the per-epoch maximum gains.

    Identical to the gain trace of a full clustering run at k = k_max; in
    particular a trace is always a prefix of any longer trace on the same
    matrix.
    """
    n = mm.values.shape[0]
    if not 2 <= k_max <= n:
        raise ValueError(f"k_max must satisfy 2 <= k_max <= n={n}, got {k_max}")
    model = core.run(mm, k_max, candidate_filter=candidate_filter)
    return DecisionTrace(k_max, model.gain_trace)


def estimate_k(tr: DecisionTrace, eps: float = RATIO_EPS) -> int:
    """Cluster count at the sharpest drop between consecutive epoch gains.

    Scans ratios value(epoch t-1) / (value(epoch t) + eps) for t = 3..k_max
    and returns t - 1 for the largest (first, on ties).  An all-zero trace
    means the data collapses to one point group: returns 1 with a warning.
    """
    vals = np.asarray(tr.values, dtype=np.float64)
    if vals.shape[0] < 2:
        raise ValueError("trace needs at least two epochs to estimate k")
    if not (vals > 0).any():
        warnings.warn("all epoch gains are zero; defaulting to k=1", stacklevel=2)
        return 1
    ratios = vals[:-1] / (vals[1:] + eps)
    return int(np.argmax(ratios)) + 2


def write_trace(path, tr: DecisionTrace) -> None:
    """Emit the trace as TSV, one ``epoch<TAB>max_r`` line per epoch."""
    with open(path, "w") as fh:
        fh.write("epoch\tmax_r\n")
        for i, v in enumerate(tr.values):
            fh.write(f"{i + 2}\t{format(float(v), FLOAT_FMT)}\n")

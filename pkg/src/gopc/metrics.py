"""External clustering agreement indices: Rand, adjusted Rand, NMI.

All three treat label values as opaque ids, so the -1 noise label is just
another class.  Inputs are two equal-length integer label arrays over the
same objects.
"""

from __future__ import annotations

import numpy as np
from scipy.special import xlogy

from .validation import check_labels

__all__ = ["rand_index", "adjusted_rand_index", "nmi"]


def _prepare(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = check_labels(a, "a")
    b = check_labels(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"label arrays differ in length: {a.shape[0]} vs {b.shape[0]}")
    if a.shape[0] < 2:
        raise ValueError("need at least two objects to compare partitions")
    return a, b


def _contingency(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dense class-by-class co-occurrence counts."""
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table


def _pairs(counts: np.ndarray) -> int:
    c = counts.astype(np.int64)
    return int((c * (c - 1) // 2).sum())


def rand_index(a, b) -> float:
    """Fraction of object pairs on which the two partitions agree."""
    a, b = _prepare(a, b)
    n = a.shape[0]
    table = _contingency(a, b)
    total = n * (n - 1) // 2
    both = _pairs(table)
    in_a = _pairs(table.sum(axis=1))
    in_b = _pairs(table.sum(axis=0))
    agreements = total - in_a - in_b + 2 * both
    return agreements / total


def adjusted_rand_index(a, b) -> float:
    """Rand index corrected for chance under the permutation model.

    Zero expectation for independent partitions, 1.0 only for identical
    partitions (up to relabeling).  When the correction denominator vanishes
    (both partitions trivial) the partitions are necessarily identical and
    the value is 1.0.
    """
    a, b = _prepare(a, b)
    n = a.shape[0]
    table = _contingency(a, b)
    total = n * (n - 1) // 2
    both = _pairs(table)
    in_a = _pairs(table.sum(axis=1))
    in_b = _pairs(table.sum(axis=0))
    expected = in_a * in_b / total
    maximum = 0.5 * (in_a + in_b)
    if maximum == expected:
        return 1.0
    return (both - expected) / (maximum - expected)


def nmi(a, b, average: str = "arithmetic") -> float:
    """Mutual information normalized by the mean of the two label entropies.

    ``average`` picks the mean: "arithmetic" (default) or "geometric".  Two
    constant partitions carry no information but are identical, so that
    0/0 case evaluates to 1.0; one constant partition against a varying one
    gives 0.0.
    """
    if average not in ("arithmetic", "geometric"):
        raise ValueError(f"average must be 'arithmetic' or 'geometric', got {average!r}")
    a, b = _prepare(a, b)
    n = a.shape[0]
    table = _contingency(a, b).astype(np.float64)
    pij = table / n
    pa = pij.sum(axis=1)
    pb = pij.sum(axis=0)
    outer = pa[:, None] * pb[None, :]
    mi = float((xlogy(pij, pij) - xlogy(pij, outer)).sum())
    ha = -float(xlogy(pa, pa).sum())
    hb = -float(xlogy(pb, pb).sum())
    norm = 0.5 * (ha + hb) if average == "arithmetic" else np.sqrt(ha * hb)
    if norm == 0.0:
        return 1.0  # both partitions constant, hence identical
    return float(np.clip(mi / norm, 0.0, 1.0))

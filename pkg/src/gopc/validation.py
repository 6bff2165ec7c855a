"""Input validation helpers shared by the I/O layer and the estimator."""

from __future__ import annotations

import numpy as np

DISSIMILARITY = "dissimilarity"
SIMILARITY = "similarity"

#: Largest |M - M.T| accepted by strict symmetry checking.
SYMMETRY_TOL = 1e-9


def check_mode(mode: str) -> str:
    """Normalize a matrix mode string, accepting the CLI short forms."""
    aliases = {
        "diss": DISSIMILARITY,
        DISSIMILARITY: DISSIMILARITY,
        "sim": SIMILARITY,
        SIMILARITY: SIMILARITY,
    }
    try:
        return aliases[mode]
    except KeyError:
        raise ValueError(
            f"mode must be one of 'dissimilarity'/'diss' or 'similarity'/'sim', got {mode!r}"
        ) from None


def check_points(X) -> np.ndarray:
    """Coerce to a finite float64 (n, d) array with n >= 1."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2:
        raise ValueError(f"points must be a 2-D array, got shape {X.shape}")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise ValueError(f"points array is empty: shape {X.shape}")
    if not np.isfinite(X).all():
        raise ValueError("points contain non-finite values")
    return X


def check_square_values(values, mode: str, *, strict: bool = False) -> np.ndarray:
    """Validate raw matrix entries and return a symmetric float64 copy.

    Checks that the matrix is square and finite, that dissimilarities are
    non-negative, and that any asymmetry stays within ``SYMMETRY_TOL`` when
    ``strict``.  Asymmetry is repaired by averaging with the transpose; the
    diagonal is forced to zero in dissimilarity mode.
    """
    mode = check_mode(mode)
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError(f"matrix must be square, got shape {values.shape}")
    if values.shape[0] < 1:
        raise ValueError("matrix is empty")
    if not np.isfinite(values).all():
        raise ValueError("matrix contains non-finite entries")
    if mode == DISSIMILARITY and (values < 0.0).any():
        raise ValueError("dissimilarity matrix contains negative entries")
    asym = float(np.abs(values - values.T).max()) if values.size else 0.0
    if strict and asym > SYMMETRY_TOL:
        raise ValueError(
            f"matrix asymmetry {asym:.3e} exceeds {SYMMETRY_TOL:.0e} (strict mode)"
        )
    values = 0.5 * (values + values.T)
    if mode == DISSIMILARITY:
        np.fill_diagonal(values, 0.0)
    return values


def check_labels(a, name: str = "labels") -> np.ndarray:
    """Coerce to a 1-D int64 label array."""
    arr = np.asarray(a)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.issubdtype(arr.dtype, np.integer):
        cast = arr.astype(np.int64, copy=True)
        if not np.array_equal(cast, np.asarray(arr, dtype=np.float64)):
            raise ValueError(f"{name} must be integer-valued")
        arr = cast
    return arr.astype(np.int64, copy=False)

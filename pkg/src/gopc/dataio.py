"""File formats and base distances: point tables, dense matrices, partitions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .validation import (
    DISSIMILARITY,
    SIMILARITY,
    check_mode,
    check_points,
    check_square_values,
)

__all__ = [
    "DISSIMILARITY",
    "SIMILARITY",
    "ParseError",
    "PointSet",
    "DistanceMatrix",
    "load_points",
    "write_points",
    "euclidean_matrix",
    "load_matrix",
    "save_matrix",
    "write_partition",
    "read_labels",
]

# Full round-trip precision for all numeric text output.
FLOAT_FMT = ".17g"


class ParseError(ValueError):
    """Malformed file content (reported with a 1-based row number where known)."""


@dataclass
class PointSet:
    """Feature vectors, optionally carrying ground-truth integer labels."""

    points: np.ndarray  # (n, d) float64
    labels: np.ndarray | None = None  # (n,) int64 or None

    def __post_init__(self) -> None:
        self.points = check_points(self.points)
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if self.labels.shape != (self.n,):
                raise ValueError(
                    f"labels shape {self.labels.shape} does not match n={self.n}"
                )

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass
class DistanceMatrix:
    """Dense symmetric pairwise matrix in dissimilarity or similarity mode."""

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


def _split_row(line: str, delim: str) -> list[str]:
    return [f.strip() for f in line.split(delim)]


def load_points(path, fmt: str = "csv", has_labels: bool = False) -> PointSet:
    """Read a delimited point table; trailing integer labels when ``has_labels``.

    Raises ``ParseError`` naming the offending 1-based row for any malformed
    field, ragged row, or short row, and for an entirely empty file.
    """
    if fmt not in ("csv", "tsv"):
        raise ValueError(f"fmt must be 'csv' or 'tsv', got {fmt!r}")
    delim = "," if fmt == "csv" else "\t"
    rows: list[list[float]] = []
    labels: list[int] = []
    width = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            fields = _split_row(line, delim)
            if has_labels:
                if len(fields) < 2:
                    raise ParseError(
                        f"{path}: row {lineno}: expected features plus a label, "
                        f"got {len(fields)} field(s)"
                    )
                *feat, lab = fields
                try:
                    labels.append(int(lab))
                except ValueError:
                    raise ParseError(
                        f"{path}: row {lineno}: label {lab!r} is not an integer"
                    ) from None
            else:
                feat = fields
            if width is None:
                width = len(feat)
            elif len(feat) != width:
                raise ParseError(
                    f"{path}: row {lineno}: expected {width} feature(s), got {len(feat)}"
                )
            try:
                rows.append([float(f) for f in feat])
            except ValueError:
                bad = next(f for f in feat if not _is_float(f))
                raise ParseError(
                    f"{path}: row {lineno}: could not parse value {bad!r}"
                ) from None
    if not rows:
        raise ParseError(f"{path}: no data rows")
    pts = np.asarray(rows, dtype=np.float64)
    if not np.isfinite(pts).all():
        bad_row = int(np.argwhere(~np.isfinite(pts).all(axis=1))[0, 0])
        raise ParseError(f"{path}: row {bad_row + 1}: non-finite value")
    return PointSet(pts, np.asarray(labels, dtype=np.int64) if has_labels else None)


def _is_float(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def write_points(path, ps: PointSet, fmt: str = "csv") -> None:
    """Write a point table, appending the label column when present."""
    if fmt not in ("csv", "tsv"):
        raise ValueError(f"fmt must be 'csv' or 'tsv', got {fmt!r}")
    delim = "," if fmt == "csv" else "\t"
    with open(path, "w") as fh:
        for i in range(ps.n):
            fields = [format(x, FLOAT_FMT) for x in ps.points[i]]
            if ps.labels is not None:
                fields.append(str(int(ps.labels[i])))
            fh.write(delim.join(fields) + "\n")


def euclidean_matrix(ps: PointSet) -> DistanceMatrix:
    """All-pairs Euclidean distances on the raw features."""
    values = cdist(ps.points, ps.points, metric="euclidean")
    np.fill_diagonal(values, 0.0)
    return DistanceMatrix(values, DISSIMILARITY)


def load_matrix(path, mode: str = DISSIMILARITY, strict: bool = False) -> DistanceMatrix:
    """Read a dense square matrix (whitespace- or comma-separated reals).

    Asymmetry is repaired by averaging with the transpose unless ``strict``,
    in which case asymmetry beyond 1e-9 is an error.  The diagonal is forced
    to zero in dissimilarity mode.  Non-square, non-finite, or (in
    dissimilarity mode) negative input is rejected.
    """
    mode = check_mode(mode)
    rows: list[list[float]] = []
    width = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            fields = _split_row(line, ",") if "," in line else line.split()
            try:
                row = [float(f) for f in fields]
            except ValueError:
                raise ParseError(f"{path}: row {lineno}: malformed numeric field") from None
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(
                    f"{path}: row {lineno}: expected {width} columns, got {len(row)}"
                )
            rows.append(row)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    values = np.asarray(rows, dtype=np.float64)
    try:
        values = check_square_values(values, mode, strict=strict)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return DistanceMatrix(values, mode)


def save_matrix(path, dm) -> None:
    """Write a dense matrix (DistanceMatrix or array) with round-trip precision."""
    values = np.asarray(getattr(dm, "values", dm), dtype=np.float64)
    with open(path, "w") as fh:
        for row in values:
            fh.write(" ".join(format(x, FLOAT_FMT) for x in row) + "\n")


def write_partition(path, labels, noise_flags) -> None:
    """Write one ``index,label,noise_flag`` line per object.

    Noise objects left in the separate cluster carry label -1; objects merged
    back into a cluster keep their noise flag set with a real label.
    """
    labels = np.asarray(labels, dtype=np.int64)
    flags = np.asarray(noise_flags, dtype=bool)
    if labels.ndim != 1 or labels.size == 0:
        raise ValueError("empty partition")
    if flags.shape != labels.shape:
        raise ValueError("labels and noise_flags length mismatch")
    with open(path, "w") as fh:
        for i, (lab, flag) in enumerate(zip(labels, flags)):
            fh.write(f"{i},{int(lab)},{int(flag)}\n")


def read_labels(path) -> np.ndarray:
    """Read labels from a partition file (``index,label,flag``) or a one-column list."""
    labels: list[int] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            fields = _split_row(line, ",") if "," in line else line.split()
            pick = fields[1] if len(fields) >= 2 else fields[0]
            try:
                labels.append(int(pick))
            except ValueError:
                raise ParseError(
                    f"{path}: row {lineno}: label {pick!r} is not an integer"
                ) from None
    if not labels:
        raise ParseError(f"{path}: no data rows")
    return np.asarray(labels, dtype=np.int64)

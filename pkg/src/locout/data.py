"""Observation matrix, CSV ingestion and the shared Euclidean distance matrix."""

from __future__ import annotations

import csv
import logging
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform

from locout.errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

TIES_MODES = ("error", "jitter", "drop-duplicates")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DataMatrix:
    """An n x p matrix of observations (rows) and variables (columns).

    ``values`` is stored as a read-only float64 copy so that instances can be
    shared freely between worker threads.
    """

    values: np.ndarray
    row_ids: tuple[str, ...] | None = None
    col_ids: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValidationError(f"expected a 2-D matrix, got shape {values.shape}")
        n, p = values.shape
        if n < 2 or p < 1:
            raise ValidationError(f"need n >= 2 and p >= 1, got n={n}, p={p}")
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise ValidationError(
                f"non-finite entry at row {bad[0]}, column {bad[1]}"
            )
        if self.row_ids is not None and len(self.row_ids) != n:
            raise ValidationError(f"{len(self.row_ids)} row ids for {n} rows")
        if self.col_ids is not None and len(self.col_ids) != p:
            raise ValidationError(f"{len(self.col_ids)} column ids for {p} columns")
        object.__setattr__(self, "values", _frozen(values))
        if self.row_ids is not None:
            object.__setattr__(self, "row_ids", tuple(str(r) for r in self.row_ids))
        if self.col_ids is not None:
            object.__setattr__(self, "col_ids", tuple(str(c) for c in self.col_ids))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def row_labels(self) -> list[str]:
        if self.row_ids is not None:
            return list(self.row_ids)
        return [str(i) for i in range(self.n)]

    def col_labels(self) -> list[str]:
        if self.col_ids is not None:
            return list(self.col_ids)
        return [str(j) for j in range(self.p)]

    def take_rows(self, idx: Sequence[int]) -> DataMatrix:
        idx = np.asarray(idx, dtype=int)
        rows = None if self.row_ids is None else tuple(self.row_ids[i] for i in idx)
        return DataMatrix(self.values[idx], rows, self.col_ids)

    def take_cols(self, idx: Sequence[int]) -> DataMatrix:
        idx = np.asarray(idx, dtype=int)
        cols = None if self.col_ids is None else tuple(self.col_ids[j] for j in idx)
        return DataMatrix(self.values[:, idx], self.row_ids, cols)


def as_array(X: DataMatrix | np.ndarray) -> np.ndarray:
    """Return the raw float matrix behind ``X``."""
    if isinstance(X, DataMatrix):
        return X.values
    return np.asarray(X, dtype=np.float64)


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric matrix of pairwise Euclidean distances with zero diagonal."""

    d: np.ndarray

    def __post_init__(self) -> None:
        d = np.asarray(self.d, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValidationError(f"distance matrix must be square, got {d.shape}")
        object.__setattr__(self, "d", _frozen(d))

    @property
    def n(self) -> int:
        return self.d.shape[0]


@dataclass(frozen=True)
class TiesPolicy:
    """How :func:`validate` treats duplicated rows.

    ``jitter_scale`` is relative to each column's standard deviation.
    """

    mode: str = "error"
    jitter_scale: float = 1e-9
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in TIES_MODES:
            raise ValidationError(
                f"ties mode must be one of {TIES_MODES}, got {self.mode!r}"
            )
        if self.mode == "jitter" and not self.jitter_scale > 0:
            raise ValidationError("jitter_scale must be > 0 in jitter mode")


def _parse_float(cell: str, row: int, col: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ParseError(
            f"non-numeric cell {cell!r} at row {row}, column {col}"
        ) from None


def _resolve_column(name: str | int, header: list[str] | None, width: int) -> int:
    if header is not None and str(name) in header:
        return header.index(str(name))
    try:
        j = int(name)
    except (TypeError, ValueError):
        raise ParseError(f"column {name!r} not found in header") from None
    if not 0 <= j < width:
        raise ParseError(f"column index {j} out of range for {width} columns")
    return j


def load_csv(
    path: str | Path,
    has_header: bool = False,
    label_column: str | int | None = None,
    drop_columns: Sequence[str | int] = (),
) -> tuple[DataMatrix, np.ndarray | None]:
    """Read a numeric CSV file into a :class:`DataMatrix`.

    Rows are observations. If ``label_column`` is given (a header name or a
    0-based column index) it is removed from the matrix and returned as an
    integer 0/1 vector, 1 marking outliers. ``drop_columns`` are discarded.
    Row numbers in error messages are 1-based file lines.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        lines = [(i + 1, r) for i, r in enumerate(csv.reader(fh))
                 if r and any(c.strip() for c in r)]
    if not lines:
        raise ParseError(f"{path}: empty file")

    header = None
    if has_header:
        header = [c.strip() for c in lines[0][1]]
        lines = lines[1:]
        if not lines:
            raise ParseError(f"{path}: header but no data rows")

    width = len(header) if header is not None else len(lines[0][1])
    for lineno, row in lines:
        if len(row) != width:
            raise ParseError(
                f"{path}: row {lineno} has {len(row)} fields, expected {width}"
            )

    label_idx = None
    if label_column is not None:
        label_idx = _resolve_column(label_column, header, width)
    dropped = {_resolve_column(c, header, width) for c in drop_columns}
    if label_idx is not None:
        dropped.add(label_idx)
    keep = [j for j in range(width) if j not in dropped]
    if not keep:
        raise ParseError(f"{path}: no data columns left")

    values = np.empty((len(lines), len(keep)))
    labels = np.empty(len(lines), dtype=int) if label_idx is not None else None
    for i, (lineno, row) in enumerate(lines):
        for jj, j in enumerate(keep):
            values[i, jj] = _parse_float(row[j].strip(), lineno, j + 1)
        if labels is not None:
            v = _parse_float(row[label_idx].strip(), lineno, label_idx + 1)
            if v not in (0.0, 1.0):
                raise ParseError(
                    f"{path}: label at row {lineno} must be 0 or 1, got {v:g}"
                )
            labels[i] = int(v)

    col_ids = tuple(header[j] for j in keep) if header is not None else None
    return DataMatrix(values, col_ids=col_ids), labels


def duplicate_pairs(values: np.ndarray) -> list[tuple[int, int]]:
    """Pairs (first, later) of row indices holding identical rows."""
    _, first, inverse = np.unique(values, axis=0, return_index=True,
                                  return_inverse=True)
    inverse = np.ravel(inverse)
    return [(int(first[g]), i) for i, g in enumerate(inverse) if first[g] != i]


def validate(X: DataMatrix, policy: TiesPolicy | None = None) -> DataMatrix:
    """Remove zero-variance columns and resolve duplicate rows.

    Constant columns are dropped with a warning naming them. Duplicated rows
    are then handled by ``policy.mode``: ``error`` raises, ``drop-duplicates``
    keeps the first occurrence, ``jitter`` perturbs every later copy by
    Gaussian noise of ``jitter_scale`` column standard deviations.
    """
    policy = policy or TiesPolicy()
    values = X.values
    const = np.flatnonzero(np.ptp(values, axis=0) == 0)
    if len(const) == values.shape[1]:
        raise ValidationError("all columns have zero variance")
    if len(const):
        names = [X.col_labels()[j] for j in const]
        warnings.warn(
            f"removed {len(const)} zero-variance column(s): {', '.join(names)}",
            stacklevel=2,
        )
        X = X.take_cols(np.setdiff1d(np.arange(values.shape[1]), const))
        values = X.values

    pairs = duplicate_pairs(values)
    if not pairs:
        return X
    if policy.mode == "error":
        shown = ", ".join(f"({a}, {b})" for a, b in pairs[:20])
        more = "" if len(pairs) <= 20 else f" and {len(pairs) - 20} more"
        raise ValidationError(f"duplicate rows: {shown}{more}")
    later = sorted({b for _, b in pairs})
    if policy.mode == "drop-duplicates":
        logger.info("dropping %d duplicate row(s)", len(later))
        return X.take_rows(np.setdiff1d(np.arange(X.n), later))

    rng = np.random.default_rng(policy.seed)
    jittered = values.copy()
    scale = policy.jitter_scale * values.std(axis=0, ddof=1)
    jittered[later] += rng.standard_normal((len(later), values.shape[1])) * scale
    out = DataMatrix(jittered, X.row_ids, X.col_ids)
    if duplicate_pairs(out.values):
        raise ValidationError("jitter did not break all ties; raise jitter_scale")
    return out


def pairwise_distances(X: DataMatrix | np.ndarray) -> DistanceMatrix:
    """Euclidean distances between all pairs of rows.

    Each distance is computed from coordinate differences (not the Gram
    expansion) so that near-identical rows keep full relative accuracy.
    """
    return DistanceMatrix(squareform(pdist(as_array(X), metric="euclidean")))

"""Local projection model of a single core.

The core rows are centered by their mean and scaled by their column sample
standard deviations; the right singular vectors of the result span the core
space. Any observation is then split into its coordinates inside the core
space (``core_rep``) and its residual in the orthogonal complement
(``orth_rep``), both in the scaled coordinates of the core.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from time import perf_counter

import numpy as np

from locout.data import DataMatrix, as_array
from locout.errors import DegenerateCoreError, ParameterError, ValidationError
from locout.neighborhood import Core

TOL_RANK = 1e-10


class CdVariant(str, enum.Enum):
    """Weighting of core coordinates in the core distance.

    ``LITERAL`` divides squared coordinates by the singular values,
    ``MAHALANOBIS`` by the squared singular values.
    """

    LITERAL = "literal"
    MAHALANOBIS = "mahalanobis"


@dataclass(frozen=True)
class LocalProjection:
    mu: np.ndarray
    sigma: np.ndarray
    V: np.ndarray
    singular_values: np.ndarray
    core: Core

    @property
    def rank(self) -> int:
        return self.V.shape[1]

    @property
    def p(self) -> int:
        return self.mu.shape[0]

    @property
    def cd_divisor(self) -> int:
        return min(len(self.core.members) - 1, self.p)


@dataclass(frozen=True)
class ProjectedPoint:
    core_rep: np.ndarray
    orth_rep: np.ndarray
    cd: float
    od: float


def fit_projection(
    X: DataMatrix | np.ndarray,
    core: Core,
    zero_scale: str = "error",
    tol_rank: float = TOL_RANK,
) -> LocalProjection:
    """Fit location, scale and core space of ``core``.

    ``zero_scale`` decides what happens when a column is constant over the
    core: ``"error"`` raises :class:`DegenerateCoreError`, ``"unit"`` leaves
    that column unscaled (sigma = 1).
    """
    values = as_array(X)
    members = np.asarray(core.members, dtype=int)
    if len(members) < 2:
        raise ParameterError(f"core needs at least 2 members, got {len(members)}")
    rows = values[members]
    mu = rows.mean(axis=0)
    sigma = rows.std(axis=0, ddof=1)

    flat = np.flatnonzero(sigma == 0)
    if len(flat):
        if zero_scale == "error":
            raise DegenerateCoreError(
                f"column {flat[0]} has zero variance in the core of "
                f"observation {core.initiator}",
                column=int(flat[0]),
                initiator=core.initiator,
            )
        if zero_scale != "unit":
            raise ParameterError(f"unknown zero_scale mode {zero_scale!r}")
        sigma = sigma.copy()
        sigma[flat] = 1.0

    scaled = (rows - mu) / sigma
    _, s, vt = np.linalg.svd(scaled, full_matrices=False)
    r = int(np.count_nonzero(s > tol_rank * s[0])) if s[0] > 0 else 0
    if r == 0:
        raise DegenerateCoreError(
            f"core of observation {core.initiator} spans no space",
            initiator=core.initiator,
        )
    return LocalProjection(
        mu=mu, sigma=sigma, V=np.ascontiguousarray(vt[:r].T),
        singular_values=s[:r], core=core,
    )


def core_distance(
    core_rep: np.ndarray,
    P: LocalProjection,
    variant: CdVariant | str = CdVariant.LITERAL,
) -> np.ndarray | float:
    """Core distance of one core representation, or of each row of a matrix."""
    variant = CdVariant(variant)
    c = np.asarray(core_rep, dtype=np.float64)
    power = 1 if variant is CdVariant.LITERAL else 2
    quad = (c * c / P.singular_values ** power).sum(axis=-1)
    out = np.sqrt(quad / P.cd_divisor)
    return float(out) if out.ndim == 0 else out


def orthogonal_distance(orth_rep: np.ndarray) -> np.ndarray | float:
    """Euclidean norm of an orthogonal representation (row-wise for matrices)."""
    o = np.asarray(orth_rep, dtype=np.float64)
    out = np.sqrt((o * o).sum(axis=-1))
    return float(out) if out.ndim == 0 else out


def _check_width(values: np.ndarray, P: LocalProjection) -> None:
    if values.shape[-1] != P.p:
        raise ValidationError(
            f"point has {values.shape[-1]} components, projection expects {P.p}"
        )


def project_point(
    x: np.ndarray,
    P: LocalProjection,
    variant: CdVariant | str = CdVariant.LITERAL,
) -> ProjectedPoint:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValidationError(f"expected a single p-vector, got shape {x.shape}")
    _check_width(x, P)
    scaled = (x - P.mu) / P.sigma
    core_rep = P.V.T @ scaled
    orth_rep = scaled - P.V @ core_rep
    return ProjectedPoint(
        core_rep=core_rep,
        orth_rep=orth_rep,
        cd=core_distance(core_rep, P, variant),
        od=orthogonal_distance(orth_rep),
    )


def project(
    X: DataMatrix | np.ndarray,
    P: LocalProjection,
    variant: CdVariant | str = CdVariant.LITERAL,
) -> tuple[np.ndarray, np.ndarray]:
    """Core and orthogonal distances of every row of ``X``."""
    values = as_array(X)
    _check_width(values, P)
    cd, od, _, _ = _project_rows(values, P, variant)
    return cd, od


def _project_rows(values, P, variant, timings=None):
    # split into the CD part (scaling + core coordinates) and the OD part
    # (residual + norm) so the profiler can time them separately
    t0 = perf_counter()
    scaled = values - P.mu
    scaled /= P.sigma
    core_rep = scaled @ P.V
    cd = core_distance(core_rep, P, variant)
    t1 = perf_counter()
    scaled -= core_rep @ P.V.T
    od = np.sqrt(np.einsum("ij,ij->i", scaled, scaled))
    t2 = perf_counter()
    if timings is not None:
        timings["cd"] = timings.get("cd", 0.0) + (t1 - t0)
        timings["od"] = timings.get("od", 0.0) + (t2 - t1)
    return np.atleast_1d(cd), od, core_rep, scaled

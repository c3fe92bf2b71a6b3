"""Ensemble of all n local projections and the LocOut outlyingness score.

Every observation ``y`` initiates one local projection. For an observation
``x`` the orthogonal distances ``OD_y(x)`` of all projections whose core does
not contain ``x`` are averaged with weights derived from the inverse core
distances ``1 / CD_y(x)``: the inverse distances are shifted by their minimum
and normalized to sum to one, so well-described projections dominate and the
worst-describing projection gets weight zero.
"""

from __future__ import annotations

import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from time import perf_counter

import numpy as np
from threadpoolctl import threadpool_limits

from locout.data import DataMatrix, DistanceMatrix, as_array, pairwise_distances
from locout.errors import DegenerateCoreError, LocOutError
from locout.neighborhood import NeighborhoodParams, select_core
from locout.projection import CdVariant, LocalProjection, _project_rows, fit_projection

logger = logging.getLogger(__name__)

EPS_WEIGHTS = 1e-12


class LowDimensionWarning(UserWarning):
    """All orthogonal distances vanish because p <= ceil(alpha * k)."""


@dataclass(frozen=True)
class ProjectionEnsemble:
    """``cd[y, x]`` and ``od[y, x]`` are distances of ``x`` under the projection
    initiated by ``y``; ``core_mask[y, x]`` flags ``x`` in ``core(y)``.
    Initiators with identical cores share one :class:`LocalProjection`."""

    projections: tuple[LocalProjection, ...]
    cd: np.ndarray
    od: np.ndarray
    core_mask: np.ndarray

    @property
    def n(self) -> int:
        return self.cd.shape[0]

    @property
    def n_unique(self) -> int:
        return len({id(P) for P in self.projections})


@dataclass(frozen=True)
class ScoreReport:
    locout: np.ndarray
    weights_degenerate: tuple[int, ...]
    params: NeighborhoodParams
    variant: CdVariant
    cd_min: np.ndarray | None = None
    cd_median: np.ndarray | None = None
    core_count: np.ndarray | None = None
    degenerate_dimension: bool = False


def _add(timings, key, dt):
    if timings is not None:
        timings[key] = timings.get(key, 0.0) + dt


def build_ensemble(
    X: DataMatrix | np.ndarray,
    D: DistanceMatrix,
    params: NeighborhoodParams,
    variant: CdVariant | str = CdVariant.LITERAL,
    threads: int = 1,
    zero_scale: str = "error",
    timings: dict | None = None,
) -> ProjectionEnsemble:
    """Select every core, fit each distinct core once, evaluate CD and OD.

    ``threads`` workers fit and evaluate projections concurrently. Each
    projection is computed by exactly one worker with BLAS pinned to a single
    thread, so the result does not depend on ``threads``. If ``timings`` is a
    dict, per-stage wall-clock seconds are accumulated into the keys
    ``core_selection``, ``svd``, ``cd`` and ``od``.
    """
    values = as_array(X)
    n = values.shape[0]
    params.check(n)
    variant = CdVariant(variant)

    t0 = perf_counter()
    cores = [select_core(y, D, params) for y in range(n)]
    _add(timings, "core_selection", perf_counter() - t0)

    unique: dict[tuple[int, ...], int] = {}
    for core in cores:
        unique.setdefault(core.key, core.initiator)
    leaders = list(unique.values())

    def work(y: int):
        local: dict[str, float] = {}
        t = perf_counter()
        try:
            P = fit_projection(values, cores[y], zero_scale=zero_scale)
        except DegenerateCoreError as exc:
            exc.initiator = y
            raise
        local["svd"] = perf_counter() - t
        cd, od, _, _ = _project_rows(values, P, variant, local)
        return P, cd, od, local

    with threadpool_limits(limits=1):
        if threads > 1 and len(leaders) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(work, leaders))
        else:
            results = [work(y) for y in leaders]

    fitted = {}
    for y, (P, cd, od, local) in zip(leaders, results):
        fitted[cores[y].key] = (P, cd, od)
        for key, dt in local.items():
            _add(timings, key, dt)

    cd = np.empty((n, n))
    od = np.empty((n, n))
    mask = np.zeros((n, n), dtype=bool)
    projections = []
    for y, core in enumerate(cores):
        P, cd_row, od_row = fitted[core.key]
        projections.append(P)
        cd[y] = cd_row
        od[y] = od_row
        mask[y, list(core.members)] = True
    logger.debug("ensemble: %d initiators, %d distinct cores", n, len(leaders))
    return ProjectionEnsemble(tuple(projections), cd, od, mask)


def _weights_column(cd_col: np.ndarray, mask_col: np.ndarray) -> tuple[np.ndarray, bool]:
    contributing = np.flatnonzero(~mask_col)
    if len(contributing) == 0:
        raise LocOutError(
            "observation lies in every core; no projection can score it "
            "(increase n or decrease k)"
        )
    w = np.zeros_like(cd_col)
    cds = cd_col[contributing]
    zero = contributing[cds == 0]
    if len(zero):
        # limit of 1/CD -> inf: the exactly-centered projections take all mass
        w[zero] = 1.0 / len(zero)
        return w, False
    raw = 1.0 / cds
    shifted = raw - raw.min()
    total = shifted.sum()
    if total < EPS_WEIGHTS:
        w[contributing] = 1.0 / len(contributing)
        return w, True
    w[contributing] = shifted / total
    return w, False


def weights(E: ProjectionEnsemble, x: int) -> np.ndarray:
    """Weights ``w_y(x)`` of every projection ``y`` for observation ``x``."""
    return _weights_column(E.cd[:, x], E.core_mask[:, x])[0]


def weight_matrix(E: ProjectionEnsemble) -> tuple[np.ndarray, list[int]]:
    """All weights as an n x n matrix ``W[y, x]`` plus the observations where
    the uniform fallback fired."""
    W = np.zeros_like(E.cd)
    degenerate = []
    for x in range(E.cd.shape[1]):
        W[:, x], fallback = _weights_column(E.cd[:, x], E.core_mask[:, x])
        if fallback:
            degenerate.append(x)
    return W, degenerate


def locout_scores(
    X: DataMatrix | np.ndarray,
    params: NeighborhoodParams | None = None,
    variant: CdVariant | str = CdVariant.LITERAL,
    threads: int = 1,
    zero_scale: str = "error",
    D: DistanceMatrix | None = None,
    timings: dict | None = None,
) -> ScoreReport:
    """LocOut score of every row of ``X``; larger means more outlying.

    When ``p <= ceil(alpha * k)`` every observation lies inside every core
    space, all orthogonal distances vanish and the scores carry no
    information; a :class:`LowDimensionWarning` is issued and zeros returned.
    """
    params = params or NeighborhoodParams()
    variant = CdVariant(variant)
    values = as_array(X)
    n, p = values.shape
    params.check(n)

    if p <= params.core_size:
        warnings.warn(
            f"p = {p} <= ceil(alpha * k) = {params.core_size}: orthogonal "
            "distances are structurally zero and LocOut scores are all 0; "
            "the method needs more variables than core members",
            LowDimensionWarning,
            stacklevel=2,
        )
        return ScoreReport(np.zeros(n), (), params, variant,
                           degenerate_dimension=True)

    if D is None:
        t = perf_counter()
        D = pairwise_distances(values)
        _add(timings, "distances", perf_counter() - t)
    E = build_ensemble(values, D, params, variant, threads=threads,
                       zero_scale=zero_scale, timings=timings)
    t = perf_counter()
    W, degenerate = weight_matrix(E)
    scores = (W * E.od).sum(axis=0)
    _add(timings, "weights", perf_counter() - t)
    if degenerate:
        logger.info("uniform weight fallback for %d observation(s)", len(degenerate))
    return ScoreReport(
        locout=scores,
        weights_degenerate=tuple(degenerate),
        params=params,
        variant=variant,
        cd_min=E.cd.min(axis=0),
        cd_median=np.median(E.cd, axis=0),
        core_count=E.core_mask.sum(axis=0),
    )

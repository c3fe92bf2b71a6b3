"""AUC, the k-th nearest neighbour baseline, runtime profiling and the
simulation benchmark harness."""

from __future__ import annotations

import csv
import logging
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from statistics import median
from time import perf_counter
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from locout.data import DataMatrix, DistanceMatrix, as_array, pairwise_distances
from locout.errors import ParameterError
from locout.neighborhood import NeighborhoodParams
from locout.projection import CdVariant
from locout.scoring import locout_scores
from locout.simulation import SimulationConfig, generate

logger = logging.getLogger(__name__)

KNN_GRID = tuple(range(5, 55, 5))
METHODS = ("locout", "knn")
SETUP_NUMBER = {"normal": 1, "lognormal": 2}


@dataclass(frozen=True)
class AucResult:
    auc: float
    n_pos: int
    n_neg: int


def auc(scores: Sequence[float], labels: Sequence[int]) -> AucResult:
    """Area under the ROC curve in its Mann-Whitney form.

    Equals the fraction of (outlier, inlier) pairs in which the outlier
    scores higher, tied pairs counting one half.
    """
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if s.shape != y.shape or s.ndim != 1:
        raise ParameterError("scores and labels must be 1-D of equal length")
    pos = y == 1
    n_pos = int(pos.sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ParameterError("AUC needs at least one outlier and one inlier")
    ranks = rankdata(s)  # mid-ranks give half credit to ties
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return AucResult(auc=float(u / (n_pos * n_neg)), n_pos=n_pos, n_neg=n_neg)


def knn_baseline(D: DistanceMatrix, k: int) -> np.ndarray:
    """Distance from each observation to its k-th nearest other observation."""
    n = D.n
    if not 1 <= k <= n - 1:
        raise ParameterError(f"k must lie in [1, n - 1 = {n - 1}], got {k}")
    d = np.array(D.d, copy=True)
    np.fill_diagonal(d, np.inf)
    return np.partition(d, k - 1, axis=1)[:, k - 1]


@dataclass(frozen=True)
class RuntimeProfile:
    n: int
    p: int
    k: int
    t_distances: float
    t_core_selection: float
    t_svd: float
    t_cd: float
    t_od: float
    t_weights: float
    t_total: float

    @property
    def stage_sum(self) -> float:
        return (self.t_distances + self.t_core_selection + self.t_svd
                + self.t_cd + self.t_od + self.t_weights)

    @property
    def largest_stage(self) -> str:
        stages = {f.name: getattr(self, f.name) for f in fields(self)
                  if f.name.startswith("t_") and f.name != "t_total"}
        return max(stages, key=stages.get)


def profile(
    X: DataMatrix | np.ndarray,
    params: NeighborhoodParams,
    variant: CdVariant | str = CdVariant.LITERAL,
    repeats: int = 3,
) -> RuntimeProfile:
    """Time every stage of the LocOut pipeline on one worker.

    The pipeline is run ``repeats`` times and each duration is the median
    over runs.
    """
    values = as_array(X)
    n, p = values.shape
    if repeats < 1:
        raise ParameterError("repeats must be >= 1")
    runs = []
    for _ in range(repeats):
        timings: dict[str, float] = {}
        t0 = perf_counter()
        locout_scores(values, params, variant, threads=1, timings=timings)
        total = perf_counter() - t0
        runs.append((timings, total))
    stage = {key: median(t.get(key, 0.0) for t, _ in runs)
             for key in ("distances", "core_selection", "svd", "cd", "od", "weights")}
    return RuntimeProfile(
        n=n, p=p, k=params.k,
        t_distances=stage["distances"],
        t_core_selection=stage["core_selection"],
        t_svd=stage["svd"],
        t_cd=stage["cd"],
        t_od=stage["od"],
        t_weights=stage["weights"],
        t_total=median(total for _, total in runs),
    )


@dataclass(frozen=True)
class BenchmarkRow:
    setup: int
    distribution: str
    p_inf: int
    p_noise: int
    method: str
    repetition: int
    seed: int
    auc: float
    runtime_s: float


REPORT_COLUMNS = tuple(f.name for f in fields(BenchmarkRow))


def repetition_seed(master_seed: int, repetition: int) -> int:
    """Seed of one repetition; shared by all grid points so comparisons
    across noise levels and distributions are paired."""
    seq = np.random.SeedSequence(master_seed, spawn_key=(repetition,))
    return int(seq.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def best_knn_auc(D: DistanceMatrix, labels: np.ndarray,
                 grid: Iterable[int] = KNN_GRID) -> tuple[float, int]:
    """Best AUC of the KNN baseline over ``grid`` and the k achieving it."""
    best = (-1.0, 0)
    for k in grid:
        if k > D.n - 1:
            continue
        a = auc(knn_baseline(D, k), labels).auc
        if a > best[0]:
            best = (a, k)
    if best[1] == 0:
        raise ParameterError("no k of the KNN grid fits the data size")
    return best


def run_benchmark(
    configs: Sequence[SimulationConfig],
    params: NeighborhoodParams,
    methods: Sequence[str] = METHODS,
    repetitions: int = 1,
    master_seed: int = 0,
    variant: CdVariant | str = CdVariant.LITERAL,
    knn_grid: Sequence[int] = KNN_GRID,
    threads: int = 1,
) -> list[BenchmarkRow]:
    """Score simulated datasets with each method and report the AUCs.

    Every config is re-seeded per repetition with :func:`repetition_seed`;
    the ``seed`` stored in the configs is ignored. The KNN baseline reports
    its best AUC over ``knn_grid``.
    """
    if repetitions < 1:
        raise ParameterError("repetitions must be >= 1")
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise ParameterError(f"unknown method(s): {sorted(unknown)}")
    rows = []
    for cfg in configs:
        for rep in range(repetitions):
            seed = repetition_seed(master_seed, rep)
            data = generate(replace(cfg, seed=seed))
            t0 = perf_counter()
            D = pairwise_distances(data.X)
            t_dist = perf_counter() - t0
            for method in methods:
                t0 = perf_counter()
                if method == "locout":
                    scores = locout_scores(data.X, params, variant, threads=threads, D=D).locout
                    value = auc(scores, data.labels).auc
                else:
                    value, _ = best_knn_auc(D, data.labels, knn_grid)
                runtime = perf_counter() - t0 + t_dist
                rows.append(BenchmarkRow(
                    setup=SETUP_NUMBER[cfg.distribution],
                    distribution=cfg.distribution,
                    p_inf=cfg.p_inf,
                    p_noise=cfg.p_noise,
                    method=method,
                    repetition=rep,
                    seed=seed,
                    auc=value,
                    runtime_s=runtime,
                ))
            logger.info("%s p_noise=%d rep=%d done", cfg.distribution, cfg.p_noise, rep)
    return rows


def median_auc(rows: Iterable[BenchmarkRow], method: str, distribution: str,
               p_noise: int) -> float:
    return float(np.median([r.auc for r in rows if r.method == method
                            and r.distribution == distribution
                            and r.p_noise == p_noise]))


def write_report(rows: Iterable[BenchmarkRow], path_or_file) -> None:
    """Write benchmark rows as CSV with a header line."""
    def _write(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for r in rows:
            d = asdict(r)
            d["auc"] = format(r.auc, ".17g")
            d["runtime_s"] = format(r.runtime_s, ".6f")
            writer.writerow([d[c] for c in REPORT_COLUMNS])

    if isinstance(path_or_file, (str, Path)):
        with open(path_or_file, "w", newline="", encoding="utf-8") as fh:
            _write(fh)
    else:
        _write(path_or_file)

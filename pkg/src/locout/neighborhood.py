"""k-nearest-neighbour sets and dense core selection.

For an initiating observation ``y`` the core is the densest group of
``ceil(alpha * k)`` observations among the ``k`` nearest neighbours of ``y``.
Density of a candidate is measured by the smallest radius around it that
holds ``ceil(alpha * k)`` neighbours (itself included); the candidate with
the smallest such radius becomes the core center. ``y`` is never part of its
own neighbourhood or core.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from locout.data import DistanceMatrix
from locout.errors import ParameterError


@dataclass(frozen=True)
class NeighborhoodParams:
    k: int = 20
    alpha: float = 0.5

    def __post_init__(self) -> None:
        if int(self.k) != self.k or self.k < 1:
            raise ParameterError(f"k must be a positive integer, got {self.k}")
        if not 0 < self.alpha <= 1:
            raise ParameterError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.core_size < 2:
            raise ParameterError(
                f"ceil(alpha * k) = {self.core_size} < 2; a core must span a space"
            )

    @property
    def core_size(self) -> int:
        # round() guards against 0.3 * 10 = 3.0000000000000004
        return math.ceil(round(self.alpha * self.k, 9))

    def check(self, n: int) -> None:
        if self.k > n - 1:
            raise ParameterError(f"k = {self.k} exceeds n - 1 = {n - 1}")


@dataclass(frozen=True)
class Core:
    initiator: int
    knn: tuple[int, ...]
    center: int
    members: tuple[int, ...]
    covering_radius: float

    @property
    def key(self) -> tuple[int, ...]:
        """Sorted member indices; equal keys mean identical local models."""
        return tuple(sorted(self.members))


def _ordered(dist: np.ndarray, idx: np.ndarray) -> np.ndarray:
    # ascending distance, ties by ascending row index
    return idx[np.lexsort((idx, dist))]


def knn_set(y: int, D: DistanceMatrix, k: int) -> np.ndarray:
    """Indices of the ``k`` nearest other observations of ``y``, nearest first."""
    n = D.n
    if not 1 <= k <= n - 1:
        raise ParameterError(f"k must lie in [1, n - 1 = {n - 1}], got {k}")
    others = np.delete(np.arange(n), y)
    return _ordered(D.d[y, others], others)[:k]


def select_core(y: int, D: DistanceMatrix, params: NeighborhoodParams) -> Core:
    """Select the core of the local projection initiated by ``y``."""
    params.check(D.n)
    h = params.core_size
    knn = knn_set(y, D, params.k)
    # k x k block; row i sorted holds 0 (self) first, so column h-1 is the
    # radius around candidate i containing h points including itself
    block = np.sort(D.d[np.ix_(knn, knn)], axis=1)[:, :h]
    radius = block[:, h - 1]
    # Two candidates that are each other's h-th neighbour tie exactly on the
    # radius. Breaking that by the summed distance keeps the choice independent
    # of row order; the index decides only fully symmetric configurations.
    spread = block.sum(axis=1)
    center = int(knn[np.lexsort((knn, spread, radius))[0]])

    others = knn[knn != center]
    members = (center,) + tuple(int(i) for i in _ordered(D.d[center, others], others)[:h - 1])
    covering = float(max(D.d[center, m] for m in members))
    return Core(
        initiator=int(y),
        knn=tuple(int(i) for i in knn),
        center=center,
        members=members,
        covering_radius=covering,
    )


def select_cores(D: DistanceMatrix, params: NeighborhoodParams) -> list[Core]:
    """Cores for every initiating observation, in row order."""
    params.check(D.n)
    return [select_core(y, D, params) for y in range(D.n)]

import numpy as np
import pytest

import naive
from locout.data import pairwise_distances
from locout.errors import ParameterError
from locout.neighborhood import NeighborhoodParams, knn_set, select_core, select_cores


def line(*coords):
    return pairwise_distances(np.array(coords, dtype=float)[:, None])


class TestParams:
    def test_defaults(self):
        p = NeighborhoodParams()
        assert (p.k, p.alpha, p.core_size) == (20, 0.5, 10)

    def test_core_size_rounding(self):
        assert NeighborhoodParams(k=10, alpha=0.3).core_size == 3

    @pytest.mark.parametrize("alpha", [0.0, -0.1, 1.5])
    def test_alpha_range(self, alpha):
        with pytest.raises(ParameterError, match=r"\(0, 1\]"):
            NeighborhoodParams(k=10, alpha=alpha)

    def test_core_needs_two_points(self):
        with pytest.raises(ParameterError, match="span"):
            NeighborhoodParams(k=2, alpha=0.5)

    def test_k_bounded_by_n(self):
        with pytest.raises(ParameterError):
            NeighborhoodParams(k=5).check(5)


class TestKnn:
    def test_brute_force_sort(self):
        D = line(0, 1, 2, 10)
        assert list(knn_set(0, D, 2)) == [1, 2]
        assert list(knn_set(3, D, 2)) == [2, 1]

    def test_complete_neighbourhood(self):
        D = line(0, 1, 2, 10)
        assert sorted(knn_set(1, D, 3)) == [0, 2, 3]

    def test_tie_break_by_index(self):
        # simplex: unit basis vectors are mutually equidistant
        D = pairwise_distances(np.eye(3))
        assert list(knn_set(2, D, 1)) == [0]
        assert list(knn_set(0, D, 1)) == [1]
        assert list(line(0, 1, 2).d[1]) == [1, 0, 1]
        assert list(knn_set(1, line(0, 1, 2), 1)) == [0]

    def test_k_too_large(self):
        with pytest.raises(ParameterError):
            knn_set(0, line(0, 1, 2), 3)

    def test_matches_naive(self):
        X = np.random.default_rng(3).standard_normal((30, 4))
        D = pairwise_distances(X)
        for y in range(30):
            assert list(knn_set(y, D, 7)) == naive.knn(D.d, y, 7)


class TestSelectCore:
    def test_order_statistics_fixture(self):
        # y at -100 so knn(y) = {1, 2, 3, 10} with k = 4 out of 5 points
        D = line(-100, 1, 2, 3, 10)
        params = NeighborhoodParams(k=4, alpha=0.75)
        assert params.core_size == 3
        core = select_core(0, D, params)
        assert core.center == 2  # the point at coordinate 2
        assert sorted(core.members) == [1, 2, 3]
        assert core.covering_radius == 1.0

    def test_mutual_radius_tie_independent_of_row_order(self):
        # candidates at 1 and 2.5 both have radius 1.5 (each other); the one
        # at 2.5 has the smaller summed distance (0.7 + 1.5 < 1 + 1.5)
        params = NeighborhoodParams(k=4, alpha=0.75)
        assert select_core(0, line(-100, 0, 1, 2.5, 3.2), params).center == 3
        assert select_core(0, line(-100, 3.2, 2.5, 1, 0), params).center == 2

    def test_excludes_initiator_inside_radius(self):
        # y sits in the middle of a tight cluster
        D = line(0.0, -0.1, 0.1, -0.2, 0.2, 5.0)
        core = select_core(0, D, NeighborhoodParams(k=4, alpha=0.5))
        assert 0 not in core.members
        assert 0 not in core.knn

    def test_invariants_and_naive_agreement(self):
        X = np.random.default_rng(11).standard_normal((40, 6))
        D = pairwise_distances(X)
        params = NeighborhoodParams(k=12, alpha=0.5)
        for core in select_cores(D, params):
            members = set(core.members)
            assert len(members) == params.core_size
            assert members <= set(core.knn)
            assert core.center in members
            assert core.initiator not in members
            assert core.covering_radius == max(D.d[core.center, m] for m in members)
            center, expected = naive.core(D.d, core.initiator, params.k, params.core_size)
            assert core.center == center
            assert sorted(core.members) == sorted(expected)

    def test_dense_cluster_wins(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            cluster = rng.normal(0, 0.05, size=(6, 3)) + 10
            scatter = rng.uniform(-5, 5, size=(8, 3)) + 10
            y = np.array([[10.0, 10.0, 16.0]])
            X = np.vstack([y, cluster, scatter])
            D = pairwise_distances(X)
            core = select_core(0, D, NeighborhoodParams(k=12, alpha=0.5))
            assert core.center in range(1, 7)

    def test_deterministic(self):
        X = np.random.default_rng(2).standard_normal((25, 5))
        D = pairwise_distances(X)
        params = NeighborhoodParams(k=8)
        assert select_cores(D, params) == select_cores(D, params)

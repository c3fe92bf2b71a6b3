"""
LocOut scores on a low-rank cloud
=================================

Points lie near a 3-dimensional subspace of a 40-dimensional space. One
observation is pushed off that subspace without changing its distance to
the others much. Its LocOut score stands out.
"""

# %%
import numpy as np

from locout import NeighborhoodParams, auc, knn_baseline, locout_scores, pairwise_distances

rng = np.random.default_rng(1)
p, q, n = 40, 3, 80
basis = np.linalg.qr(rng.standard_normal((p, q)))[0]
X = rng.standard_normal((n, q)) @ basis.T * 3 + 0.05 * rng.standard_normal((n, p))

# %%
# Move observation 5 along a direction orthogonal to the subspace.
away = rng.standard_normal(p)
away -= basis @ (basis.T @ away)
away /= np.linalg.norm(away)
X[5] += 2.0 * away
labels = np.zeros(n, int)
labels[5] = 1

# %%
report = locout_scores(X, NeighborhoodParams(k=20, alpha=0.5))
top = np.argsort(report.locout)[::-1][:5]
print("top LocOut rows:", top, report.locout[top].round(2))
print("LocOut AUC:", auc(report.locout, labels).auc)

# %%
# The k-th neighbour distance barely notices the displacement.
knn = knn_baseline(pairwise_distances(X), 10)
print("KNN AUC   :", round(auc(knn, labels).auc, 3))

# %%
# Diagnostics: how many cores each point belongs to, and the smallest core
# distance it receives.
print("core count of row 5:", report.core_count[5])
print("min CD of row 5     :", report.cd_min[5].round(3))

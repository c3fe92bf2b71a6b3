"""
One local projection
====================

Build the core of a single initiating observation, fit its local model and
split every observation into a core distance and an orthogonal distance.
"""

# %%
# Flat data: more variables than observations.
import numpy as np

from locout import NeighborhoodParams, fit_projection, pairwise_distances, project, select_core

rng = np.random.default_rng(0)
X = rng.standard_normal((60, 200))
D = pairwise_distances(X)

# %%
# The core of observation 0: the densest half of its 20 nearest neighbours.
params = NeighborhoodParams(k=20, alpha=0.5)
core = select_core(0, D, params)
print("knn(0)  :", core.knn)
print("center  :", core.center)
print("members :", sorted(core.members))
print("radius  :", round(core.covering_radius, 3))

# %%
# Fit the local model. With 10 core rows in 200 dimensions the core space has
# rank 9: the centred core spans at most h - 1 directions.
P = fit_projection(X, core)
print("rank    :", P.rank)

# %%
# Core members sit inside the core space (orthogonal distance ~ 0); the rest
# of the data does not.
cd, od = project(X, P)
inside = np.zeros(len(X), bool)
inside[list(core.members)] = True
print("OD core members  max:", od[inside].max())
print("OD other points  min:", od[~inside].min())
print("CD core members mean:", cd[inside].mean().round(3))
print("CD other points mean:", cd[~inside].mean().round(3))

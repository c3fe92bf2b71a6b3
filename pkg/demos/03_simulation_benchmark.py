"""
Simulation benchmark
====================

Three Gaussian groups with scatter outliers, growing numbers of noise
variables, LocOut against the k-th nearest neighbour distance. A few
repetitions only; raise ``REPS`` for stable medians.
"""

# %%
import sys

from locout import NeighborhoodParams, SimulationConfig, generate, run_benchmark
from locout.evaluation import median_auc, write_report

REPS = 3
NOISE = (0, 350, 1000)

# %%
# One draw, to see what the generator produces.
data = generate(SimulationConfig(group_sizes=(45, 45, 30), p_noise=350, seed=1))
print(data.X.shape, "outliers per group:", data.outlier_counts)
print(data.provenance_line())

# %%
configs = [SimulationConfig(group_sizes=(45, 45, 30), p_noise=pn, distribution=dist)
           for dist in ("normal", "lognormal") for pn in NOISE]
rows = run_benchmark(configs, NeighborhoodParams(k=20), repetitions=REPS, master_seed=7)

# %%
for dist in ("normal", "lognormal"):
    for method in ("locout", "knn"):
        meds = [median_auc(rows, method, dist, pn) for pn in NOISE]
        print(f"{dist:9s} {method:6s}", " ".join(f"{m:.3f}" for m in meds))

# %%
# The long-format report, as written by ``locout bench``.
write_report(rows[:4], sys.stdout)

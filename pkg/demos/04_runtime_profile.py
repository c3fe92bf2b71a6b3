"""
Where the time goes
===================

Per-stage timings of the LocOut pipeline for growing dimension. The n
singular value decompositions dominate once p is large.
"""

# %%
import numpy as np

from locout import NeighborhoodParams, profile

rng = np.random.default_rng(2)
params = NeighborhoodParams(k=40)

# %%
stages = ("t_distances", "t_core_selection", "t_svd", "t_cd", "t_od", "t_weights")
print("p     " + " ".join(f"{s[2:]:>14s}" for s in stages) + "   total")
for p in (250, 500, 1000):
    prof = profile(rng.standard_normal((200, p)), params, repeats=1)
    print(f"{p:<5d} " + " ".join(f"{getattr(prof, s):14.4f}" for s in stages)
          + f"  {prof.t_total:6.3f}")

"""
A beam on a rough floor
=======================

Drop a rigid interval onto a comb of random teeth and record which two
teeth end up carrying it.  As the comb gets finer the pair of contact
points settles into a fixed law on [-1, 0] x [0, 1].
"""

# %%
import numpy as np

from roughsupport import LineComb, pair_density, right_marginal, sample_line_comb, support_pair
from roughsupport.comb import brute_force_support_pair

# %%
# A hand-built comb: the tall second and fourth teeth carry the beam.
comb = LineComb([-0.75, -0.25, 0.25, 0.75], [0.2, 0.9, 0.1, 0.8])
print(support_pair(comb))
print(brute_force_support_pair(comb))

# %%
# A fine random comb.  The settle walks the upper convex hull of the tips
# and keeps the edge spanning the centre.
comb = sample_line_comb(1000, rng_seed=3)
pair = support_pair(comb)
print(f"supports at a1={pair.a1:.4f}, a2={pair.a2:.4f}")

# %%
# Where the limit law puts its mass: zero when both supports sit at the
# centre, largest when one support is at the centre and the other at an end.
for a in [(0.0, 0.0), (-1.0, 1.0), (0.0, 1.0), (-0.5, 0.5)]:
    print(a, round(pair_density(*a), 6))

# %%
# The outer end of each half is used more often than its inner end.
print("end/centre frequency:", right_marginal(1.0) / right_marginal(0.0))

# %%
# Empirical law of the supports from many combs, against the limit.
from roughsupport.montecarlo import ExperimentConfig, run_interval_experiment

res = run_interval_experiment(ExperimentConfig("interval", n_teeth=400, trials=50_000, master_seed=1))
print(res.fit)
emp = res.histogram.fractions().sum(axis=0)
print("right-support histogram:", np.round(emp / np.diff(res.histogram.y_edges), 3))

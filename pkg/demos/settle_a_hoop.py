"""
A hoop on a rough table
=======================

A circular hoop lowered onto a ring of random teeth rests on three tips
whose triangle contains the centre.  Up to rotation the contact is
described by the three gaps between the contacts, each below pi.
"""

# %%
import math

import numpy as np

from roughsupport import sample_circular_comb, support_triple, triangle_mass, triple_density
from roughsupport.circle import GapAngles, canonicalize
from roughsupport.comb import brute_force_support_triple

# %%
comb = sample_circular_comb(25, rng_seed=4)
triple = support_triple(comb)
print("contacts:", triple.indices, "gaps:", np.round(triple.gaps, 4))
print("oracle agrees:", brute_force_support_triple(comb) == triple)

# %%
# The gap density is symmetric under relabelling the contacts cyclically,
# so it carries mass 3 on the full triangle of (theta1, theta2).
print("mass on the triangle:", triangle_mass())
t = GapAngles((2.0, 1.5, 2 * math.pi - 3.5))
print([round(triple_density(*r.theta), 12) for r in t.rotations()], canonicalize(t))

# %%
# The most likely resting shape has one half-circle gap and two quarter gaps.
g = np.linspace(0, math.pi, 201)
t1, t2 = np.meshgrid(g, g, indexing="ij")
inside = t1 + t2 >= math.pi
vals = triple_density(t1[inside], t2[inside], check=False)
k = np.argmax(vals)
print("argmax:", t1[inside][k], t2[inside][k], "value", vals[k])

# %%
from roughsupport.montecarlo import ExperimentConfig, run_circle_experiment

res = run_circle_experiment(ExperimentConfig("circle", n_teeth=201, trials=20_000, bins_x=12, bins_y=12,
                                             master_seed=7))
print(res.fit, "histogram total", res.histogram.total)

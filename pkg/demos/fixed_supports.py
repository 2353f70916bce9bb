"""
How likely is a given resting position?
=======================================

Fix a line through two tips sunk A1/N and A2/N below the comb ceiling.
The chance that no other tooth pokes above it tends to an exponential of
the area between the line and the ceiling.  The same holds for a plane
over a circular comb, with a correction once the plane tilts above the
ceiling somewhere.
"""

# %%
import math

from roughsupport import LinePlacement, plane_coefficients, prob_comb_below_line, prob_comb_below_plane
from roughsupport.circle import ceiling_overlap_factor, ceiling_overlap_quadrature
from roughsupport.montecarlo import ExperimentConfig, estimate_comb_below

# %%
for depths, at in [((1.0, 1.5), (-0.5, 0.5)), ((0.2, 3.0), (-0.3, 0.4))]:
    line = LinePlacement(*depths, *at)
    est = estimate_comb_below(ExperimentConfig("interval", 2000, 50_000, master_seed=1), line)
    print(f"line {depths} at {at}: crosses ceiling {line.crosses_ceiling}, "
          f"limit {prob_comb_below_line(line):.4f}, simulated {est.value:.4f} +- {est.stderr:.4f}")

# %%
plane = plane_coefficients((0.1, 2.2, 4.0), (0.1, 3.0, 0.5))
print("tilt / offset:", plane.tilt_ratio)
print("overlap factor:", ceiling_overlap_factor(plane), "by quadrature:", ceiling_overlap_quadrature(plane))
est = estimate_comb_below(ExperimentConfig("circle", 2000, 50_000, master_seed=1), plane)
print(f"limit {prob_comb_below_plane(plane):.4f}, simulated {est.value:.4f} +- {est.stderr:.4f}")

# %%
# A level plane sunk c/N below the ceiling: probability exp(-c).
level = plane_coefficients((0.0, 2.0, 4.0), (1.0, 1.0, 1.0))
print(prob_comb_below_plane(level), math.exp(-1))

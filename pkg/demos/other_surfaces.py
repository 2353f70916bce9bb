"""
Does the law depend on the surface?
===================================

Swap the uniform tooth heights for Beta(2, 2) or a triangular law, or
scatter the teeth at random instead of on a grid, and compare the
support histogram with the uniform-grid limit.
"""

# %%
from roughsupport.montecarlo import ExperimentConfig, robustness_experiment

base = dict(kind="interval", n_teeth=1000, trials=50_000, master_seed=42)
variants = [
    ExperimentConfig(**base),
    ExperimentConfig(**base, dist="beta:2,2"),
    ExperimentConfig(**base, dist="triangular:0.3"),
    ExperimentConfig(**base, placement_mode="random"),
]
report = robustness_experiment(variants)
print(report.table())

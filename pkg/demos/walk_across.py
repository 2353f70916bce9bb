"""
Walking across a resting body
=============================

A walker of mass m crosses a body of mass M that rests on random supports.
With mu = m / (m + M) the body never tips if every support stays on the
safe side of the walker's path.  For a beam that means both supports lie
farther than mu from the centre; for a hoop, that every gap stays below
2 arccos(mu).
"""

# %%
import numpy as np
from scipy import optimize

from roughsupport import beam_survival, hoop_survival
from roughsupport.montecarlo import ExperimentConfig, estimate_p_star, sample_supports

# %%
mus = np.linspace(0, 1, 11)
print("mu     beam      hoop")
for m in mus:
    print(f"{m:4.1f}  {beam_survival(m):.5f}  {hoop_survival(m):.5f}")

# %%
# A beam half as heavy as its walker survives about a quarter of the time.
print("beam, mu = 1/2:", beam_survival(0.5))
# The hoop reaches even odds near mu = 1/6.
print("hoop crossing:", optimize.brentq(lambda m: hoop_survival(m) - 0.5, 0.05, 0.3))

# %%
# The same probabilities by simulation.
beam = sample_supports(ExperimentConfig("interval", 1000, 50_000, master_seed=2))
hoop = sample_supports(ExperimentConfig("circle", 1001, 50_000, master_seed=2))
for m in (0.1, 0.3, 0.5):
    b = estimate_p_star(beam.config, m, beam)
    h = estimate_p_star(hoop.config, m, hoop)
    print(f"mu={m}: beam {b.value:.4f} +- {b.stderr:.4f} (exact {beam_survival(m):.4f}), "
          f"hoop {h.value:.4f} +- {h.stderr:.4f} (exact {hoop_survival(m):.4f})")

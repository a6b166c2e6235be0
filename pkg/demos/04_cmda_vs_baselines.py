"""
Continuous exploration against the baselines
============================================

Channel power and mechanical energy of the continuous algorithm on the
minimum-correlation path, a straight line and a circle of the same length,
plus a stop-and-measure strategy.
"""

# %%
import numpy as np

from mobdiv.config import ExperimentConfig, PathSection
from mobdiv.estimation import SmootherConfig
from mobdiv.fading import NoiseModel
from mobdiv.sim import EnergyModel, StoppingConfig, monte_carlo, sweep

lam = 0.1402
trials = 5000

# %% [markdown]
# Common random numbers: every family sees the same seeds, so the
# differences are not swamped by Monte Carlo noise.

# %%
for L in (1.0, 1.5):
    base = ExperimentConfig(path=PathSection(family="mcp", L_p=L), noiseless=True, trials=trials)
    for family, s in sweep("path_family", ["linear", "circular", "mcp"], base):
        print(f"L_p' = {L} lambda  {family:8s}  power {s.mean_power:.3f} +/- {s.stderr_power:.3f}  "
              f"energy {s.mean_energy:.3f} J  M = {s.M}")

# %% [markdown]
# Stopping at five points spaced 0.4 lambda apart pays a start-up cost at each
# stop, which a continuous sweep avoids.

# %%
pts = np.column_stack([np.arange(5) * 0.4 * lam, np.zeros(5)])
clean = SmootherConfig(0.3828 * lam, NoiseModel(), lam)
s = monte_carlo(StoppingConfig(pts, 1, clean, EnergyModel()), trials, 0)
print(f"stopping points  power {s.mean_power:.3f}  energy {s.mean_energy:.3f} J")

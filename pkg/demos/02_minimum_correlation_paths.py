"""
Minimum-correlation paths
=========================

Up to 0.3827 lambda the straight line is provably optimal. Beyond that the
annealer takes over; it still returns a line at 0.6 lambda, and by 1 lambda it
bends the path so that more pairs of points land near zeros of J0.
"""

# %%
import numpy as np

from mobdiv.geometry import fit_spline
from mobdiv.pathopt import AnnealingConfig, collinear_cost, is_straight_line_regime, optimize_path

lam = 0.1402
N = 25

# %%
for L in (0.3, 0.6, 1.0, 1.5):
    D, rep = optimize_path(N, L * lam, lam, AnnealingConfig(seed=0))
    base = collinear_cost(N, L * lam, lam)
    sp = fit_spline(D)
    tag = "straight (analytic)" if is_straight_line_regime(L * lam, lam) else "annealed"
    print(f"L_p = {L:.1f} lambda  {tag:20s} cost {rep.cost:8.3f}  line {base:8.3f}  L_p' = {sp.length / lam:.4f} lambda")

# %% [markdown]
# The 1.5 lambda optimum is a U: both ends are close to the middle, so
# the end chosen for the exploration is whichever is nearer on average.

# %%
pts = D.points / lam
for j in range(0, N, 4):
    print(f"d_{j + 1:02d} = ({pts[j, 0]:+.3f}, {pts[j, 1]:+.3f}) lambda")
print("end-to-end distance:", np.linalg.norm(pts[-1] - pts[0]), "lambda")

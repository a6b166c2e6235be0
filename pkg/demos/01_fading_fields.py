"""
Correlated Rayleigh fading on a line
====================================

Draw channel gains along a short segment and check that their empirical
correlation follows the Jakes kernel J0(2 pi d / lambda).
"""

# %%
import numpy as np

from mobdiv import bessel
from mobdiv.fading import correlation_factor, correlation_matrix, jakes_correlation, sample_field

lam = 0.1402  # 2.14 GHz carrier

# %% [markdown]
# The kernel drops to zero at 0.3828 lambda and turns negative after it.

# %%
for frac in (0.0, 0.1, 0.2, 0.3828, 0.5, 1.0):
    r = jakes_correlation(np.zeros(2), np.array([frac * lam, 0.0]), lam)
    print(f"d = {frac:6.4f} lambda   r = {r:+.4f}")
print("first zero of J0 / (2 pi):", bessel.Z0)

# %%
pts = np.column_stack([np.arange(6) * 0.1 * lam, np.zeros(6)])
R = correlation_matrix(pts, lam)
F = correlation_factor(R)  # factor once, reuse for every draw
H = np.array([sample_field(R, seed, factor=F).gains for seed in range(20000)])

emp = (H.T @ H.conj()).real / len(H)
print("largest deviation from the Jakes matrix:", np.abs(emp - R.entries).max())
print("mean power:", np.mean(np.abs(H) ** 2))

# %% [markdown]
# |h|^2 is exponential with unit mean, so roughly 10% of points sit below
# -10 dB. Moving a fraction of a wavelength is often enough to escape such a fade.

# %%
p = np.abs(H[:, 0]) ** 2
print("P(|h|^2 < 0.1) =", np.mean(p < 0.1), " exponential law:", 1 - np.exp(-0.1))

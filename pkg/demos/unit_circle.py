# %% [markdown]
# # Rules on the unit circle
#
# For a weight on the circle the Gram matrices are Toeplitz and the pencil is
# no longer symmetric. Its eigenvalues lie inside the disk and give a rule
# exact for z^k with -n <= k <= n + 1.

# %%
import numpy as np

from quadpencil import check_exactness, circle_rule, moments
from quadpencil.assembly import pencil_circle_sin2

# %% weight sin^2(theta), 8 nodes
rule = circle_rule(pencil_circle_sin2(7))
for z, w in zip(rule.nodes, rule.weights):
    print(f"z = {z:.6f}   |z| = {abs(z):.6f}   w = {w:.6f}")

# %%
print(check_exactness(rule, moments("sin2")).to_text())

# %% integrate a trigonometric polynomial: (1/2pi) int cos(2t) sin^2(t) dt = -1/4
print(rule.apply(lambda z: (z**2 + z**-2) / 2))

# %% [markdown]
# # Gauss rules straight from moments
#
# Build the two Gram matrices of a weight in the monomial basis, solve the
# symmetric-definite pencil, and read off nodes and weights. No orthogonal
# polynomials are constructed along the way.

# %%
import numpy as np

from quadpencil import check_exactness, gauss_rule, moments, pencil_monomial

# %% 3-point rule for w(x) = 1/(1+x) on [0, 1]
pencil = pencil_monomial("inv_one_plus_x", (0, 1), 2)
print("B =\n", pencil.B)
print("A =\n", pencil.A)
rule = gauss_rule(pencil)
print("nodes  ", rule.nodes)
print("weights", rule.weights)

# %% the rule integrates polynomials up to degree 5 exactly
print(check_exactness(rule, moments("inv_one_plus_x", (0, 1))).to_text())

# %% applying it to a smooth integrand: int_0^1 cos(x)/(1+x) dx
for n in range(1, 7):
    r = gauss_rule(pencil_monomial("inv_one_plus_x", (0, 1), n))
    print(n + 1, "points:", r.apply(np.cos))

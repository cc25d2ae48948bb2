# %% [markdown]
# # Prescribed nodes
#
# Fixing one or both endpoints modifies the pencil; the free nodes come from
# its eigenvalues and the fixed weights from a small linear solve.

# %%
import numpy as np

from quadpencil import check_exactness, fixed_node_rule, moments, pencil_fixed_nodes

oracle = moments("unit", (-1, 1))

# %% 3-point Lobatto: nodes -1, 0, 1 with weights 1/3, 4/3, 1/3
lob = fixed_node_rule(pencil_fixed_nodes("unit", (-1, 1), 0, [-1.0, 1.0]), oracle)
order = np.argsort(lob.all_nodes)
print(lob.all_nodes[order], lob.all_weights[order])

# %% Radau rules with the left endpoint fixed
for n in range(4):
    r = fixed_node_rule(pencil_fixed_nodes("unit", (-1, 1), n, [-1.0], "recursion"), oracle)
    report = check_exactness(r, oracle)
    print(f"{n + 2} points, exact through degree {r.exact_degree}: {report.passed}")

# %% an interior fixed node makes the modified weight change sign
from quadpencil import IndefiniteModifiedWeight

try:
    fixed_node_rule(pencil_fixed_nodes("unit", (-1, 1), 2, [0.3]), oracle)
except IndefiniteModifiedWeight as exc:
    print("IndefiniteModifiedWeight:", exc)

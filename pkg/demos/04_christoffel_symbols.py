"""All Christoffel symbols of the first kind in one recursive pass.

gamma[i, j, k] is the coefficient of qd_j qd_k in the i-th generalized
force — equivalently a half-sum of mass-matrix partial derivatives.  The
recursive sweep never differentiates anything, yet matches the
finite-difference definition to solver precision.
"""

import numpy as np

from dynkit import (
    christoffel_closed_form,
    christoffel_symbols,
    coriolis_matrix,
    fd_christoffel,
    gen_quadruped,
    random_state,
    read_model,
)

tree = gen_quadruped(8, seed=6)
state = random_state(tree, seed=0)
gam = christoffel_symbols(tree, state.q)

print("tensor shape:", gam.gamma.shape)
print("max |gamma - closed form| =",
      np.abs(gam.gamma - christoffel_closed_form(tree, state.q).gamma).max())
print("max |gamma - fd(M)|       =",
      np.abs(gam.gamma - fd_christoffel(tree, state.q).gamma).max())

# Contracting with qd reproduces the Christoffel-consistent Coriolis matrix.
C = coriolis_matrix(tree, state).C
print("max |C - gamma.qd|        =", np.abs(C - gam.contract(state.qd)).max())

# The trailing two indices are symmetric by construction — exactly, because
# the sweep writes both mirror entries from one accumulated value.
print("gamma == gamma.swap(j,k)  :",
      np.array_equal(gam.gamma, gam.gamma.transpose(0, 2, 1)))

# Only mutually related triples can be nonzero; on a branchy tree that's a
# small fraction of the n^3 table.
nz = np.count_nonzero(gam.gamma)
print(f"nonzero entries: {nz} of {gam.gamma.size}")

# On the planar two-link arm every nonzero symbol is the same sine term.
arm = read_model("fixtures/twolink.model")
q = np.array([0.3, 0.5])
print("\ntwo-link gamma at q2=0.5:\n", christoffel_symbols(arm, q).gamma)
print("-m2*l1*lc2*sin(q2)      =", -0.9 * 0.7 * 0.3 * np.sin(0.5))

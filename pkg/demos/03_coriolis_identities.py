"""The Coriolis matrix and the identities that pin it down.

One recursive sweep returns the mass matrix M, its time derivative, and a
Coriolis matrix C.  C is not unique — any C with C qd equal to the
velocity-product force will do — but a good one satisfies more than that.
"""

import numpy as np

from dynkit import (
    FactorizationKind,
    coriolis_matrix,
    fd_mdot,
    gen_binary_tree,
    mass_matrix_crba,
    random_state,
    rnea,
)

tree = gen_binary_tree(9, seed=4)
state = random_state(tree, seed=2)
out = coriolis_matrix(tree, state)

# 1. validity: C qd equals inverse dynamics with qdd = 0 and no gravity
tau = rnea(tree, state, include_gravity=False)
print("max |C qd - tau_vp|    =", np.abs(out.C @ state.qd - tau).max())

# 2. the mass matrix agrees with the composite-rigid-body recursion
print("max |M - M_crba|       =",
      np.abs(out.M - mass_matrix_crba(tree, state.q)).max())

# 3. admissibility: dM/dt = C + C^T, i.e. dM/dt - 2C is skew
print("max |Mdot - C - C^T|   =", np.abs(out.Mdot - out.C - out.C.T).max())
print("max |Mdot - fd(M)|     =", np.abs(out.Mdot - fd_mdot(tree, state)).max())

# Both factorization kinds are admissible, but they give different C's: the
# residual below compares the two matrices entry by entry.
simple = coriolis_matrix(tree, state, kind=FactorizationKind.SIMPLE)
print("\nmax |C_ns - C_simple|  =", np.abs(out.C - simple.C).max(),
      " (same product with qd, different matrices)")
print("max |(C_ns - C_simple) qd| =",
      np.abs((out.C - simple.C) @ state.qd).max())

# Sparsity: entries of bodies with no ancestor relation are identically zero.
print("\nzero entries of C:", int((out.C == 0.0).sum()), "of", out.C.size)

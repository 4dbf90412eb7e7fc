"""Building kinematic trees by hand, by generator, and from model files.

A tree is a list of bodies, each with a single-dof joint, a spatial inertia,
and a parent (0 is the fixed base).  Branchier trees are shallower at equal
size, which is what makes them cheaper for the recursive algorithms.
"""

import io

import numpy as np

from dynkit import (
    Joint,
    KinematicTree,
    PluckerTransform,
    SpatialInertia,
    gen_binary_tree,
    gen_biped,
    gen_quadruped,
    gen_serial,
    load_model,
    save_model,
)

# --- by hand: the classic planar two-link arm ------------------------------
eye = np.eye(3)
arm = KinematicTree(
    joints=[
        Joint("revolute", (0, 0, 1), PluckerTransform(eye, (0.0, 0.0, 0.0))),
        Joint("revolute", (0, 0, 1), PluckerTransform(eye, (0.7, 0.0, 0.0))),
    ],
    inertias=[
        SpatialInertia.from_com(1.3, (0.35, 0, 0), np.diag((0.008, 0.012, 0.02))),
        SpatialInertia.from_com(0.9, (0.30, 0, 0), np.diag((0.006, 0.009, 0.015))),
    ],
    parent=[0, 1],
    gravity=(0.0, -9.81, 0.0),
)
print("two-link arm:", arm.n_bodies, "bodies, depth", arm.depth)

# --- by generator: same size, very different shapes ------------------------
for name, tree in [("serial", gen_serial(16, seed=1)),
                   ("binary", gen_binary_tree(16, seed=1)),
                   ("biped", gen_biped(16, seed=1)),
                   ("quadruped", gen_quadruped(16, seed=1))]:
    print(f"{name:10s} n={tree.n_bodies:2d} depth={tree.depth:2d} "
          f"parent={tree.parent}")

# --- model files: versioned JSON, byte-stable round trip --------------------
text = save_model(arm)
print("\nmodel file starts with:")
print("\n".join(text.splitlines()[:6]))
back = load_model(text)
assert save_model(back) == text
print("round trip preserved all", len(text), "bytes")

# Malformed files fail with the offending body and line.
doc = text.replace('"mass": 0.9', '"mass": -0.9')
try:
    load_model(doc)
except Exception as exc:
    print("\nrejected edit:", exc)

"""Tour of the 6D spatial-vector layer.

Motion vectors pair angular and linear velocity; force vectors pair moment
and force.  The two spaces are dual: their pairing is mechanical power, and
every frame change preserves it.
"""

import numpy as np

from dynkit import (
    ForceVector,
    MotionVector,
    PluckerTransform,
    SpatialInertia,
    apply_inertia,
    cross_force,
    cross_motion,
    dot,
    rotation_about,
    transform_force,
    transform_inertia,
    transform_motion,
)

rng = np.random.default_rng(0)

v = MotionVector(ang=(0.0, 0.0, 1.2), lin=(0.3, 0.0, 0.0))
f = ForceVector(moment=(0.0, 0.1, 0.4), force=(2.0, 0.0, -1.0))
print("power v.f =", dot(v, f))

# A Plucker transform bundles a rotation with an origin shift.  Power is
# invariant because forces transform with the inverse transpose.
X = PluckerTransform(rotation_about(np.array([0.0, 1.0, 0.0]), 0.7),
                     trans=(0.5, -0.2, 0.1))
print("power after frame change =", dot(transform_motion(X, v),
                                        transform_force(X, f)))

# Spatial cross products: rate of change of vectors seen from a moving frame.
w = MotionVector(rng.normal(size=3), rng.normal(size=3))
print("\n(v x) w  =", cross_motion(v, w).to_array())
print("(v x*) f =", cross_force(v, f).to_array())

# A rigid body's inertia is 10 numbers: mass, mass-weighted center, and the
# rotational inertia about the frame origin.
body = SpatialInertia.from_com(mass=2.0, com=(0.1, 0.0, 0.05),
                               rot_inertia_com=np.diag((0.02, 0.03, 0.04)))
print("\nspatial inertia:\n", body.matrix())

momentum = apply_inertia(body, v)
print("\nmomentum I v =", momentum.to_array())
print("kinetic energy 0.5 v.Iv =", 0.5 * dot(v, momentum))

# Re-expressing the inertia in another frame is a congruence; kinetic energy
# computed in either frame agrees.
I_src = transform_inertia(X, body)
v_src = transform_motion(X.inverse(), v)
print("energy in source frame  =", 0.5 * dot(v_src, apply_inertia(I_src, v_src)))

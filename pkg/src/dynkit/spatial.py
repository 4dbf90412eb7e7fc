"""6D spatial vector algebra for rigid-body kinematics and dynamics.

Spatial vectors stack an angular 3-vector on top of a linear 3-vector
(angular-first layout).  Motion vectors hold (angular velocity, linear
velocity); force vectors hold (moment, linear force).  Coordinate changes
between body-fixed frames are Plucker transforms, stored as a rotation and
an origin offset and realized to dense 6x6 matrices only when needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# A rate matrix is a plain dense 6x6 array (no structure exploited): the
# velocity-product factor B in f = I*a + B*v and its composite sums.
RateMatrix = np.ndarray

_ORTHO_TOL = 1e-12


def skew(p) -> np.ndarray:
    """Return the 3x3 cross-product matrix S(p) with S(p) @ w == p x w."""
    p = np.asarray(p, dtype=float)
    return np.array([
        [0.0, -p[2], p[1]],
        [p[2], 0.0, -p[0]],
        [-p[1], p[0], 0.0],
    ])


def rotation_about(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix for a unit axis and an angle in radians."""
    a = np.asarray(axis, dtype=float)
    s, c = np.sin(angle), np.cos(angle)
    K = skew(a)
    return np.eye(3) + s * K + (1.0 - c) * (K @ K)


def _check_vec3(name: str, value) -> np.ndarray:
    v = np.asarray(value, dtype=float).reshape(-1)
    if v.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector, got shape {np.shape(value)}")
    return v


@dataclass(frozen=True, eq=False)
class MotionVector:
    """Spatial motion vector (angular velocity on top, linear velocity below)."""

    ang: np.ndarray
    lin: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "ang", _check_vec3("ang", self.ang))
        object.__setattr__(self, "lin", _check_vec3("lin", self.lin))

    @classmethod
    def zero(cls) -> "MotionVector":
        return cls(np.zeros(3), np.zeros(3))

    @classmethod
    def from_array(cls, v) -> "MotionVector":
        v = np.asarray(v, dtype=float).reshape(6)
        return cls(v[:3], v[3:])

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.ang, self.lin])


@dataclass(frozen=True, eq=False)
class ForceVector:
    """Spatial force vector (moment on top, linear force below)."""

    moment: np.ndarray
    force: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "moment", _check_vec3("moment", self.moment))
        object.__setattr__(self, "force", _check_vec3("force", self.force))

    @classmethod
    def zero(cls) -> "ForceVector":
        return cls(np.zeros(3), np.zeros(3))

    @classmethod
    def from_array(cls, f) -> "ForceVector":
        f = np.asarray(f, dtype=float).reshape(6)
        return cls(f[:3], f[3:])

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.moment, self.force])


@dataclass(frozen=True, eq=False)
class PluckerTransform:
    """Change of coordinates between two frames for spatial vectors.

    ``rot`` maps source-frame coordinates to destination-frame coordinates
    and ``trans`` is the destination origin expressed in the source frame.
    The motion-vector realization is ``[[R, 0], [-R S(p), R]]``.
    """

    rot: np.ndarray
    trans: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.rot, dtype=float)
        if R.shape != (3, 3):
            raise ValueError(f"rot must be 3x3, got shape {R.shape}")
        if not np.allclose(R @ R.T, np.eye(3), atol=1e-9) or np.linalg.det(R) < 0.0:
            raise ValueError("rot must be orthonormal with determinant +1")
        object.__setattr__(self, "rot", R)
        object.__setattr__(self, "trans", _check_vec3("trans", self.trans))

    @classmethod
    def identity(cls) -> "PluckerTransform":
        return cls(np.eye(3), np.zeros(3))

    def matrix(self) -> np.ndarray:
        """Dense 6x6 motion-vector realization."""
        X = np.zeros((6, 6))
        X[:3, :3] = self.rot
        X[3:, 3:] = self.rot
        X[3:, :3] = -self.rot @ skew(self.trans)
        return X

    def force_matrix(self) -> np.ndarray:
        """Dense 6x6 force-vector realization (the inverse transpose of matrix())."""
        X = np.zeros((6, 6))
        X[:3, :3] = self.rot
        X[3:, 3:] = self.rot
        X[:3, 3:] = -self.rot @ skew(self.trans)
        return X

    def inverse(self) -> "PluckerTransform":
        # (R, p)^-1 = (R^T, -R p): swap source and destination frames.
        return PluckerTransform(self.rot.T, -self.rot @ self.trans)

    def compose(self, inner: "PluckerTransform") -> "PluckerTransform":
        """Transform equivalent to applying ``inner`` first, then ``self``.

        The realization satisfies ``out.matrix() == self.matrix() @ inner.matrix()``.
        """
        return PluckerTransform(
            self.rot @ inner.rot,
            inner.trans + inner.rot.T @ self.trans,
        )


@dataclass(frozen=True, eq=False)
class SpatialInertia:
    """Spatial inertia in 10-parameter form.

    Stored as total mass, first mass moment ``m*c`` (mass times center of
    mass), and the 3x3 rotational inertia about the frame origin.  The dense
    realization is ``[[Ibar, S(h)], [S(h)^T, m*eye(3)]]`` with ``h = m*c``.
    """

    mass: float
    com_moment: np.ndarray
    rot_inertia: np.ndarray

    def __post_init__(self):
        m = float(self.mass)
        if not np.isfinite(m) or m < 0.0:
            raise ValueError(f"mass must be finite and non-negative, got {self.mass}")
        I = np.asarray(self.rot_inertia, dtype=float)
        if I.shape != (3, 3):
            raise ValueError(f"rot_inertia must be 3x3, got shape {I.shape}")
        if not np.allclose(I, I.T, atol=1e-9 * max(1.0, float(np.abs(I).max()))):
            raise ValueError("rot_inertia must be symmetric")
        object.__setattr__(self, "mass", m)
        object.__setattr__(self, "com_moment", _check_vec3("com_moment", self.com_moment))
        object.__setattr__(self, "rot_inertia", I)

    @classmethod
    def zero(cls) -> "SpatialInertia":
        return cls(0.0, np.zeros(3), np.zeros((3, 3)))

    @classmethod
    def from_com(cls, mass: float, com, rot_inertia_com) -> "SpatialInertia":
        """Build from center-of-mass parameters (inertia taken about the CoM).

        Applies the parallel-axis shift to refer the rotational inertia to
        the frame origin.
        """
        c = _check_vec3("com", com)
        Sc = skew(c)
        Ibar = np.asarray(rot_inertia_com, dtype=float) + mass * (Sc @ Sc.T)
        return cls(mass, mass * c, Ibar)

    def matrix(self) -> np.ndarray:
        J = np.zeros((6, 6))
        Sh = skew(self.com_moment)
        J[:3, :3] = self.rot_inertia
        J[:3, 3:] = Sh
        J[3:, :3] = Sh.T
        J[3:, 3:] = self.mass * np.eye(3)
        return J

    def __add__(self, other: "SpatialInertia") -> "SpatialInertia":
        return SpatialInertia(
            self.mass + other.mass,
            self.com_moment + other.com_moment,
            self.rot_inertia + other.rot_inertia,
        )


def cross_motion(v: MotionVector, w: MotionVector) -> MotionVector:
    """Motion-on-motion spatial cross product (v x) w."""
    return MotionVector(
        np.cross(v.ang, w.ang),
        np.cross(v.lin, w.ang) + np.cross(v.ang, w.lin),
    )


def cross_force(v: MotionVector, f: ForceVector) -> ForceVector:
    """Motion-on-force spatial cross product (v x*) f, dual to cross_motion."""
    return ForceVector(
        np.cross(v.ang, f.moment) + np.cross(v.lin, f.force),
        np.cross(v.ang, f.force),
    )


def cross_force_swapped(f: ForceVector) -> RateMatrix:
    """Matrix N(f) with N(f) @ v == cross_force(v, f) for every motion v.

    Swaps the roles of the two cross-product arguments; the result is a
    skew-symmetric 6x6 rate matrix.
    """
    Sn = skew(f.moment)
    Sf = skew(f.force)
    N = np.zeros((6, 6))
    N[:3, :3] = -Sn
    N[:3, 3:] = -Sf
    N[3:, :3] = -Sf
    return N


def cross_motion_matrix(v) -> np.ndarray:
    """6x6 realization of (v x) acting on motion vectors."""
    v = np.asarray(v, dtype=float).reshape(6)
    C = np.zeros((6, 6))
    Sw = skew(v[:3])
    C[:3, :3] = Sw
    C[3:, 3:] = Sw
    C[3:, :3] = skew(v[3:])
    return C


def cross_force_matrix(v) -> np.ndarray:
    """6x6 realization of (v x*) acting on force vectors; equals -(v x)^T."""
    return -cross_motion_matrix(v).T


def transform_motion(X: PluckerTransform, v: MotionVector) -> MotionVector:
    """Re-express a motion vector in the destination frame of X."""
    w = X.rot @ (v.lin - np.cross(X.trans, v.ang))
    return MotionVector(X.rot @ v.ang, w)


def transform_force(X: PluckerTransform, f: ForceVector) -> ForceVector:
    """Re-express a force vector in the destination frame of X.

    Uses the dual map (the inverse transpose of the motion realization), so
    dot(v, f) is invariant under simultaneous motion/force transforms.
    """
    n = X.rot @ (f.moment - np.cross(X.trans, f.force))
    return ForceVector(n, X.rot @ f.force)


def transform_inertia(X: PluckerTransform, I: SpatialInertia) -> SpatialInertia:
    """Re-express a spatial inertia in the *source* frame of X.

    This is the congruence X^T J X computed in 10-parameter form, used when
    folding a child body's inertia into its parent's frame.
    """
    R, p = X.rot, X.trans
    h = R.T @ I.com_moment
    Sh = skew(h)
    Sp = skew(p)
    Ibar = R.T @ I.rot_inertia @ R - Sh @ Sp - Sp @ Sh - I.mass * (Sp @ Sp)
    return SpatialInertia(I.mass, h + I.mass * p, 0.5 * (Ibar + Ibar.T))


def congruence(X: PluckerTransform, A) -> np.ndarray | SpatialInertia:
    """Congruence transform X^T A X of a 6x6 operator (or a spatial inertia).

    Changes the representation of inertia-like and rate-like operators from
    the destination frame of X back to its source frame.
    """
    if isinstance(A, SpatialInertia):
        return transform_inertia(X, A)
    Xm = X.matrix()
    return Xm.T @ np.asarray(A, dtype=float) @ Xm


def apply_inertia(I: SpatialInertia, v: MotionVector) -> ForceVector:
    """Momentum-style product f = I v in 10-parameter form."""
    return ForceVector(
        I.rot_inertia @ v.ang + np.cross(I.com_moment, v.lin),
        I.mass * v.lin - np.cross(I.com_moment, v.ang),
    )


def dot(v: MotionVector, f: ForceVector) -> float:
    """Duality pairing (power) between a motion and a force vector."""
    return float(v.ang @ f.moment + v.lin @ f.force)

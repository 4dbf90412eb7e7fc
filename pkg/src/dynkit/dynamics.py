"""Rigid-body dynamics of kinematic trees.

Recursive routines (compiled sweeps over the tree):

* ``rnea`` -- inverse dynamics by the Newton-Euler recursion.
* ``mass_matrix_crba`` -- joint-space mass matrix by composite rigid bodies.
* ``coriolis_matrix`` -- mass matrix M, its time derivative, and a
  Christoffel-consistent Coriolis matrix C in one O(N*depth) pass.
* ``christoffel_symbols`` -- all n^3 Christoffel symbols of the first kind
  in O(N*depth^2).

Reference routes used for cross-checking (plain numpy, ground frame):

* ``christoffel_closed_form`` -- per-triple evaluation from composite
  inertias.
* ``coriolis_global`` -- Jacobian-based O(N^3) assembly of M and C.
* ``fd_christoffel`` / ``fd_mdot`` -- central differences of the mass matrix.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .model import GeneralizedState, KinematicTree, joint_calc
from .spatial import (
    ForceVector,
    MotionVector,
    PluckerTransform,
    RateMatrix,
    SpatialInertia,
    cross_force_swapped,
    cross_motion_matrix,
    cross_force_matrix,
    transform_inertia,
)


class FactorizationKind(enum.Enum):
    """Choice of velocity-product factor B in f = I a + B v.

    SIMPLE is (v x*) I.  NIEMEYER_SLOTINE symmetrizes it so that the rate of
    a composite inertia equals B + B^T, which makes the resulting Coriolis
    matrix match the Christoffel symbols of the mass matrix.
    """

    SIMPLE = _kernels.KIND_SIMPLE
    NIEMEYER_SLOTINE = _kernels.KIND_NS


def _factorization_dense(kind: FactorizationKind, v6: np.ndarray, I6: np.ndarray) -> np.ndarray:
    B = cross_force_matrix(v6) @ I6
    if kind is FactorizationKind.NIEMEYER_SLOTINE:
        N = cross_force_swapped(ForceVector.from_array(I6 @ v6))
        B = 0.5 * (B + N - I6 @ cross_motion_matrix(v6))
    return B


def body_factorization(kind: FactorizationKind, v: MotionVector, I: SpatialInertia) -> RateMatrix:
    """Body-level rate matrix B(v, I) for the chosen factorization kind."""
    return _factorization_dense(kind, v.to_array(), I.matrix())


class DynamicsOutput:
    """Results and scratch space for the recursive Coriolis/mass pass.

    Owns every buffer the sweep touches, sized once per tree, so repeated
    evaluations allocate nothing and dispatch one compiled call.  ``M``,
    ``Mdot`` and ``C`` are the outputs; the per-body arrays (``v``, ``phi``,
    ``phidot``, ``IC``, ``BC``) are the final sweep state.  All views should
    be treated as read-only between calls: entries of unrelated body pairs
    are written once at allocation and never again.
    """

    def __init__(self, tree: KinematicTree):
        n = tree.n_bodies
        self.n = n
        self._mats = np.zeros((3 * n + 3, 6, 6))
        self._vecs = np.zeros((3 * n, 6))
        self._outs = np.zeros((3, n, n))
        self._parent = tree.parent
        self.M = self._outs[0]
        self.Mdot = self._outs[1]
        self.C = self._outs[2]
        self.X = self._mats[0:n]
        self.IC = self._mats[n:2 * n]
        self.BC = self._mats[2 * n:3 * n]
        self.phi = self._vecs[0:n]
        self.phidot = self._vecs[n:2 * n]
        self.v = self._vecs[2 * n:3 * n]


def _check_state(tree: KinematicTree, q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float).reshape(-1)
    if q.shape[0] != tree.n_bodies:
        raise ValueError(f"state has {q.shape[0]} coordinates, tree has {tree.n_bodies}")
    return q


def coriolis_matrix(
    tree: KinematicTree,
    state: GeneralizedState,
    kind: FactorizationKind = FactorizationKind.NIEMEYER_SLOTINE,
    out: Optional[DynamicsOutput] = None,
) -> DynamicsOutput:
    """Recursive evaluation of M, dM/dt, and the Coriolis matrix C.

    With the NIEMEYER_SLOTINE kind, C agrees with the contraction of the
    Christoffel symbols against qd; for both kinds dM/dt = C + C^T.
    """
    q = state.q
    qd = state.qd
    if q.shape[0] != tree.n_bodies:
        raise ValueError(f"state has {q.shape[0]} coordinates, tree has {tree.n_bodies}")
    if out is None:
        out = DynamicsOutput(tree)
    elif out.n != tree.n_bodies:
        raise ValueError("workspace was sized for a different tree")
    elif out._parent is not tree._parent and out._parent != tree._parent:
        out._outs[:] = 0.0
        out._parent = tree._parent
    ints, geom, inertia6 = tree._packed
    _kernels.coriolis_kernel(
        ints, geom, inertia6, q, qd, kind.value, out._mats, out._vecs, out._outs
    )
    return out


class ChristoffelTensor:
    """Dense table of Christoffel symbols of the first kind.

    ``gamma[i, j, k]`` (0-based) multiplies qd_j qd_k in the generalized
    force on coordinate i; it is symmetric in its last two indices.
    """

    def __init__(self, n: int):
        self.n = n
        self.gamma = np.zeros((n, n, n))
        self._buffers = None
        self._parent = None

    def contract(self, qd) -> np.ndarray:
        """Coriolis matrix implied by the symbols: C[i, j] = sum_k gamma[i,j,k] qd[k]."""
        qd = np.asarray(qd, dtype=float).reshape(self.n)
        return self.gamma @ qd

    def _kernel_buffers(self, n: int):
        if self._buffers is None:
            self._buffers = (np.zeros((2 * n + 5, 6, 6)), np.zeros((n + 1, 6)))
        return self._buffers


def christoffel_symbols(
    tree: KinematicTree,
    q,
    out: Optional[ChristoffelTensor] = None,
) -> ChristoffelTensor:
    """All Christoffel symbols of the first kind by the recursive sweep.

    The sweep writes only the entries supported by the connectivity; the
    rest of the tensor stays at its allocation value of zero (it is re-zeroed
    when a tensor is reused for a tree with different connectivity).
    """
    q = _check_state(tree, q)
    if out is None:
        out = ChristoffelTensor(tree.n_bodies)
    elif out.n != tree.n_bodies:
        raise ValueError("tensor was sized for a different tree")
    elif out._parent != tree.parent and out._parent is not None:
        out.gamma[:] = 0.0
    out._parent = tree.parent
    mats, vecs = out._kernel_buffers(tree.n_bodies)
    ints, geom, inertia6 = tree._packed
    _kernels.christoffel_kernel(ints, geom, inertia6, q, mats, vecs, out.gamma)
    return out


def mass_matrix_crba(tree: KinematicTree, q) -> np.ndarray:
    """Joint-space mass matrix by the composite-rigid-body recursion."""
    q = _check_state(tree, q)
    n = tree.n_bodies
    M = np.zeros((n, n))
    ints, geom, inertia6 = tree._packed
    _kernels.crba_kernel(
        ints, geom, inertia6, q, np.zeros((2 * n + 1, 6, 6)), np.zeros((n + 2, 6)), M
    )
    return M


def rnea(tree: KinematicTree, state: GeneralizedState, include_gravity: bool = True) -> np.ndarray:
    """Inverse dynamics: generalized forces for the state's motion.

    Gravity is folded in by giving the fixed base the opposite of the
    gravitational acceleration; pass include_gravity=False for the purely
    velocity/acceleration-dependent part.
    """
    q = _check_state(tree, state.q)
    qd = _check_state(tree, state.qd)
    qdd = np.zeros_like(q) if state.qdd is None else _check_state(tree, state.qdd)
    n = tree.n_bodies
    a_base = np.zeros(6)
    if include_gravity:
        a_base[3:] = -tree.gravity
    tau = np.zeros(n)
    ints, geom, inertia6 = tree._packed
    _kernels.rnea_kernel(
        ints, geom, inertia6, q, qd, qdd, a_base,
        np.zeros((n, 6, 6)), np.zeros((4 * n + 1, 6)), tau,
    )
    return tau


# ---------------------------------------------------------------------------
# Ground-frame reference routes

def _ground_frame(tree: KinematicTree, q: np.ndarray):
    """Per-body ground-frame subspace directions and spatial inertias."""
    n = tree.n_bodies
    to_body: list[PluckerTransform] = []  # ground -> body i
    phi0 = np.zeros((n, 6))
    I0 = np.zeros((n, 6, 6))
    for k in range(n):
        Xk, phik = joint_calc(tree.joints[k], q[k])
        pa = tree.parent[k]
        T = Xk if pa == 0 else Xk.compose(to_body[pa - 1])
        to_body.append(T)
        phi0[k] = T.inverse().matrix() @ phik.to_array()
        I0[k] = transform_inertia(T, tree.inertias[k]).matrix()
    return phi0, I0


def _ancestors(tree: KinematicTree, k: int) -> list[int]:
    """Bodies supporting body k (1-based), from k up to the root."""
    out = []
    i = k
    while i > 0:
        out.append(i)
        i = tree.parent_of(i)
    return out


def coriolis_global(
    tree: KinematicTree,
    state: GeneralizedState,
    kind: FactorizationKind = FactorizationKind.NIEMEYER_SLOTINE,
) -> tuple[np.ndarray, np.ndarray]:
    """Jacobian-based reference assembly of (M, C) in the ground frame.

    Accumulates sum_k J_k^T I_k J_k and sum_k J_k^T (B_k J_k + I_k Jdot_k)
    over bodies; O(N^3), independent of the recursive propagation.
    """
    q = _check_state(tree, state.q)
    qd = _check_state(tree, state.qd)
    n = tree.n_bodies
    phi0, I0 = _ground_frame(tree, q)

    v0 = np.zeros((n, 6))
    for k in range(n):
        pa = tree.parent[k]
        v0[k] = phi0[k] * qd[k]
        if pa > 0:
            v0[k] += v0[pa - 1]

    M = np.zeros((n, n))
    C = np.zeros((n, n))
    for k in range(n):
        anc = _ancestors(tree, k + 1)
        J = np.zeros((6, n))
        Jd = np.zeros((6, n))
        for i in anc:
            J[:, i - 1] = phi0[i - 1]
            Jd[:, i - 1] = cross_motion_matrix(v0[i - 1]) @ phi0[i - 1]
        Bk = _factorization_dense(kind, v0[k], I0[k])
        M += J.T @ I0[k] @ J
        C += J.T @ (Bk @ J + I0[k] @ Jd)
    return M, C


def christoffel_closed_form(tree: KinematicTree, q) -> ChristoffelTensor:
    """Christoffel symbols by direct per-triple evaluation in the ground frame.

    For mutually supported (i, j, k) the symbol is phi_i^T B(phi_k', IC) phi_j'
    with (j', k') depth-ordered and IC the composite inertia of the deepest
    body's subtree; all other entries vanish.
    """
    q = _check_state(tree, q)
    n = tree.n_bodies
    phi0, I0 = _ground_frame(tree, q)

    IC0 = I0.copy()
    for k in range(n - 1, -1, -1):
        pa = tree.parent[k]
        if pa > 0:
            IC0[pa - 1] += IC0[k]

    anc_sets = [set(_ancestors(tree, k)) for k in range(1, n + 1)]

    def comparable(a: int, b: int) -> bool:
        return a in anc_sets[b - 1] or b in anc_sets[a - 1]

    out = ChristoffelTensor(n)
    bcache: dict[tuple[int, int], np.ndarray] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if not comparable(i, j):
                continue
            for k in range(1, n + 1):
                if not (comparable(i, k) and comparable(j, k)):
                    continue
                deepest = max(i, j, k, key=tree.depth_of)
                jp, kp = (j, k) if tree.depth_of(j) <= tree.depth_of(k) else (k, j)
                key = (kp, deepest)
                B = bcache.get(key)
                if B is None:
                    B = _factorization_dense(
                        FactorizationKind.NIEMEYER_SLOTINE, phi0[kp - 1], IC0[deepest - 1]
                    )
                    bcache[key] = B
                out.gamma[i - 1, j - 1, k - 1] = phi0[i - 1] @ B @ phi0[jp - 1]
    return out


# ---------------------------------------------------------------------------
# Coordinate changes

@dataclass(frozen=True, eq=False)
class CoordinateChange:
    """Time-varying linear change of generalized velocity coordinates.

    ``A`` maps new velocities to old (qd = A qd_new) and ``Adot`` is its time
    derivative along the trajectory.
    """

    A: np.ndarray
    Adot: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        Ad = np.asarray(self.Adot, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("A must be square")
        if Ad.shape != A.shape:
            raise ValueError("Adot must have the same shape as A")
        if not np.isfinite(np.linalg.cond(A)) or np.linalg.cond(A) > 1e12:
            raise ValueError("A must be invertible")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "Adot", Ad)


def transform_coordinates(
    M: np.ndarray, C: np.ndarray, change: CoordinateChange
) -> tuple[np.ndarray, np.ndarray]:
    """Push (M, C) through a velocity-coordinate change.

    Returns (A^T M A, A^T C A + A^T M Adot); the extra mass-matrix term keeps
    the transformed C consistent with the Christoffel symbols of the
    transformed mass matrix.
    """
    A, Ad = change.A, change.Adot
    M = np.asarray(M, dtype=float)
    C = np.asarray(C, dtype=float)
    if M.shape != A.shape or C.shape != A.shape:
        raise ValueError("M and C must match the shape of A")
    return A.T @ M @ A, A.T @ C @ A + A.T @ M @ Ad


# ---------------------------------------------------------------------------
# Finite-difference references

def christoffel_from_mass_fn(
    mass_fn: Callable[[np.ndarray], np.ndarray], q, h: float = 1e-6
) -> np.ndarray:
    """Christoffel symbols of an arbitrary mass-matrix function, by central
    differences: gamma_ijk = (dM_ij/dq_k + dM_ik/dq_j - dM_jk/dq_i) / 2."""
    q = np.asarray(q, dtype=float).reshape(-1)
    n = q.shape[0]
    dM = np.empty((n, n, n))
    for k in range(n):
        qp = q.copy()
        qm = q.copy()
        qp[k] += h
        qm[k] -= h
        dM[k] = (mass_fn(qp) - mass_fn(qm)) / (2.0 * h)
    return 0.5 * (dM.transpose(1, 2, 0) + dM.transpose(1, 0, 2) - dM)


def fd_christoffel(tree: KinematicTree, q, h: float = 1e-6) -> ChristoffelTensor:
    """Christoffel symbols from central differences of the CRBA mass matrix."""
    q = _check_state(tree, q)
    out = ChristoffelTensor(tree.n_bodies)
    out.gamma[:] = christoffel_from_mass_fn(lambda qq: mass_matrix_crba(tree, qq), q, h)
    return out


def fd_mdot(tree: KinematicTree, state: GeneralizedState, h: float = 1e-6) -> np.ndarray:
    """dM/dt from central differences: contraction of dM/dq_k with qd_k."""
    q = _check_state(tree, state.q)
    qd = _check_state(tree, state.qd)
    n = tree.n_bodies
    out = np.zeros((n, n))
    for k in range(n):
        qp = q.copy()
        qm = q.copy()
        qp[k] += h
        qm[k] -= h
        out += qd[k] * (mass_matrix_crba(tree, qp) - mass_matrix_crba(tree, qm)) / (2.0 * h)
    return out


def dcoriolis_dqd_identity_check(
    tree: KinematicTree, state: GeneralizedState, h: float = 1e-6
) -> float:
    """Residual of the velocity-gradient identity d(C qd)/dqd = 2 C.

    Differentiates the velocity-product force (inverse dynamics with zero
    acceleration and no gravity) against qd and compares half the Jacobian
    with the Christoffel-consistent Coriolis matrix; returns the max
    absolute mismatch.
    """
    q = _check_state(tree, state.q)
    qd = _check_state(tree, state.qd)
    n = tree.n_bodies
    C = coriolis_matrix(tree, state).C.copy()
    J = np.empty((n, n))
    for m in range(n):
        qdp = qd.copy()
        qdm = qd.copy()
        qdp[m] += h
        qdm[m] -= h
        tp = rnea(tree, GeneralizedState(q, qdp), include_gravity=False)
        tm = rnea(tree, GeneralizedState(q, qdm), include_gravity=False)
        J[:, m] = (tp - tm) / (2.0 * h)
    return float(np.abs(0.5 * J - C).max())

"""Kinematic-tree models: joints, bodies, connectivity, and model files.

A tree with N moving bodies is numbered 1..N such that every parent has a
smaller number than its children; the fixed base is body 0.  Each moving
body i connects to its parent through a single-DoF joint (revolute or
prismatic), so the joint-space dimension equals N.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .spatial import (
    MotionVector,
    PluckerTransform,
    SpatialInertia,
    rotation_about,
    skew,
)

FORMAT_VERSION = 1

JOINT_KINDS = ("revolute", "prismatic")


class ModelError(Exception):
    """Raised for malformed or inconsistent model files."""


@dataclass(frozen=True, eq=False)
class Joint:
    """Single-DoF joint: kind, unit axis in the child frame, and the fixed
    transform from the parent body frame to the joint frame."""

    kind: str
    axis: np.ndarray
    tree_transform: PluckerTransform

    def __post_init__(self):
        if self.kind not in JOINT_KINDS:
            raise ValueError(f"unknown joint kind {self.kind!r}")
        a = np.asarray(self.axis, dtype=float).reshape(-1)
        if a.shape != (3,):
            raise ValueError("joint axis must be a 3-vector")
        if abs(np.linalg.norm(a) - 1.0) > 1e-9:
            raise ValueError(f"joint axis must have unit norm, got |a| = {np.linalg.norm(a)!r}")
        object.__setattr__(self, "axis", a)

    def motion_subspace(self) -> MotionVector:
        """Joint motion direction: rotation about or translation along the axis."""
        zero = np.zeros(3)
        if self.kind == "revolute":
            return MotionVector(self.axis, zero)
        return MotionVector(zero, self.axis)


def joint_calc(joint: Joint, qi: float) -> tuple[PluckerTransform, MotionVector]:
    """Joint kinematics: the parent-to-child transform at position qi and the
    motion-subspace direction, both expressed in the child frame."""
    if joint.kind == "revolute":
        Xj = PluckerTransform(rotation_about(joint.axis, qi).T, np.zeros(3))
    else:
        Xj = PluckerTransform(np.eye(3), qi * joint.axis)
    return Xj.compose(joint.tree_transform), joint.motion_subspace()


class KinematicTree:
    """Immutable kinematic tree with one joint per moving body.

    ``parent[i-1]`` is the parent body id of body i (0 denotes the fixed
    base) and must be smaller than i.
    """

    def __init__(
        self,
        joints: Sequence[Joint],
        inertias: Sequence[SpatialInertia],
        parent: Sequence[int],
        gravity=(0.0, 0.0, -9.81),
    ):
        n = len(joints)
        if n == 0:
            raise ValueError("a tree needs at least one moving body")
        if len(inertias) != n or len(parent) != n:
            raise ValueError("joints, inertias and parent must have equal length")
        par = tuple(int(p) for p in parent)
        for i, p in enumerate(par, start=1):
            if not 0 <= p < i:
                raise ValueError(f"body {i}: parent must lie in [0, {i - 1}], got {p}")
        self._joints = tuple(joints)
        self._inertias = tuple(inertias)
        self._parent = par
        g = np.asarray(gravity, dtype=float).reshape(3)
        g.setflags(write=False)
        self._gravity = g

        depth = [0] * (n + 1)
        for i in range(1, n + 1):
            depth[i] = depth[par[i - 1]] + 1
        self._depth = tuple(depth[1:])

        # Packed, kernel-friendly views of the model.  ints holds the 0-based
        # parent (-1 for the base) and joint type; geom rows pack
        # [axis, translation, row-major rotation] of each joint.
        ints = np.empty((n, 2), dtype=np.int64)
        geom = np.empty((n, 15))
        for k, j in enumerate(self._joints):
            ints[k, 0] = par[k] - 1
            ints[k, 1] = 0 if j.kind == "revolute" else 1
            geom[k, 0:3] = j.axis
            geom[k, 3:6] = j.tree_transform.trans
            geom[k, 6:15] = j.tree_transform.rot.reshape(9)
        self._inertia6 = np.array([I.matrix() for I in self._inertias])
        for a in (ints, geom, self._inertia6):
            a.setflags(write=False)
        self._ints = ints
        self._geom = geom
        self._packed = (ints, geom, self._inertia6)

    @property
    def n_bodies(self) -> int:
        return len(self._joints)

    @property
    def dof(self) -> int:
        return len(self._joints)

    @property
    def parent(self) -> tuple[int, ...]:
        return self._parent

    @property
    def joints(self) -> tuple[Joint, ...]:
        return self._joints

    @property
    def inertias(self) -> tuple[SpatialInertia, ...]:
        return self._inertias

    @property
    def gravity(self) -> np.ndarray:
        return self._gravity

    @property
    def depth(self) -> int:
        """Number of bodies on the longest root-to-leaf path."""
        return max(self._depth)

    def parent_of(self, i: int) -> int:
        return self._parent[i - 1]

    def depth_of(self, i: int) -> int:
        return self._depth[i - 1]

    def with_gravity(self, gravity) -> "KinematicTree":
        return KinematicTree(self._joints, self._inertias, self._parent, gravity)


@dataclass(frozen=True, eq=False)
class GeneralizedState:
    """Joint positions and velocities (accelerations optional)."""

    q: np.ndarray
    qd: np.ndarray
    qdd: Optional[np.ndarray] = None

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float).reshape(-1)
        qd = np.asarray(self.qd, dtype=float).reshape(-1)
        if q.shape != qd.shape:
            raise ValueError("q and qd must have the same length")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "qd", qd)
        if self.qdd is not None:
            qdd = np.asarray(self.qdd, dtype=float).reshape(-1)
            if qdd.shape != q.shape:
                raise ValueError("qdd must have the same length as q")
            object.__setattr__(self, "qdd", qdd)


# ---------------------------------------------------------------------------
# Connectivity

def is_ancestor(tree: KinematicTree, j: int, i: int) -> bool:
    """True when body j supports body i (j == i or j lies on i's path to the base)."""
    _check_body(tree, j)
    _check_body(tree, i)
    while i > j:
        i = tree.parent_of(i)
    return i == j


def related(tree: KinematicTree, i: int, j: int) -> bool:
    """True when one of the two bodies supports the other."""
    return is_ancestor(tree, i, j) or is_ancestor(tree, j, i)


def ceil_pair(tree: KinematicTree, i: int, j: int) -> int:
    """The deeper body of a related pair (the one supported by the other)."""
    if is_ancestor(tree, i, j):
        return j
    if is_ancestor(tree, j, i):
        return i
    raise ValueError(f"bodies {i} and {j} are unrelated")


def _check_body(tree: KinematicTree, i: int) -> None:
    if not 1 <= i <= tree.n_bodies:
        raise ValueError(f"body index {i} out of range 1..{tree.n_bodies}")


# ---------------------------------------------------------------------------
# Model files (versioned JSON)

def save_model(tree: KinematicTree) -> str:
    """Serialize a tree to the versioned JSON model format."""
    bodies = []
    for k in range(tree.n_bodies):
        j = tree.joints[k]
        I = tree.inertias[k]
        bodies.append({
            "parent": tree.parent[k],
            "joint": {
                "kind": j.kind,
                "axis": j.axis.tolist(),
                "rotation": j.tree_transform.rot.tolist(),
                "translation": j.tree_transform.trans.tolist(),
            },
            "inertia": {
                "mass": I.mass,
                "com_moment": I.com_moment.tolist(),
                "rot_inertia": I.rot_inertia.tolist(),
            },
        })
    doc = {
        "format_version": FORMAT_VERSION,
        "gravity": tree.gravity.tolist(),
        "bodies": bodies,
    }
    return json.dumps(doc, indent=2) + "\n"


def load_model(text: str) -> KinematicTree:
    """Parse the JSON model format; raises ModelError with location info."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None

    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelError(f"unsupported format_version {version!r} (expected {FORMAT_VERSION})")
    bodies = doc.get("bodies")
    if not isinstance(bodies, list) or not bodies:
        raise ModelError("model must contain a non-empty 'bodies' list")
    gravity = doc.get("gravity", (0.0, 0.0, -9.81))

    joints, inertias, parent = [], [], []
    for k, body in enumerate(bodies):
        where = f"body {k + 1}{_line_hint(text, k)}"
        try:
            parent.append(int(body["parent"]))
            jd = body["joint"]
            joints.append(Joint(
                kind=jd["kind"],
                axis=jd["axis"],
                tree_transform=PluckerTransform(jd["rotation"], jd["translation"]),
            ))
            idata = body["inertia"]
            inertias.append(SpatialInertia(
                mass=idata["mass"],
                com_moment=idata["com_moment"],
                rot_inertia=idata["rot_inertia"],
            ))
        except KeyError as exc:
            raise ModelError(f"{where}: missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise ModelError(f"{where}: {exc}") from None
    try:
        return KinematicTree(joints, inertias, parent, gravity)
    except ValueError as exc:
        raise ModelError(str(exc)) from None


def _line_hint(text: str, body_index: int) -> str:
    """Best-effort line number of the body_index-th element of 'bodies'."""
    pos = -1
    for _ in range(body_index + 1):
        pos = text.find('"parent"', pos + 1)
        if pos < 0:
            return ""
    return f" (line {text.count(chr(10), 0, pos) + 1})"


def read_model(path) -> KinematicTree:
    with open(path, "r", encoding="utf-8") as fh:
        return load_model(fh.read())


def write_model(tree: KinematicTree, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(save_model(tree))


# ---------------------------------------------------------------------------
# Topology generators (deterministic for a given seed)

_MASS_RANGE = (0.5, 2.0)
_LENGTH_RANGE = (0.2, 1.0)
_INERTIA_EIG_RANGE = (0.01, 0.1)


def _random_unit(rng) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _random_rotation(rng) -> np.ndarray:
    return rotation_about(_random_unit(rng), rng.uniform(0.0, 2.0 * np.pi))


def _random_inertia(rng) -> SpatialInertia:
    mass = rng.uniform(*_MASS_RANGE)
    com = rng.uniform(0.1, 0.5) * _random_unit(rng)
    Q = _random_rotation(rng)
    eigs = rng.uniform(*_INERTIA_EIG_RANGE, size=3)
    return SpatialInertia.from_com(mass, com, Q @ np.diag(eigs) @ Q.T)


def _random_joint(rng, zero_length: bool = False) -> Joint:
    if zero_length:
        X = PluckerTransform.identity()
    else:
        trans = rng.uniform(*_LENGTH_RANGE) * _random_unit(rng)
        X = PluckerTransform(_random_rotation(rng), trans)
    return Joint("revolute", _random_unit(rng), X)


def _assemble(parent: list[int], rng, zero_length_roots=()) -> KinematicTree:
    joints = [
        _random_joint(rng, zero_length=(k + 1) in zero_length_roots)
        for k in range(len(parent))
    ]
    inertias = [_random_inertia(rng) for _ in parent]
    return KinematicTree(joints, inertias, parent)


def gen_serial(n: int, seed: int = 0) -> KinematicTree:
    """Unbranched chain of n revolute bodies (depth n)."""
    if n < 1:
        raise ValueError("n must be positive")
    return _assemble(list(range(n)), np.random.default_rng(seed))


def gen_binary_tree(n: int, seed: int = 0) -> KinematicTree:
    """Balanced binary tree of n bodies in heap order: parent(i) = floor(i/2)."""
    if n < 1:
        raise ValueError("n must be positive")
    return _assemble([i // 2 for i in range(1, n + 1)], np.random.default_rng(seed))


def gen_biped(n_act: int, seed: int = 0) -> KinematicTree:
    """Main body on a 0-length revolute plus two serial legs of n_act/2 bodies."""
    return _legged(n_act, 2, seed)


def gen_quadruped(n_act: int, seed: int = 0) -> KinematicTree:
    """Main body on a 0-length revolute plus four serial legs of n_act/4 bodies."""
    return _legged(n_act, 4, seed)


def _legged(n_act: int, legs: int, seed: int) -> KinematicTree:
    if n_act < legs or n_act % legs != 0:
        raise ValueError(f"actuated DoF count must be a positive multiple of {legs}")
    per_leg = n_act // legs
    parent = [0]
    for _ in range(legs):
        attach = 1
        for _ in range(per_leg):
            parent.append(attach)
            attach = len(parent)
    return _assemble(parent, np.random.default_rng(seed), zero_length_roots=(1,))


_GENERATORS = {
    "serial": gen_serial,
    "binary": gen_binary_tree,
    "binary_tree": gen_binary_tree,
    "biped": gen_biped,
    "quadruped": gen_quadruped,
}


def gen_topology(name: str, dof: int, seed: int = 0) -> KinematicTree:
    """Dispatch to a named generator: serial, binary, biped, or quadruped."""
    try:
        gen = _GENERATORS[name]
    except KeyError:
        raise ValueError(
            f"unknown topology {name!r}; choose from {sorted(_GENERATORS)}"
        ) from None
    return gen(dof, seed)


def random_state(tree: KinematicTree, seed: int = 0) -> GeneralizedState:
    """Random joint state: angles in [0, 2pi) (revolute) or [0, 1) (prismatic),
    rates in [0, 10)."""
    rng = np.random.default_rng(seed)
    q = np.empty(tree.n_bodies)
    for k, joint in enumerate(tree.joints):
        high = 2.0 * np.pi if joint.kind == "revolute" else 1.0
        q[k] = rng.uniform(0.0, high)
    qd = rng.uniform(0.0, 10.0, size=tree.n_bodies)
    return GeneralizedState(q, qd)

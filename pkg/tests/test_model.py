"""Tree construction, connectivity predicates, generators, and model files."""

import json
from pathlib import Path

import numpy as np
import pytest

from dynkit import (
    GeneralizedState,
    Joint,
    KinematicTree,
    ModelError,
    MotionVector,
    PluckerTransform,
    SpatialInertia,
    ceil_pair,
    gen_binary_tree,
    gen_biped,
    gen_quadruped,
    gen_serial,
    gen_topology,
    is_ancestor,
    joint_calc,
    load_model,
    random_state,
    read_model,
    related,
    rotation_about,
    save_model,
    transform_motion,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def _unit_inertia():
    return SpatialInertia.from_com(1.0, (0.1, 0, 0), 0.01 * np.eye(3))


def _joint(kind="revolute", axis=(0, 0, 1), trans=(0, 0, 0)):
    return Joint(kind, axis, PluckerTransform(np.eye(3), trans))


# ---------------------------------------------------------------------------
# Joints

def test_joint_rejects_bad_input():
    with pytest.raises(ValueError):
        Joint("helical", (0, 0, 1), PluckerTransform.identity())
    with pytest.raises(ValueError):
        Joint("revolute", (0, 0, 2), PluckerTransform.identity())


def test_joint_calc_revolute_rotates_child_frame():
    X, phi = joint_calc(_joint(), 0.5)
    assert np.all(phi.to_array() == (0, 0, 1, 0, 0, 0))
    # rotating the child by q means child coordinates = R(q)^T parent coords
    assert np.allclose(X.rot, rotation_about(np.array([0.0, 0, 1]), 0.5).T)


def test_joint_calc_prismatic_translates_along_axis():
    X, phi = joint_calc(_joint("prismatic", (1, 0, 0)), 0.25)
    assert np.all(phi.to_array() == (0, 0, 0, 1, 0, 0))
    assert np.allclose(X.trans, (0.25, 0, 0))
    assert np.allclose(X.rot, np.eye(3))
    # a rotation about the parent origin gains lever-arm velocity in the
    # displaced frame
    v = transform_motion(X, MotionVector((0, 0, 1), (0, 0, 0)))
    assert np.allclose(v.lin, (0, 0.25, 0))


def test_joint_calc_composes_tree_transform():
    j = Joint("revolute", (0, 0, 1), PluckerTransform(np.eye(3), (0.7, 0, 0)))
    X, _ = joint_calc(j, 0.0)
    assert np.allclose(X.trans, (0.7, 0, 0))


# ---------------------------------------------------------------------------
# Trees

def test_tree_rejects_malformed_parents():
    J, I = _joint(), _unit_inertia()
    with pytest.raises(ValueError):
        KinematicTree([J, J], [I, I], [0, 2])  # forward reference
    with pytest.raises(ValueError):
        KinematicTree([J], [I], [1])
    with pytest.raises(ValueError):
        KinematicTree([], [], [])
    with pytest.raises(ValueError):
        KinematicTree([J, J], [I], [0, 1])


def test_tree_depth_bookkeeping():
    tree = KinematicTree([_joint()] * 4, [_unit_inertia()] * 4, [0, 1, 1, 3])
    assert tree.depth == 3
    assert [tree.depth_of(i) for i in (1, 2, 3, 4)] == [1, 2, 2, 3]
    assert tree.parent_of(4) == 3


def test_packed_views_are_read_only():
    tree = gen_serial(3, seed=1)
    ints, geom, inertia6 = tree._packed
    for arr in (ints, geom, inertia6):
        with pytest.raises(ValueError):
            arr[0] = 0


def test_connectivity_predicates():
    # 1 carries 2 and 3; 3 carries the leaves 4 and 5
    tree = KinematicTree([_joint()] * 5, [_unit_inertia()] * 5, [0, 1, 1, 3, 3])
    assert is_ancestor(tree, 1, 4)
    assert is_ancestor(tree, 3, 3)
    assert not is_ancestor(tree, 2, 4)
    assert related(tree, 1, 5) and related(tree, 5, 1)
    assert not related(tree, 2, 3) and not related(tree, 4, 5)
    assert all(ceil_pair(tree, i, j) == max(i, j)
               for i in (1, 3) for j in (4, 5))
    with pytest.raises(ValueError):
        is_ancestor(tree, 0, 1)


def test_generalized_state_validation():
    st = GeneralizedState([0.1, 0.2], (0.3, 0.4))
    assert st.q.dtype == float and st.qd.shape == (2,)
    assert st.qdd is None
    with pytest.raises(ValueError):
        GeneralizedState([0.1], [0.1, 0.2])
    with pytest.raises(ValueError):
        GeneralizedState([0.1], [0.2], [0.3, 0.4])


# ---------------------------------------------------------------------------
# Generators

def test_generator_shapes():
    assert gen_serial(5).parent == (0, 1, 2, 3, 4)
    assert gen_binary_tree(7).parent == (0, 1, 1, 2, 2, 3, 3)
    assert gen_binary_tree(7).depth == 3
    biped = gen_biped(6)
    quad = gen_quadruped(8)
    assert biped.n_bodies == 7 and quad.n_bodies == 9
    assert biped.depth == 4 and quad.depth == 3  # torso + legs
    # legs attach at the torso (body 1)
    assert biped.parent.count(1) == 2 and quad.parent.count(1) == 4


def test_generator_constraints():
    with pytest.raises(ValueError):
        gen_serial(0)
    with pytest.raises(ValueError):
        gen_biped(5)
    with pytest.raises(ValueError):
        gen_quadruped(6)
    with pytest.raises(ValueError):
        gen_topology("moebius", 4)


def test_gen_topology_accepts_both_binary_spellings():
    a = gen_topology("binary", 6, seed=4)
    b = gen_topology("binary_tree", 6, seed=4)
    assert save_model(a) == save_model(b)


def test_generators_are_deterministic():
    assert save_model(gen_serial(6, seed=9)) == save_model(gen_serial(6, seed=9))
    assert save_model(gen_serial(6, seed=9)) != save_model(gen_serial(6, seed=10))


def test_random_state_ranges_and_determinism():
    tree = gen_serial(8, seed=0)
    st = random_state(tree, seed=3)
    again = random_state(tree, seed=3)
    assert np.all(st.q == again.q) and np.all(st.qd == again.qd)
    assert np.all((st.q >= 0) & (st.q < 2 * np.pi))
    assert np.all((st.qd >= 0) & (st.qd < 10))


# ---------------------------------------------------------------------------
# Model files

def test_save_load_round_trip():
    tree = gen_quadruped(8, seed=5)
    back = load_model(save_model(tree))
    assert back.parent == tree.parent
    assert np.allclose(back.gravity, tree.gravity)
    for a, b in zip(back.joints, tree.joints):
        assert a.kind == b.kind
        assert np.all(a.axis == b.axis)
        assert np.all(a.tree_transform.rot == b.tree_transform.rot)
    for a, b in zip(back.inertias, tree.inertias):
        assert a.mass == b.mass
        assert np.all(a.rot_inertia == b.rot_inertia)


def test_serialization_is_byte_stable():
    text = save_model(gen_binary_tree(6, seed=2))
    assert save_model(load_model(text)) == text


@pytest.mark.parametrize("name", ["twolink.model", "pendulum.model",
                                  "quadruped12.model"])
def test_golden_fixtures_round_trip(name):
    text = (FIXTURES / name).read_text()
    assert save_model(load_model(text)) == text


def test_golden_twolink_contents():
    tree = read_model(FIXTURES / "twolink.model")
    assert tree.parent == (0, 1)
    assert [j.kind for j in tree.joints] == ["revolute", "revolute"]
    assert [I.mass for I in tree.inertias] == [1.3, 0.9]
    assert np.allclose(tree.gravity, (0, -9.81, 0))


def test_load_rejects_bad_documents():
    with pytest.raises(ModelError, match="line 1"):
        load_model("{not json")
    with pytest.raises(ModelError, match="format_version"):
        load_model(json.dumps({"format_version": 99, "bodies": [{}]}))
    with pytest.raises(ModelError, match="bodies"):
        load_model(json.dumps({"format_version": 1, "bodies": []}))


def test_load_reports_offending_body_and_line():
    text = save_model(gen_serial(3, seed=1))
    doc = json.loads(text)
    del doc["bodies"][1]["inertia"]["mass"]
    broken = json.dumps(doc, indent=2)
    with pytest.raises(ModelError, match=r"body 2 \(line \d+\): missing field 'mass'"):
        load_model(broken)


def test_load_reports_invalid_values_in_place():
    text = save_model(gen_serial(2, seed=1))
    doc = json.loads(text)
    doc["bodies"][0]["inertia"]["mass"] = -2.0
    with pytest.raises(ModelError, match="body 1"):
        load_model(json.dumps(doc))


def test_write_and_read_file(tmp_path):
    from dynkit import write_model
    tree = gen_serial(3, seed=8)
    path = tmp_path / "chain.model"
    write_model(tree, path)
    assert read_model(path).parent == tree.parent

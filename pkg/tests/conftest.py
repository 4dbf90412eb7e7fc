"""Shared fixtures: analytic models, a fixed branched tree, kernel warm-up."""

import numpy as np
import pytest

from dynkit import (
    BenchSpec,
    Joint,
    KinematicTree,
    PluckerTransform,
    SpatialInertia,
    rotation_about,
    run_bench,
)

# Planar two-link arm used by the analytic-value tests.  Link frames sit at
# the joints with x along the link, so the classic textbook formulas apply.
TWOLINK = dict(m1=1.3, m2=0.9, l1=0.7, lc1=0.35, lc2=0.3, Iz1=0.02, Iz2=0.015)


def make_twolink() -> KinematicTree:
    p = TWOLINK
    eye = np.eye(3)
    j1 = Joint("revolute", (0, 0, 1), PluckerTransform(eye, np.zeros(3)))
    j2 = Joint("revolute", (0, 0, 1), PluckerTransform(eye, (p["l1"], 0.0, 0.0)))
    I1 = SpatialInertia.from_com(p["m1"], (p["lc1"], 0, 0),
                                 np.diag((0.008, 0.012, p["Iz1"])))
    I2 = SpatialInertia.from_com(p["m2"], (p["lc2"], 0, 0),
                                 np.diag((0.006, 0.009, p["Iz2"])))
    return KinematicTree([j1, j2], [I1, I2], [0, 1], (0.0, -9.81, 0.0))


def twolink_mass(q2: float) -> np.ndarray:
    """Textbook closed-form mass matrix of the planar two-link arm."""
    p = TWOLINK
    a = p["m1"] * p["lc1"] ** 2 + p["Iz1"] + p["m2"] * (
        p["l1"] ** 2 + p["lc2"] ** 2) + p["Iz2"]
    b = p["m2"] * p["l1"] * p["lc2"]
    c = p["m2"] * p["lc2"] ** 2 + p["Iz2"]
    return np.array([
        [a + 2 * b * np.cos(q2), c + b * np.cos(q2)],
        [c + b * np.cos(q2), c],
    ])


def twolink_h(q2: float) -> float:
    """The single independent Christoffel value -m2*l1*lc2*sin(q2)."""
    p = TWOLINK
    return -p["m2"] * p["l1"] * p["lc2"] * np.sin(q2)


@pytest.fixture
def twolink() -> KinematicTree:
    return make_twolink()


@pytest.fixture
def pendulum() -> KinematicTree:
    j = Joint("revolute", (0, 0, 1), PluckerTransform(np.eye(3), np.zeros(3)))
    I = SpatialInertia.from_com(1.0, (0.5, 0, 0), np.diag((0.0, 1 / 12, 1 / 12)))
    return KinematicTree([j], [I], [0], (0.0, -9.81, 0.0))


# Branched ten-body layout: two arms hanging off a short trunk, one arm
# carrying a further split, giving a rich mix of related/unrelated pairs.
TEN_BODY_PARENT = (0, 1, 2, 3, 4, 2, 6, 7, 8, 5)


def make_ten_body(seed: int = 11) -> KinematicTree:
    rng = np.random.default_rng(seed)

    def unit():
        v = rng.normal(size=3)
        return v / np.linalg.norm(v)

    joints, inertias = [], []
    for _ in TEN_BODY_PARENT:
        R = rotation_about(unit(), rng.uniform(0.0, 2 * np.pi))
        X = PluckerTransform(R, rng.uniform(0.2, 0.6) * unit())
        joints.append(Joint("revolute", unit(), X))
        inertias.append(SpatialInertia.from_com(
            rng.uniform(0.5, 2.0), rng.uniform(0.1, 0.4) * unit(),
            np.diag(rng.uniform(0.01, 0.05, size=3))))
    return KinematicTree(joints, inertias, TEN_BODY_PARENT)


@pytest.fixture
def ten_body() -> KinematicTree:
    return make_ten_body()


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    """Compile every jitted kernel once so timed tests measure the algorithms."""
    spec = BenchSpec(topology="serial", sizes=(2, 3), trials=2,
                     algorithms=("coriolis", "christoffel", "crba", "rnea"))
    run_bench(spec, repeats=1, echo=lambda _line: None)


# Acceptance-criteria reporting: each criterion test files one line here and
# the terminal summary replays them so a full run ends with one pass/fail
# line per criterion.
CRITERION_LINES: list[str] = []


def report_criterion(line: str) -> None:
    CRITERION_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)

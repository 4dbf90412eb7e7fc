"""Recursive rigid-body dynamics for kinematic trees.

Computes the joint-space mass matrix, its time derivative, a
Christoffel-consistent Coriolis matrix, and all Christoffel symbols of the
first kind with low-order recursive sweeps, alongside independent reference
routes (inverse dynamics, composite rigid bodies, ground-frame assembly,
finite differences) used to cross-check every quantity.
"""

from .spatial import (
    ForceVector,
    MotionVector,
    PluckerTransform,
    RateMatrix,
    SpatialInertia,
    apply_inertia,
    congruence,
    cross_force,
    cross_force_matrix,
    cross_force_swapped,
    cross_motion,
    cross_motion_matrix,
    dot,
    rotation_about,
    skew,
    transform_force,
    transform_inertia,
    transform_motion,
)
from .model import (
    GeneralizedState,
    Joint,
    KinematicTree,
    ModelError,
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
    save_model,
    write_model,
)
from .dynamics import (
    ChristoffelTensor,
    CoordinateChange,
    DynamicsOutput,
    FactorizationKind,
    body_factorization,
    christoffel_closed_form,
    christoffel_from_mass_fn,
    christoffel_symbols,
    coriolis_global,
    coriolis_matrix,
    dcoriolis_dqd_identity_check,
    fd_christoffel,
    fd_mdot,
    mass_matrix_crba,
    rnea,
    transform_coordinates,
)
from .harness import (
    BenchResult,
    BenchRow,
    BenchSpec,
    CompareReport,
    SeriesFit,
    VerifyReport,
    bench_csv,
    compare_topologies,
    fit_loglog,
    plot_data,
    run_bench,
    run_verify,
)

__version__ = "0.1.0"

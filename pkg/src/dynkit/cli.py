"""Command-line front end: `dynkit <subcommand> [flags]`.

Subcommands: coriolis, christoffel, mass, rnea, verify, bench, compare, gen.
Models come from a file (--model PATH) or a named generator
(--topology NAME --dof N [--seed S]).  States come from --q/--qd/--qdd CSV
lists; components left unset are drawn from the seeded sampler so output is
deterministic for a fixed --seed.  Exit codes: 0 success, 1 verification
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import numpy as np

from .dynamics import (
    FactorizationKind,
    coriolis_matrix,
    christoffel_symbols,
    mass_matrix_crba,
    rnea,
)
from .harness import (
    ALGORITHMS,
    BenchSpec,
    bench_csv,
    compare_topologies,
    plot_data,
    run_bench,
    run_verify,
)
from .model import (
    GeneralizedState,
    KinematicTree,
    ModelError,
    gen_topology,
    random_state,
    read_model,
    write_model,
)

_TOPO_CHOICES = ("serial", "binary", "binary_tree", "biped", "quadruped")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Output formatting

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def format_array(a: np.ndarray, fmt: str) -> str:
    """Render a vector, matrix, or order-3 tensor in row-major order.

    Text and CSV print 17 significant digits; tensors appear as consecutive
    blocks of rows (text separates the blocks with blank lines).
    """
    if fmt == "json":
        return json.dumps(a.tolist())
    sep = "," if fmt == "csv" else " "
    if a.ndim == 1:
        return sep.join(_fmt(x) for x in a)
    if a.ndim == 2:
        return "\n".join(sep.join(_fmt(x) for x in row) for row in a)
    blocks = [format_array(block, fmt) for block in a]
    joiner = "\n" if fmt == "csv" else "\n\n"
    return joiner.join(blocks)


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path is None:
        print(text)
    else:
        with open(out_path, "w") as f:
            f.write(text + "\n")


# ---------------------------------------------------------------------------
# Shared argument handling

def _parse_csv_floats(text: str, name: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise UsageError(f"--{name} expects a comma-separated list of numbers")


def _load_tree(args) -> KinematicTree:
    if args.model is not None and args.topology is not None:
        raise UsageError("give either --model or --topology, not both")
    if args.model is not None:
        return read_model(args.model)
    if args.topology is not None:
        if args.dof is None:
            raise UsageError("--topology needs --dof")
        return gen_topology(args.topology, args.dof, args.seed)
    raise UsageError("a model is required: --model PATH or --topology NAME --dof N")


def _load_state(args, tree: KinematicTree, want_qdd: bool = False) -> GeneralizedState:
    sampled = random_state(tree, args.seed)
    q = sampled.q if args.q is None else _parse_csv_floats(args.q, "q")
    qd = sampled.qd if args.qd is None else _parse_csv_floats(args.qd, "qd")
    qdd = None
    if want_qdd:
        qdd = (np.zeros(tree.n_bodies) if args.qdd is None
               else _parse_csv_floats(args.qdd, "qdd"))
    n = tree.n_bodies
    for name, v in (("q", q), ("qd", qd), ("qdd", qdd)):
        if v is not None and v.shape != (n,):
            raise UsageError(f"--{name} must list {n} values for this model")
    return GeneralizedState(q, qd, qdd)


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", metavar="PATH", help="model file to load")
    p.add_argument("--topology", choices=_TOPO_CHOICES,
                   help="generate a model instead of loading one")
    p.add_argument("--dof", type=int, help="size of the generated model")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for generation and state sampling (default 0)")


def _add_state_flags(p: argparse.ArgumentParser, qdd: bool = False) -> None:
    p.add_argument("--q", metavar="CSV", help="joint positions")
    p.add_argument("--qd", metavar="CSV", help="joint velocities")
    if qdd:
        p.add_argument("--qdd", metavar="CSV", help="joint accelerations (default 0)")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")


# ---------------------------------------------------------------------------
# Subcommands

def _cmd_coriolis(args) -> int:
    tree = _load_tree(args)
    state = _load_state(args, tree)
    kind = (FactorizationKind.SIMPLE if args.kind == "simple"
            else FactorizationKind.NIEMEYER_SLOTINE)
    out = coriolis_matrix(tree, state, kind=kind)
    part = {"c": out.C, "m": out.M, "mdot": out.Mdot}[args.part]
    _emit(format_array(part, args.format), args.out)
    return 0


def _cmd_christoffel(args) -> int:
    tree = _load_tree(args)
    state = _load_state(args, tree)
    gam = christoffel_symbols(tree, state.q)
    _emit(format_array(gam.gamma, args.format), args.out)
    return 0


def _cmd_mass(args) -> int:
    tree = _load_tree(args)
    state = _load_state(args, tree)
    _emit(format_array(mass_matrix_crba(tree, state.q), args.format), args.out)
    return 0


def _cmd_rnea(args) -> int:
    tree = _load_tree(args)
    state = _load_state(args, tree, want_qdd=True)
    tau = rnea(tree, state, include_gravity=not args.no_gravity)
    _emit(format_array(tau, args.format), args.out)
    return 0


def _cmd_verify(args) -> int:
    if args.model is not None:
        raise UsageError("verify runs on generated models; use --topology/--dof")
    if args.topology is None or args.dof is None:
        raise UsageError("verify needs --topology NAME --dof N")
    spec = BenchSpec(topology=args.topology, sizes=(args.dof,),
                     trials=args.trials, seed=args.seed)
    report = run_verify(spec)
    return 0 if report.passed else 1


def _cmd_bench(args) -> int:
    sizes = tuple(int(x) for x in args.sizes.split(","))
    algorithms = tuple(args.algorithms.split(","))
    spec = BenchSpec(topology=args.topology or "serial", sizes=sizes,
                     trials=args.trials, seed=args.seed, algorithms=algorithms)
    if args.out is not None:
        run_bench(spec, csv_path=args.out, plot_path=args.out + ".plot")
    else:
        result = run_bench(spec)
        sys.stdout.write(bench_csv(result))
        sys.stdout.write(plot_data(result))
    return 0


def _cmd_compare(args) -> int:
    report = compare_topologies(dof=args.dof or 20, trials=args.trials,
                                seed=args.seed)
    return 0 if report.passed else 1


def _cmd_gen(args) -> int:
    if args.topology is None or args.dof is None:
        raise UsageError("gen needs --topology NAME --dof N")
    tree = gen_topology(args.topology, args.dof, args.seed)
    if args.out is None:
        from .model import save_model
        print(save_model(tree), end="")
    else:
        write_model(tree, args.out)
    return 0


# ---------------------------------------------------------------------------
# Parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynkit",
        description="Mass matrix, Coriolis matrix, and Christoffel symbols "
                    "for kinematic trees; verification and benchmark runners.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coriolis", help="print the Coriolis matrix (or M, Mdot)")
    _add_model_flags(p)
    _add_state_flags(p)
    _add_output_flags(p)
    p.add_argument("--kind", choices=("ns", "simple"), default="ns",
                   help="factorization kind (default ns, Christoffel-consistent)")
    p.add_argument("--part", choices=("c", "m", "mdot"), default="c",
                   help="which matrix to print (default c)")
    p.set_defaults(func=_cmd_coriolis)

    p = sub.add_parser("christoffel", help="print all Christoffel symbols")
    _add_model_flags(p)
    _add_state_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_christoffel)

    p = sub.add_parser("mass", help="print the mass matrix (composite rigid bodies)")
    _add_model_flags(p)
    _add_state_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_mass)

    p = sub.add_parser("rnea", help="print inverse-dynamics torques")
    _add_model_flags(p)
    _add_state_flags(p, qdd=True)
    _add_output_flags(p)
    p.add_argument("--no-gravity", action="store_true",
                   help="drop the gravitational contribution")
    p.set_defaults(func=_cmd_rnea)

    p = sub.add_parser("verify", help="run the dynamics invariant suite")
    _add_model_flags(p)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="time the algorithms and fit scaling exponents")
    _add_model_flags(p)
    p.add_argument("--sizes", default="8,16,32,64", metavar="CSV",
                   help="dof ladder (default 8,16,32,64)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--algorithms", default="coriolis,christoffel", metavar="CSV",
                   help=f"subset of {','.join(ALGORITHMS)}")
    p.add_argument("--out", metavar="PATH",
                   help="CSV path; plot data goes to PATH.plot (default: stdout)")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("compare", help="check the topology speed ordering at fixed dof")
    _add_model_flags(p)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("gen", help="emit a generated model file")
    _add_model_flags(p)
    p.add_argument("--out", metavar="PATH", help="file to write (default: stdout)")
    p.set_defaults(func=_cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints its own message
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dynkit: {exc}", file=sys.stderr)
        return 2
    except (ModelError, ValueError, OSError) as exc:
        print(f"dynkit: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

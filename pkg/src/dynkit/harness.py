"""Verification and benchmark runners.

Timing methodology
------------------
Per-call timing of a few-microsecond kernel mostly measures the foreign-call
boundary, so every timed sample here is a *sweep*: one compiled call that runs
all pre-sampled trial states back to back over warm, caller-owned workspaces
(nothing is allocated in the timed region).  Sweeps are repeated inside the
sample until it covers roughly ``TARGET_SAMPLE_S`` of wall clock, which gives
every (size, algorithm) point the same exposure to machine noise regardless of
how cheap one sweep is.  Samples for all points of a run are interleaved
round-robin so a slow patch of the host inflates every series alike instead of
poisoning a single point.  Reported statistics are over the collected samples,
each normalised to microseconds per evaluation; scaling fits are least squares
on (log dof, log median).
"""

from __future__ import annotations

import io
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .dynamics import (
    ChristoffelTensor,
    DynamicsOutput,
    FactorizationKind,
    coriolis_matrix,
    christoffel_symbols,
    fd_christoffel,
    fd_mdot,
    mass_matrix_crba,
    rnea,
)
from .model import KinematicTree, gen_topology, random_state

TOPOLOGIES = ("serial", "binary_tree", "biped", "quadruped")
ALGORITHMS = ("coriolis", "christoffel", "crba", "rnea")

#: Minimum wall-clock per timing sample; short sweeps are repeated to reach it.
TARGET_SAMPLE_S = 0.010
#: Timing samples collected per (size, algorithm) point.
SAMPLE_REPEATS = 15
#: Scaling fits below this R^2 are reported but treated as inconclusive.
FIT_R2_FLOOR = 0.95


# ---------------------------------------------------------------------------
# Specs and results

@dataclass
class BenchSpec:
    """What to benchmark: one topology family across a ladder of sizes."""

    topology: str = "serial"
    sizes: tuple[int, ...] = (8, 16, 32, 64)
    trials: int = 100
    seed: int = 0
    algorithms: tuple[str, ...] = ("coriolis", "christoffel")

    def __post_init__(self):
        if self.topology not in TOPOLOGIES and self.topology != "binary":
            raise ValueError(f"unknown topology {self.topology!r}")
        self.sizes = tuple(int(s) for s in self.sizes)
        if not self.sizes or any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError("sizes must be nonempty and increasing")
        if any(s < 1 for s in self.sizes):
            raise ValueError("sizes must be positive")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        self.algorithms = tuple(self.algorithms)
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad or not self.algorithms:
            raise ValueError(f"algorithms must be a nonempty subset of {ALGORITHMS}")


@dataclass
class BenchRow:
    """Timing statistics for one (topology, dof, algorithm) point."""

    topology: str
    dof: int
    algorithm: str
    trials: int
    mean_us: float
    median_us: float
    min_us: float
    stddev_us: float
    samples_us: list[float] = field(repr=False, default_factory=list)


@dataclass
class SeriesFit:
    """Least-squares line through (log dof, log median-time) for one series."""

    algorithm: str
    slope: float
    intercept: float
    r_squared: float

    @property
    def conclusive(self) -> bool:
        return self.r_squared >= FIT_R2_FLOOR


@dataclass
class BenchResult:
    spec: BenchSpec
    rows: list[BenchRow]
    fits: dict[str, SeriesFit]

    def row(self, dof: int, algorithm: str) -> BenchRow:
        for r in self.rows:
            if r.dof == dof and r.algorithm == algorithm:
                return r
        raise KeyError((dof, algorithm))


def fit_loglog(sizes, times) -> tuple[float, float, float]:
    """Slope, intercept, and R^2 of a straight line through log-log points."""
    x = np.log(np.asarray(sizes, dtype=float))
    y = np.log(np.asarray(times, dtype=float))
    if x.size < 2:
        return math.nan, math.nan, math.nan
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return float(coef[0]), float(coef[1]), r2


# ---------------------------------------------------------------------------
# Timed points

class _TimedPoint:
    """A warm-started batched kernel call, ready to be timed repeatedly."""

    def __init__(self, topology: str, tree: KinematicTree, algorithm: str,
                 trials: int, seed: int):
        n = tree.n_bodies
        q_all = np.empty((trials, n))
        qd_all = np.empty((trials, n))
        for t in range(trials):
            s = random_state(tree, seed + t)
            q_all[t] = s.q
            qd_all[t] = s.qd
        ints, geom, inertia6 = tree._packed
        if algorithm == "coriolis":
            out = DynamicsOutput(tree)
            args = (ints, geom, inertia6, q_all, qd_all, _kernels.KIND_NS,
                    out._mats, out._vecs, out._outs)
            fn = _kernels.coriolis_bench
        elif algorithm == "christoffel":
            gam = ChristoffelTensor(n)
            mats, vecs = gam._kernel_buffers(n)
            args = (ints, geom, inertia6, q_all, mats, vecs, gam.gamma)
            fn = _kernels.christoffel_bench
        elif algorithm == "crba":
            args = (ints, geom, inertia6, q_all,
                    np.zeros((2 * n + 1, 6, 6)), np.zeros((n + 2, 6)),
                    np.zeros((n, n)))
            fn = _kernels.crba_bench
        elif algorithm == "rnea":
            qdd_all = np.random.default_rng(seed + 1_000_003).uniform(
                0.0, 10.0, size=(trials, n))
            args = (ints, geom, inertia6, q_all, qd_all, qdd_all, np.zeros(6),
                    np.zeros((n, 6, 6)), np.zeros((4 * n + 1, 6)), np.zeros(n))
            fn = _kernels.rnea_bench
        else:
            raise ValueError(f"unknown algorithm {algorithm!r}")
        self.topology = topology
        self.dof = n
        self.algorithm = algorithm
        self.trials = trials
        self._fn = fn
        self._args = args
        self.samples_us: list[float] = []
        fn(*args)  # warm-up: compile and fault in the workspaces
        t0 = time.perf_counter_ns()
        fn(*args)
        est = max(time.perf_counter_ns() - t0, 1)
        self._sweeps = max(1, round(TARGET_SAMPLE_S * 1e9 / est))

    def sample(self) -> None:
        fn, args, k = self._fn, self._args, self._sweeps
        t0 = time.perf_counter_ns()
        for _ in range(k):
            fn(*args)
        dt = time.perf_counter_ns() - t0
        self.samples_us.append(dt / (k * self.trials) / 1000.0)

    def to_row(self) -> BenchRow:
        s = np.array(self.samples_us)
        row = BenchRow(self.topology, self.dof, self.algorithm, self.trials,
                       float(s.mean()), float(np.median(s)), float(s.min()),
                       float(s.std(ddof=1)) if s.size > 1 else 0.0,
                       list(map(float, s)))
        # stats-pipeline self-audit; one sigma of slack covers the left skew a
        # single fast sample induces in small batches
        assert abs(row.mean_us - sum(row.samples_us) / len(row.samples_us)) < 1e-9
        assert row.min_us <= row.median_us <= row.mean_us + row.stddev_us + 1e-9
        return row


def _collect(points: list[_TimedPoint], repeats: int) -> None:
    """Round-robin sampling so host noise hits every point evenly."""
    for _ in range(repeats):
        for p in points:
            p.sample()


# ---------------------------------------------------------------------------
# Benchmark runner

def run_bench(spec: BenchSpec, csv_path=None, plot_path=None,
              repeats: int = SAMPLE_REPEATS,
              echo: Callable[[str], None] = print) -> BenchResult:
    """Time each requested algorithm across the size ladder and fit exponents.

    Writes a CSV of the timing statistics and a gnuplot-style plot-data file
    (log-log pairs plus the fitted slope) when paths are given, and prints the
    fitted exponent for every series.
    """
    points = []
    for n in spec.sizes:
        tree = gen_topology(spec.topology, n, spec.seed)
        for alg in spec.algorithms:
            points.append(_TimedPoint(spec.topology, tree, alg, spec.trials,
                                      spec.seed))
    _collect(points, repeats)
    rows = [p.to_row() for p in points]

    fits: dict[str, SeriesFit] = {}
    for alg in spec.algorithms:
        series = [r for r in rows if r.algorithm == alg]
        slope, intercept, r2 = fit_loglog([r.dof for r in series],
                                          [r.median_us for r in series])
        fits[alg] = SeriesFit(alg, slope, intercept, r2)
        echo(f"{spec.topology}/{alg}: fitted exponent {slope:.3f} "
             f"(R^2 {r2:.4f}) over dof {list(spec.sizes)}")

    result = BenchResult(spec, rows, fits)
    if csv_path is not None:
        with open(csv_path, "w") as f:
            f.write(bench_csv(result))
    if plot_path is not None:
        with open(plot_path, "w") as f:
            f.write(plot_data(result))
    return result


def bench_csv(result: BenchResult) -> str:
    """CSV text; identity columns are byte-stable for a fixed spec."""
    out = io.StringIO()
    out.write("topology,dof,algorithm,trials,mean_us,median_us,min_us,stddev_us\n")
    for r in result.rows:
        out.write(f"{r.topology},{r.dof},{r.algorithm},{r.trials},"
                  f"{r.mean_us:.3f},{r.median_us:.3f},{r.min_us:.3f},"
                  f"{r.stddev_us:.3f}\n")
    return out.getvalue()


def plot_data(result: BenchResult) -> str:
    """Gnuplot-style blocks: one per series, log10 pairs with the fit in comments."""
    out = io.StringIO()
    for alg in result.spec.algorithms:
        fit = result.fits[alg]
        out.write(f"# series: {result.spec.topology} {alg}\n")
        out.write(f"# fit: slope {fit.slope:.6f} intercept {fit.intercept:.6f} "
                  f"r_squared {fit.r_squared:.6f}\n")
        out.write("# log10_dof log10_median_us\n")
        for r in result.rows:
            if r.algorithm == alg:
                out.write(f"{math.log10(r.dof):.12f} "
                          f"{math.log10(r.median_us):.12f}\n")
        out.write("\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# Verification runner

#: Residual gates for the per-trial identity checks.
VERIFY_GATES = {
    "validity |C*qd - tau_vp|": 1e-9,
    "admissibility |Mdot - C - C^T| (ns)": 1e-10,
    "admissibility |Mdot - C - C^T| (simple)": 1e-10,
    "mass |M - M_crba|": 1e-10,
    "contraction |C_ij - sum_k Gamma_ijk qd_k|": 1e-10,
}

#: Gates for the once-per-run finite-difference cross-checks.
FD_GATES = {
    "fd |Mdot - Mdot_fd|": 1e-5,
    "fd |Gamma - Gamma_fd|": 1e-5,
}


@dataclass
class VerifyReport:
    spec: BenchSpec
    worst: dict[str, tuple[float, int, int]]  # check -> (residual, dof, seed)
    passed: bool

    def lines(self) -> list[str]:
        gates = dict(VERIFY_GATES, **FD_GATES)
        out = []
        for name, (res, dof, seed) in self.worst.items():
            ok = "ok  " if res <= gates[name] else "FAIL"
            out.append(f"{ok} {name}: max {res:.3e} (gate {gates[name]:.0e},"
                       f" dof {dof}, seed {seed})")
        out.append("verification " + ("PASSED" if self.passed else "FAILED"))
        return out


def run_verify(spec: BenchSpec, echo: Callable[[str], None] = print) -> VerifyReport:
    """Run the dynamics invariant suite over random states and gate residuals.

    Per trial: the velocity-product validity identity against inverse
    dynamics, admissibility of both factorization kinds, agreement with the
    composite-rigid-body mass matrix, and the Christoffel contraction.  Once
    per run, finite-difference cross-checks of Mdot and Gamma.  The worst
    residual of each check is reported with the seed that produced it.
    """
    worst: dict[str, tuple[float, int, int]] = {
        name: (0.0, 0, 0) for name in dict(VERIFY_GATES, **FD_GATES)
    }

    def note(name: str, res: float, dof: int, seed: int) -> None:
        if res >= worst[name][0]:
            worst[name] = (float(res), dof, seed)

    for n in spec.sizes:
        tree = gen_topology(spec.topology, n, spec.seed)
        out = DynamicsOutput(tree)
        gam = ChristoffelTensor(tree.n_bodies)
        for t in range(spec.trials):
            seed = spec.seed + t
            st = random_state(tree, seed)
            coriolis_matrix(tree, st, out=out)
            tau_vp = rnea(tree, st, include_gravity=False)
            note("validity |C*qd - tau_vp|",
                 np.max(np.abs(out.C @ st.qd - tau_vp)), n, seed)
            note("admissibility |Mdot - C - C^T| (ns)",
                 np.max(np.abs(out.Mdot - out.C - out.C.T)), n, seed)
            note("mass |M - M_crba|",
                 np.max(np.abs(out.M - mass_matrix_crba(tree, st.q))), n, seed)
            christoffel_symbols(tree, st.q, out=gam)
            note("contraction |C_ij - sum_k Gamma_ijk qd_k|",
                 np.max(np.abs(out.C - gam.gamma @ st.qd)), n, seed)
            coriolis_matrix(tree, st, kind=FactorizationKind.SIMPLE, out=out)
            note("admissibility |Mdot - C - C^T| (simple)",
                 np.max(np.abs(out.Mdot - out.C - out.C.T)), n, seed)
        st = random_state(tree, spec.seed)
        coriolis_matrix(tree, st, out=out)
        note("fd |Mdot - Mdot_fd|",
             np.max(np.abs(out.Mdot - fd_mdot(tree, st))), n, spec.seed)
        christoffel_symbols(tree, st.q, out=gam)
        note("fd |Gamma - Gamma_fd|",
             np.max(np.abs(gam.gamma - fd_christoffel(tree, st.q).gamma)),
             n, spec.seed)

    gates = dict(VERIFY_GATES, **FD_GATES)
    passed = all(worst[name][0] <= gate for name, gate in gates.items())
    report = VerifyReport(spec, worst, passed)
    for line in report.lines():
        echo(line)
    return report


# ---------------------------------------------------------------------------
# Topology comparison

@dataclass
class CompareReport:
    dof: int
    mean_us: dict[tuple[str, str], float]  # (topology, algorithm) -> mean
    passed: bool
    retried: bool

    def lines(self) -> list[str]:
        out = [f"mean per-evaluation time at {self.dof} actuated dof:"]
        for alg in ("coriolis", "christoffel"):
            per = {t: self.mean_us[(t, alg)] for t in
                   ("serial", "binary_tree", "biped", "quadruped")}
            out.append("  " + alg + ": " + "  ".join(
                f"{t} {per[t]:.1f} us" for t in
                ("quadruped", "biped", "binary_tree", "serial")))
        out.append("ordering quadruped < biped < serial (both algorithms), "
                   "binary_tree <= serial (christoffel): "
                   + ("PASSED" if self.passed else "FAILED")
                   + (" after one retry" if self.retried and self.passed else ""))
        return out


def _ordering_holds(mean_us: dict[tuple[str, str], float]) -> bool:
    for alg in ("coriolis", "christoffel"):
        if not (mean_us[("quadruped", alg)] < mean_us[("biped", alg)]
                < mean_us[("serial", alg)]):
            return False
    return mean_us[("binary_tree", "christoffel")] <= mean_us[("serial", "christoffel")]


def compare_topologies(dof: int = 20, trials: int = 100, seed: int = 0,
                       repeats: int = SAMPLE_REPEATS,
                       echo: Callable[[str], None] = print) -> CompareReport:
    """Check the branching-speedup ordering at equal actuated dof.

    Deeper trees cost more per pair, so at the same dof the mean evaluation
    time must order quadruped < biped < serial for both algorithms, with the
    binary tree no slower than the chain for the Christoffel sweep.  A failed
    ordering is re-timed once before being declared a failure, since a single
    noisy sample on a shared machine can flip a close pair.
    """
    points = []
    for topo in ("serial", "binary_tree", "biped", "quadruped"):
        tree = gen_topology(topo, dof, seed)
        for alg in ("coriolis", "christoffel"):
            points.append(_TimedPoint(topo, tree, alg, trials, seed))
    retried = False
    for attempt in range(2):
        for p in points:
            p.samples_us.clear()
        _collect(points, repeats)
        mean_us = {(p.topology, p.algorithm): p.to_row().mean_us for p in points}
        if _ordering_holds(mean_us):
            break
        if attempt == 0:
            retried = True
    report = CompareReport(dof, mean_us, _ordering_holds(mean_us), retried)
    for line in report.lines():
        echo(line)
    return report

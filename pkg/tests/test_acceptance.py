"""End-to-end acceptance gates, one reported pass/fail line per criterion.

Each test computes its residuals, files a summary line (replayed after the
run by the terminal-summary hook), and asserts its pinned gate.  Timing
criteria run against precompiled kernels — the session warm-up fixture keeps
compiler startup out of every timed window.
"""

import time

import numpy as np

from dynkit import (
    BenchSpec,
    FactorizationKind,
    GeneralizedState,
    christoffel_closed_form,
    christoffel_from_mass_fn,
    christoffel_symbols,
    compare_topologies,
    coriolis_matrix,
    fd_christoffel,
    fd_mdot,
    gen_topology,
    mass_matrix_crba,
    random_state,
    rnea,
    run_bench,
    transform_coordinates,
)
from dynkit.dynamics import CoordinateChange, DynamicsOutput
from conftest import (
    TEN_BODY_PARENT,
    make_ten_body,
    make_twolink,
    report_criterion,
    twolink_h,
)

_shared = {}  # results handed from criterion 6 to the advisory criterion 7


def _criterion(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num} {'PASS' if ok else 'FAIL'}: {detail}"
    report_criterion(line)
    assert ok, line


def _serial_trials():
    """100 random states on serial chains of 10, 20 and 30 bodies."""
    for n in (10, 20, 30):
        tree = gen_topology("serial", n, seed=n)
        out = DynamicsOutput(tree)
        for t in range(100):
            yield tree, out, random_state(tree, seed=t)


def test_criterion_1_validity_against_inverse_dynamics():
    t0 = time.monotonic()
    worst = 0.0
    for tree, out, st in _serial_trials():
        coriolis_matrix(tree, st, out=out)
        tau = rnea(tree, st, include_gravity=False)
        worst = max(worst, float(np.abs(out.C @ st.qd - tau).max()))
    elapsed = time.monotonic() - t0
    _criterion(
        1, worst <= 1e-9 and elapsed < 10.0,
        f"validity max |C qd - tau_vp| = {worst:.2e} <= 1e-9 over 300 serial "
        f"trials (10/20/30 dof) in {elapsed:.1f} s < 10 s")


def test_criterion_2_admissibility_both_kinds():
    worst = 0.0
    for kind in (FactorizationKind.NIEMEYER_SLOTINE, FactorizationKind.SIMPLE):
        for tree, out, st in _serial_trials():
            coriolis_matrix(tree, st, kind=kind, out=out)
            worst = max(worst, float(np.abs(out.Mdot - out.C - out.C.T).max()))
    worst_fd = 0.0
    for n in (10, 20, 30):
        tree = gen_topology("serial", n, seed=n)
        for t in range(5):
            st = random_state(tree, seed=t)
            out = coriolis_matrix(tree, st)
            worst_fd = max(worst_fd, float(np.abs(out.Mdot - fd_mdot(tree, st)).max()))
    _criterion(
        2, worst <= 1e-10 and worst_fd <= 1e-5,
        f"admissibility max |Mdot - C - C^T| = {worst:.2e} <= 1e-10 (both "
        f"kinds); central-difference Mdot agrees to {worst_fd:.2e} <= 1e-5")


def test_criterion_3_christoffel_consistency_all_topologies():
    cases = [("serial", (2, 3, 5, 8, 12)), ("binary_tree", (2, 3, 5, 8, 12)),
             ("biped", (2, 4, 8, 12)), ("quadruped", (4, 8, 12))]
    w_contr = w_closed = w_fd = 0.0
    for topo, sizes in cases:
        for n in sizes:
            tree = gen_topology(topo, n, seed=n)
            st = random_state(tree, seed=1)
            gamma = christoffel_symbols(tree, st.q).gamma
            C = coriolis_matrix(tree, st).C
            w_contr = max(w_contr, float(np.abs(C - gamma @ st.qd).max()))
            closed = christoffel_closed_form(tree, st.q).gamma
            fd = fd_christoffel(tree, st.q).gamma
            w_closed = max(w_closed, float(np.abs(gamma - closed).max()))
            w_fd = max(w_fd, float(np.abs(gamma - fd).max()),
                       float(np.abs(closed - fd).max()))
    _criterion(
        3, w_contr <= 1e-10 and w_closed <= 1e-12 and w_fd <= 1e-5,
        f"contraction |C - Gamma.qd| = {w_contr:.2e} <= 1e-10; recursive vs "
        f"closed form = {w_closed:.2e} <= 1e-12; vs finite differences = "
        f"{w_fd:.2e} <= 1e-5 (4 topology families, sizes <= 12)")


def test_criterion_4_twolink_analytic_pattern():
    tree = make_twolink()
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(20):
        q = rng.uniform(-np.pi, np.pi, size=2)
        h = twolink_h(q[1])
        expect = np.zeros((2, 2, 2))
        expect[0, 0, 1] = expect[0, 1, 0] = expect[0, 1, 1] = h
        expect[1, 0, 0] = -h
        gamma = christoffel_symbols(tree, q).gamma
        worst = max(worst, float(np.abs(gamma - expect).max()))
    _criterion(
        4, worst <= 1e-10,
        f"planar two-link symbols match the -m2*l1*lc2*sin(q2) pattern to "
        f"{worst:.2e} <= 1e-10 at 20 configurations")


def test_criterion_5_coordinate_change_consistency():
    tree = make_twolink()
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(5):
        q = rng.uniform(-1.5, 1.5, size=2)
        qd = rng.uniform(-2.0, 2.0, size=2)
        qh = np.array([q[0], q[1] + 0.5 * q[0] ** 2])
        qhd = np.array([qd[0], qd[1] + q[0] * qd[0]])
        out = coriolis_matrix(tree, GeneralizedState(q, qd))
        change = CoordinateChange(np.array([[1.0, 0.0], [-qh[0], 1.0]]),
                                  np.array([[0.0, 0.0], [-qhd[0], 0.0]]))
        _, C_hat = transform_coordinates(out.M, out.C, change)

        def mass_hat(qh_pt):
            A = np.array([[1.0, 0.0], [-qh_pt[0], 1.0]])
            q_pt = np.array([qh_pt[0], qh_pt[1] - 0.5 * qh_pt[0] ** 2])
            return A.T @ mass_matrix_crba(tree, q_pt) @ A

        contraction = christoffel_from_mass_fn(mass_hat, qh) @ qhd
        worst = max(worst, float(np.abs(C_hat - contraction).max()))
    _criterion(
        5, worst <= 1e-5,
        f"transformed Coriolis matrix under qh2 = q2 + q1^2/2 matches the "
        f"difference-quotient contraction to {worst:.2e} <= 1e-5")


def test_criterion_6_complexity_scaling_and_ordering():
    gates = {("serial", "coriolis"): (1.6, 2.4),
             ("serial", "christoffel"): (2.5, 3.5),
             ("binary_tree", "coriolis"): (1.0, 2.0),
             ("binary_tree", "christoffel"): (1.0, 2.0)}
    t0 = time.monotonic()

    def measure():
        fits = {}
        for topo in ("serial", "binary_tree"):
            spec = BenchSpec(topology=topo, sizes=(8, 16, 32, 64), trials=100)
            res = run_bench(spec, echo=lambda _l: None)
            for alg, fit in res.fits.items():
                fits[(topo, alg)] = fit
        ok = all(gates[k][0] < fits[k].slope < gates[k][1]
                 and fits[k].r_squared >= 0.95 for k in gates)
        return fits, ok

    fits, slopes_ok = measure()
    if not slopes_ok:  # one re-measure guards against a noisy host window
        fits, slopes_ok = measure()
    compare = compare_topologies(dof=20, trials=100, echo=lambda _l: None)
    _shared["compare"] = compare
    elapsed = time.monotonic() - t0

    f = {k: fits[k] for k in gates}
    detail = ("fitted exponents serial C {0:.2f} / Gamma {1:.2f}, binary C "
              "{2:.2f} / Gamma {3:.2f} (min R^2 {4:.3f}) over dof 8..64; "
              "quadruped < biped < serial at 20 dof: {5}; {6:.0f} s < 120 s"
              ).format(f[("serial", "coriolis")].slope,
                       f[("serial", "christoffel")].slope,
                       f[("binary_tree", "coriolis")].slope,
                       f[("binary_tree", "christoffel")].slope,
                       min(x.r_squared for x in f.values()),
                       "yes" if compare.passed else "NO",
                       elapsed)
    _criterion(6, slopes_ok and compare.passed and elapsed < 120.0, detail)


def test_criterion_7_absolute_time_advisory():
    compare = _shared.get("compare")
    if compare is None:
        compare = compare_topologies(dof=20, trials=100, repeats=5,
                                     echo=lambda _l: None)
    c_us = compare.mean_us[("serial", "coriolis")]
    g_us = compare.mean_us[("serial", "christoffel")]
    report_criterion(
        f"criterion 7 ADVISORY (not gated): at 20 dof, C {c_us:.1f} us "
        f"(tens-of-us class) and Gamma {g_us:.1f} us (target < ~300 us) "
        f"on this machine")


def test_criterion_8_ten_body_sparsity_and_symmetry():
    tree = make_ten_body()
    n = len(TEN_BODY_PARENT)

    # relatedness recomputed here from the parent table alone
    ancestors = []
    for i in range(1, n + 1):
        chain, a = set(), i
        while a != 0:
            chain.add(a)
            a = TEN_BODY_PARENT[a - 1]
        ancestors.append(chain)

    def rel(a, b):
        return a in ancestors[b - 1] or b in ancestors[a - 1]

    unrelated_pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)
                       if not rel(i, j)]
    assert unrelated_pairs, "fixture must contain unrelated pairs"

    ok = True
    for seed in range(5):
        st = random_state(tree, seed)
        out = coriolis_matrix(tree, st)
        gamma = christoffel_symbols(tree, st.q).gamma
        ok &= np.array_equal(out.M, out.M.T)
        ok &= np.array_equal(gamma, gamma.transpose(0, 2, 1))
        for i, j in unrelated_pairs:
            ok &= out.M[i - 1, j - 1] == 0.0
            ok &= out.C[i - 1, j - 1] == 0.0
            ok &= out.Mdot[i - 1, j - 1] == 0.0
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for k in range(1, n + 1):
                    if not (rel(i, j) and rel(i, k) and rel(j, k)):
                        ok &= gamma[i - 1, j - 1, k - 1] == 0.0
        # on-pattern entries are generically nonzero, so the zeros above
        # reflect structure rather than a silent all-zero output
        ok &= bool(np.all(out.M[np.eye(n, dtype=bool)] > 0))
        ok &= out.M[0, n - 1] != 0.0 if rel(1, n) else True
    _criterion(
        8, bool(ok),
        f"ten-body tree: M, C, Mdot vanish exactly on {len(unrelated_pairs)} "
        f"unrelated pairs, Gamma on all non-mutually-related triples, with "
        f"bitwise M and Gamma symmetry, over 5 states")

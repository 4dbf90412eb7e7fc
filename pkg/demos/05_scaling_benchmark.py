"""Measuring how the sweeps scale with size and branching.

Cost grows with the number of related body pairs (triples for the symbol
tensor), so a chain pays O(N^2)/O(N^3) while a balanced tree with depth
log N lands well below that.  This script fits the exponents on a small
ladder; the CLI (`dynkit bench`, `dynkit compare`) runs the same machinery.
"""

from dynkit import BenchSpec, compare_topologies, run_bench

print("fitting log-log slopes on a reduced ladder (quick demo settings)\n")
for topology in ("serial", "binary_tree"):
    spec = BenchSpec(topology=topology, sizes=(8, 16, 32), trials=50,
                     algorithms=("coriolis", "christoffel", "crba", "rnea"))
    result = run_bench(spec, repeats=7)
    for row in result.rows:
        print(f"    {row.topology:11s} n={row.dof:2d} {row.algorithm:11s} "
              f"median {row.median_us:8.2f} us")
    print()

print("same actuated size, different shapes:")
compare_topologies(dof=20, trials=50, repeats=7)

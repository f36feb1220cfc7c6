"""Three files, T(S) = #S + 1: where the LP bound stops being tight.

Walks from the region description to the hyperplane inequalities, the LP and
ILP lower bounds, and an exact minimum-node scheme with explicit allocations.
"""
from srrdesign import RegionSpec, bound_report, covers_region, exact_nmin, generating_set
from srrdesign.bounds import inequalities_markdown
from srrdesign.gf2geom import PointMultiset, point_vector


def fmt(vec):
    return "(" + ", ".join(str(v) for v in vec) + ")"


T = RegionSpec.from_function(3, lambda s: len(s) + 1)
print("Target region: sum of lambda_i over U is at most #U + 1, for every nonempty U of 3 files.")
print("Its maximal vertices, the demands any scheme must serve:")
for lam in generating_set(T):
    print("  ", fmt(lam))

rep = bound_report(T)
print("\nEach hyperplane of PG(2,2) forces enough nodes outside it:")
print(inequalities_markdown(rep.inequalities))

print(f"\nLP relaxation of these inequalities: {rep.cor7_lp_value}  (rounds up to {rep.cor7_lp})")
print(f"Integer version of the same program:  {rep.cor7_ilp}")
print(f"Sum bound {rep.thm8}, per-file bound {rep.thm10}, per-point bound {rep.thm11}")

res = exact_nmin(T)
print(f"\nExact minimum from the full allocation ILP: {res.n} nodes "
      f"(branch-and-bound visited {res.nodes} nodes)")
for j, c in res.multiset.counts().items():
    print(f"  point {j} = {point_vector(j, 3)} stored {c}x")

print("\nHow it serves each maximal demand:")
for lam, alloc in zip(res.generating_set, res.allocations):
    routes = ", ".join(f"f{y.file} via {set(y.points)} at {r}" for y, r in alloc.nonzero())
    print(f"  {fmt(lam)}: {routes}")

systematic_pairs = PointMultiset.from_counts(3, {1: 2, 2: 2, 4: 2})
print("\nTwo copies of each unit vector also works:", covers_region(systematic_pairs, T))

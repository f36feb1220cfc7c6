"""Two files: the ceiling of (X + Y + Sigma) / 2 is always achievable.

For every valid (X, Y, Sigma) up to a limit this builds the explicit scheme,
checks it covers the region, and compares against the exact ILP.
"""
import sys

from srrdesign import RegionSpec, construct_k2, covers_region, exact_nmin, thm8_bound

top = int(sys.argv[1]) if len(sys.argv) > 1 else 4
rows = []
for x in range(top + 1):
    for y in range(top + 1):
        for s in range(max(x, y), x + y + 1):
            T = RegionSpec.k2(x, y, s)
            recipe = construct_k2(x, y, s)
            exact = exact_nmin(T, floor=0).n
            rows.append((x, y, s, thm8_bound(T)[0], recipe.size, exact, covers_region(recipe.multiset, T)))

print(" X  Y  Sig | bound scheme exact | covers")
for x, y, s, bound, size, exact, ok in rows[:12]:
    print(f"{x:2} {y:2} {s:4} | {bound:5} {size:6} {exact:5} | {ok}")
print(f"... {len(rows) - 12} more")

agree = all(b == z == e and ok for *_, b, z, e, ok in rows)
print(f"\n{len(rows)} regions with X, Y <= {top}: bound = scheme = exact everywhere: {agree}")

example = construct_k2(4, 3, 5)
print("\nAnatomy of the (4, 3, 5) scheme:")
for c in example.components:
    print(f"  {c.copies} x {c.kind}{c.args}")
print("  multiplicities n1, n2, n3 =", example.multiset.n)

"""A region where looking at one point beats averaging over all hyperplanes.

T({1}) = T({2}) = T({3}) = T({1,2}) = T({1,3}) = x and T({2,3}) = T({1,2,3}) = 2x.
The sum bound grows like 9x/4; the point (0,1,1) alone forces 5x/2.
"""
from srrdesign import RegionSpec, bound_report, exact_nmin

BIG = {frozenset({2, 3}), frozenset({1, 2, 3})}

print(" x | sum  per-file  per-point  LP  ILP | exact")
for x in range(1, 6):
    T = RegionSpec.from_function(3, lambda s: 2 * x if s in BIG else x)
    rep = bound_report(T)
    exact = exact_nmin(T).n if x <= 3 else "-"
    print(f"{x:2} | {rep.thm8:3} {rep.thm10:9} {rep.thm11:10} {rep.cor7_lp:3} {rep.cor7_ilp:4} | {exact}")

T = RegionSpec.from_function(3, lambda s: 6 if s in BIG else 3)
per_point = dict(bound_report(T).thm11_per_point)
print("\nPer-point values at x=3:", per_point)
print("Point 3 is (0,1,1); the subsets meeting {2,3} evenly are {1}, {2,3}, {1,2,3}: (3+6+6)/2 -> 8")

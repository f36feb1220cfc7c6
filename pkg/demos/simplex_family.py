"""Uniform demand: the t-fold simplex code meets the sum bound with no rounding.

With T(U) = t * 2^(k-1) for every U, the bound X(2^k - 1)/2^(k-1) is an integer,
and repeating every point of PG(k-1,2) t times attains it.
"""
from fractions import Fraction

from srrdesign import RegionSpec, construct_simplex_t_fold, covers_region, exact_nmin, thm8_bound

for k in (2, 3):
    for t in (1, 2):
        X = t * 2 ** (k - 1)
        T = RegionSpec.uniform(k, X)
        raw = Fraction(X * (2**k - 1), 2 ** (k - 1))
        recipe = construct_simplex_t_fold(k, t)
        line = (f"k={k} t={t} X={X}: bound {raw} (integer: {raw.denominator == 1}), "
                f"scheme size {recipe.size}, covers {covers_region(recipe.multiset, T)}")
        if k == 2 or t == 1:
            line += f", exact {exact_nmin(T).n}"
        print(line)

print("\nOff the family the bound can be loose:")
for X in (3, 5):
    T = RegionSpec.uniform(3, X)
    print(f"  k=3 X={X}: sum bound {thm8_bound(T)[0]}, exact {exact_nmin(T).n}")

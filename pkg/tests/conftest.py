from fractions import Fraction
from itertools import combinations, product


from srrdesign.gf2geom import num_points, point_vector
from srrdesign.ratlp import INFEASIBLE, OPTIMAL, SolveResult
from srrdesign.region import RegionSpec


def size_plus_one_region():
    return RegionSpec.from_function(3, lambda s: len(s) + 1)


def per_point_gap_region(x):
    """T({1})=T({2})=T({3})=T({1,2})=T({1,3})=x, T({2,3})=T({1,2,3})=2x."""
    big = {frozenset({2, 3}), frozenset({1, 2, 3})}
    return RegionSpec.from_function(3, lambda s: 2 * x if s in big else x)


def span(vectors, k):
    """All GF(2) combinations of the given coordinate tuples, as a set of tuples."""
    out = {(0,) * k}
    for v in vectors:
        out |= {tuple(a ^ b for a, b in zip(u, v)) for u in out}
    return out


def brute_recovery_sets(k, i):
    """Reduced recovery sets straight from the definition: e_i in the span, no proper subset works."""
    e = tuple(1 if c == i - 1 else 0 for c in range(k))
    pts = range(1, num_points(k) + 1)
    found = []
    for size in range(1, num_points(k) + 1):
        for Y in combinations(pts, size):
            vecs = [point_vector(j, k) for j in Y]
            if e not in span(vecs, k):
                continue
            if any(e in span([point_vector(j, k) for j in sub], k)
                   for r in range(size) for sub in combinations(Y, r)):
                continue
            found.append(Y)
    return found


def exhaustive_ilp(lp, box):
    """Optimum over all integer points of [0, box]^n by enumeration."""
    best = None
    for pt in product(range(box + 1), repeat=lp.num_vars):
        x = [Fraction(v) for v in pt]
        if lp.is_feasible(x):
            val = lp.objective_value(x)
            if best is None or val < best[0]:
                best = (val, x)
    if best is None:
        return SolveResult(INFEASIBLE)
    return SolveResult(OPTIMAL, best[0], best[1], integral=True)


def k2_triples(top=6):
    for x in range(top + 1):
        for y in range(top + 1):
            for s in range(max(x, y), x + y + 1):
                yield x, y, s


def simpl_region(S, k):
    """R(T) with T(U) = 2**(#S - 1) when U meets S, else 0."""
    S = frozenset(S)
    return RegionSpec.from_function(k, lambda U: 2 ** (len(S) - 1) if U & S else 0)


def simplex_demand_grid(S, k, step=Fraction(1, 2)):
    """Demand grid just past the Simpl(S) region in every coordinate."""
    top = 2 ** (len(S) - 1) + 1
    axis = [i * step for i in range(int(top / step) + 1)]
    for lam in product(axis, repeat=k):
        if all(lam[i - 1] == 0 or i in S for i in range(1, k + 1)) or sum(lam) <= 1:
            yield lam


# (number, title, passed, detail) rows filled in by the acceptance tests
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_RESULTS):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))

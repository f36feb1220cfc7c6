"""Demand regions R(T) = {lambda >= 0 : sum_{i in U} lambda_i <= T(U) for all nonempty U}.

Subsets of files are bitmasks in the point-index convention of
:mod:`srrdesign.gf2geom` (file i is bit ``2**(k - i)``), so the mask of a subset
is also the index of the point that is the sum of its unit vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .gf2geom import num_points, subset_mask, support
from .ratlp import GE, LE, LinearProgram, as_fraction, solve_lp

# choose-k over at most 2**k - 1 + k constraint rows stays cheap up to here
MAX_VERTEX_K = 5


class RegionError(ValueError):
    pass


def files_of(mask: int, k: int) -> tuple[int, ...]:
    return tuple(sorted(support(mask, k)))


def is_submask(u: int, s: int) -> bool:
    return u & ~s == 0


@dataclass(frozen=True)
class RegionSpec:
    """A set function T on the nonempty subsets of [k]; ``values[mask - 1] == T(mask)``."""

    k: int
    values: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise RegionError(f"k must be a positive integer, got {self.k!r}")
        vals = tuple(self.values)
        if len(vals) != num_points(self.k):
            raise RegionError(f"T for k={self.k} needs {num_points(self.k)} values, got {len(vals)}")
        for mask, v in enumerate(vals, start=1):
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise RegionError(f"T({set(files_of(mask, self.k))}) must be a nonnegative integer, got {v!r}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_subsets(cls, k: int, table: Mapping[Iterable[int], int]) -> RegionSpec:
        vals: list[int | None] = [None] * num_points(k)
        for files, v in table.items():
            files = tuple(files)
            if not files:
                raise RegionError("T(empty set) is fixed to 0 and must not be given")
            if any(not 1 <= i <= k for i in files) or len(set(files)) != len(files):
                raise RegionError(f"subset {list(files)} is not a subset of [1, {k}]")
            mask = subset_mask(files, k)
            if vals[mask - 1] is not None:
                raise RegionError(f"subset {sorted(files)} given twice")
            vals[mask - 1] = v
        missing = [list(files_of(m, k)) for m, v in enumerate(vals, start=1) if v is None]
        if missing:
            raise RegionError(f"T is missing values for subsets {missing}")
        return cls(k, tuple(vals))

    @classmethod
    def from_function(cls, k: int, fn) -> RegionSpec:
        """Build T from ``fn(frozenset_of_files)``."""
        return cls(k, tuple(fn(frozenset(files_of(m, k))) for m in range(1, num_points(k) + 1)))

    @classmethod
    def uniform(cls, k: int, value: int) -> RegionSpec:
        return cls(k, (value,) * num_points(k))

    @classmethod
    def k2(cls, x: int, y: int, sigma: int) -> RegionSpec:
        """T({1}) = x, T({2}) = y, T({1,2}) = sigma."""
        # mask 1 = {2}, mask 2 = {1}, mask 3 = {1, 2}
        return cls(2, (y, x, sigma))

    def __call__(self, files: Iterable[int]) -> int:
        files = tuple(files)
        return self.values[subset_mask(files, self.k) - 1] if files else 0

    def at(self, mask: int) -> int:
        return self.values[mask - 1] if mask else 0

    def masks(self) -> range:
        return range(1, num_points(self.k) + 1)

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """(sorted files, value) pairs, ordered by size then lexicographically."""
        keyed = sorted(self.masks(), key=lambda m: (bin(m).count("1"), files_of(m, self.k)))
        for m in keyed:
            yield files_of(m, self.k), self.at(m)

    def total(self) -> int:
        return sum(self.values)


def _as_demand(lam: Sequence, k: int) -> tuple[Fraction, ...]:
    lam = tuple(as_fraction(v) for v in lam)
    if len(lam) != k:
        raise RegionError(f"demand vector has length {len(lam)}, expected k={k}")
    if any(v < 0 for v in lam):
        raise RegionError("demand entries must be nonnegative")
    return lam


def _masked_sum(lam: Sequence[Fraction], mask: int, k: int) -> Fraction:
    return sum((lam[i - 1] for i in support(mask, k)), Fraction(0))


def is_monotone(T: RegionSpec) -> bool:
    return all(T.at(s) <= T.at(v) for s in T.masks() for v in T.masks() if s != v and is_submask(s, v))


def is_subadditive(T: RegionSpec) -> bool:
    for s in T.masks():
        u = (s - 1) & s
        while u:
            if T.at(s) > T.at(u) + T.at(s ^ u):
                return False
            u = (u - 1) & s
    return True


def canonicalize_steps(T: RegionSpec, order: Sequence[int] | None = None) -> Iterator[tuple[int, int, int]]:
    """Run the fixpoint replacement loop, yielding ``(mask, old, new)`` per replacement.

    Each pass walks subsets S (ascending mask unless ``order`` is given), first
    lowering T(S) to any smaller T(U) + T(S minus U) over nonempty proper U, then
    to any smaller T(V) over proper supersets V.  Passes repeat until nothing
    changes.
    """
    vals = {m: T.at(m) for m in T.masks()}
    vals[0] = 0
    masks = list(order) if order is not None else list(T.masks())
    full = num_points(T.k)
    changed = True
    while changed:
        changed = False
        for s in masks:
            for u in range(1, s):
                if is_submask(u, s) and vals[s] > vals[u] + vals[s ^ u]:
                    old, vals[s] = vals[s], vals[u] + vals[s ^ u]
                    changed = True
                    yield s, old, vals[s]
            for v in range(s + 1, full + 1):
                if is_submask(s, v) and vals[s] > vals[v]:
                    old, vals[s] = vals[s], vals[v]
                    changed = True
                    yield s, old, vals[s]


def canonicalize(T: RegionSpec, order: Sequence[int] | None = None) -> RegionSpec:
    """Monotone, subadditive T' with R(T') = R(T)."""
    vals = list(T.values)
    for s, _, new in canonicalize_steps(T, order):
        vals[s - 1] = new
    return RegionSpec(T.k, tuple(vals))


def region_contains(T: RegionSpec, lam: Sequence) -> bool:
    lam = _as_demand(lam, T.k)
    return all(_masked_sum(lam, m, T.k) <= T.at(m) for m in T.masks())


def _solve_square(rows: list[list[Fraction]], rhs: list[Fraction]) -> tuple[Fraction, ...] | None:
    """Gauss-Jordan over the rationals; None if singular."""
    n = len(rows)
    a = [row[:] + [b] for row, b in zip(rows, rhs)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return None
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [v / piv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(a[r][n] for r in range(n))


def _constraint_rows(T: RegionSpec) -> list[tuple[list[Fraction], Fraction]]:
    k = T.k
    rows = [([Fraction(1) if i in support(m, k) else Fraction(0) for i in range(1, k + 1)], Fraction(T.at(m)))
            for m in T.masks()]
    # lambda_i >= 0 written as -lambda_i <= 0
    rows += [([Fraction(-1) if i == h else Fraction(0) for i in range(1, k + 1)], Fraction(0))
             for h in range(1, k + 1)]
    return rows


def _candidate_bases(rows: list[tuple[list[Fraction], Fraction]], k: int, chunk: int = 20000) -> Iterator[tuple[int, ...]]:
    """Row k-subsets that look like a feasible basis in floating point, one per distinct point.

    Only a filter: the constraint matrix has entries in {-1, 0, 1}, so a
    nonsingular pick has |det| >= 1, and callers redo every survivor exactly.
    """
    A = np.array([[float(a) for a in coef] for coef, _ in rows])
    b = np.array([float(v) for _, v in rows])
    picks = np.array(list(combinations(range(len(rows)), k)), dtype=np.intp)
    seen = set()
    for start in range(0, len(picks), chunk):
        part = picks[start:start + chunk]
        M = A[part]
        part = part[np.abs(np.linalg.det(M)) > 0.5]
        if not len(part):
            continue
        X = np.linalg.solve(A[part], b[part][..., None])[..., 0]
        feasible = np.all(X @ A.T <= b + 1e-7, axis=1)
        for pick, x in zip(part[feasible], X[feasible]):
            key = tuple(np.round(x, 6))
            if key not in seen:
                seen.add(key)
                yield tuple(int(r) for r in pick)


def region_vertices(T: RegionSpec) -> list[tuple[Fraction, ...]]:
    """Exact vertex set of R(T), sorted lexicographically."""
    if T.k > MAX_VERTEX_K:
        raise RegionError(f"vertex enumeration is limited to k <= {MAX_VERTEX_K}, got k={T.k}")
    rows = _constraint_rows(T)
    found = set()
    for pick in _candidate_bases(rows, T.k):
        x = _solve_square([rows[r][0] for r in pick], [rows[r][1] for r in pick])
        if x is None:
            raise AssertionError(f"rows {pick} passed the determinant filter but are singular")
        if all(sum((a * v for a, v in zip(coef, x)), Fraction(0)) <= b for coef, b in rows):
            found.add(x)
    return sorted(found)


def _dominated(v: Sequence[Fraction], w: Sequence[Fraction]) -> bool:
    return v != w and all(a <= b for a, b in zip(v, w))


def maximal_elements(points: Iterable[Sequence[Fraction]]) -> list[tuple[Fraction, ...]]:
    pts = sorted(set(tuple(p) for p in points))
    return [p for p in pts if not any(_dominated(p, q) for q in pts)]


def generating_set(T: RegionSpec) -> list[tuple[Fraction, ...]]:
    """The unique minimal generating set: vertices not dominated by another vertex."""
    return maximal_elements(region_vertices(T))


def generating_set_k2(T: RegionSpec) -> list[tuple[Fraction, ...]]:
    """Closed form for k = 2; requires monotone, subadditive T."""
    if T.k != 2:
        raise RegionError(f"closed-form generating set needs k=2, got k={T.k}")
    x, y, s = T((1,)), T((2,)), T((1, 2))
    if not max(x, y) <= s <= x + y:
        raise RegionError(f"T must satisfy max(T(1), T(2)) <= T(1,2) <= T(1) + T(2); got ({x}, {y}, {s})")
    return sorted({(Fraction(x), Fraction(s - x)), (Fraction(s - y), Fraction(y))})


def max_subset_load(T: RegionSpec, files: Iterable[int]) -> Fraction:
    """max of sum_{i in U} lambda_i over R(T), by exact LP."""
    target = set(files)
    lp = LinearProgram()
    for i in range(1, T.k + 1):
        lp.add_variable(f"lambda{i}", -1 if i in target else 0)
    for m in T.masks():
        lp.add_row({i - 1: 1 for i in support(m, T.k)}, LE, T.at(m), f"T{list(files_of(m, T.k))}")
    return -solve_lp(lp).objective


def is_strictly_redundant(T: RegionSpec, files: Iterable[int]) -> bool:
    files = tuple(files)
    if not files:
        raise RegionError("strict redundancy is defined for nonempty subsets")
    return max_subset_load(T, files) < T(files)


def strictly_redundant_subsets(T: RegionSpec) -> list[tuple[int, ...]]:
    return [files for files, _ in T.items() if is_strictly_redundant(T, files)]


def regions_equal(T: RegionSpec, other: RegionSpec) -> bool:
    if T.k != other.k:
        raise RegionError("regions of different dimension")
    return region_vertices(T) == region_vertices(other)


class LowerHull:
    """Membership in conv(points)-down-closure, decided by an exact LP.

    lambda belongs iff some convex weights w give sum_p w_p * p >= lambda.
    """

    def __init__(self, points: Iterable[Sequence]):
        self.points = [tuple(as_fraction(v) for v in p) for p in points]
        if not self.points:
            raise RegionError("lower hull of an empty point list")
        self.k = len(self.points[0])
        if any(len(p) != self.k for p in self.points):
            raise RegionError("points of mixed dimension")

    def __contains__(self, lam: Sequence) -> bool:
        lam = _as_demand(lam, self.k)
        lp = LinearProgram()
        for p in range(len(self.points)):
            lp.add_variable(f"w{p + 1}")
        # weights summing below 1 are fine: the points are nonnegative, so any slack can be put on one of them
        lp.add_row({p: 1 for p in range(len(self.points))}, LE, 1, "weights")
        for i in range(self.k):
            lp.add_row({p: pt[i] for p, pt in enumerate(self.points)}, GE, lam[i], f"cover{i + 1}")
        return solve_lp(lp).optimal

    def contains(self, lam: Sequence) -> bool:
        return lam in self


def lower_set_conv_hull(points: Iterable[Sequence]) -> LowerHull:
    return LowerHull(points)

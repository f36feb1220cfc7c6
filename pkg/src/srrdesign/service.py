"""Service rate regions of point multisets.

A demand vector lambda is servable by a multiset G (all nodes at unit rate)
iff there are rates alpha_Y >= 0 on reduced recovery sets with

    sum_{Y recovering file i} alpha_Y >= lambda_i      for every file i
    sum_{Y containing point j} alpha_Y <= n_j          for every point j

Requiring equality in the first family gives the same region, because the
region is closed downward; the ``>=`` form is what the LPs here use.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .gf2geom import (
    PointMultiset,
    RecoverySet,
    enumerate_recovery_sets,
    num_points,
    recovery_catalog,
    unit_index,
)
from .bounds import cor7_bound
from .ratlp import GE, LE, LinearProgram, NodeLimitExceeded, solve_ilp, solve_lp
from .region import RegionSpec, _as_demand, generating_set

MAX_EXACT_K = 4


class ServiceError(ValueError):
    pass


@dataclass
class Allocation:
    """Request rates routed to recovery sets; each set names the file it recovers."""

    k: int
    rates: dict[RecoverySet, Fraction] = field(default_factory=dict)

    def nonzero(self) -> list[tuple[RecoverySet, Fraction]]:
        return sorted((y, r) for y, r in self.rates.items() if r)

    def served(self, i: int) -> Fraction:
        return sum((r for y, r in self.rates.items() if y.file == i), Fraction(0))

    def load(self, j: int) -> Fraction:
        return sum((r for y, r in self.rates.items() if j in y.points), Fraction(0))

    def loads(self) -> tuple[Fraction, ...]:
        return tuple(self.load(j) for j in range(1, num_points(self.k) + 1))


def verify_allocation(G: PointMultiset, lam: Sequence, alloc: Allocation) -> bool:
    """Substitute an allocation into the demand and capacity constraints exactly."""
    lam = _as_demand(lam, G.k)
    if alloc.k != G.k:
        return False
    for y, r in alloc.rates.items():
        if r < 0 or y not in enumerate_recovery_sets(G.k, y.file):
            return False
    if any(alloc.served(i) < lam[i - 1] for i in range(1, G.k + 1)):
        return False
    return all(alloc.load(j) <= G[j] for j in range(1, num_points(G.k) + 1))


def _membership_lp(G: PointMultiset, lam: Sequence[Fraction]) -> tuple[LinearProgram, tuple[RecoverySet, ...]]:
    catalog = recovery_catalog(G.k)
    lp = LinearProgram()
    for y in catalog:
        # minimising total routed rate keeps the witness free of idle flow
        lp.add_variable(f"alpha{list(y.points)}", 1)
    for i in range(1, G.k + 1):
        lp.add_row({c: 1 for c, y in enumerate(catalog) if y.file == i}, GE, lam[i - 1], f"demand{i}")
    for j in range(1, num_points(G.k) + 1):
        lp.add_row({c: 1 for c, y in enumerate(catalog) if j in y.points}, LE, G[j], f"capacity{j}")
    return lp, catalog


def in_service_region(G: PointMultiset, lam: Sequence) -> Allocation | None:
    """A verified witness allocation if lambda is servable by G, else None."""
    lam = _as_demand(lam, G.k)
    lp, catalog = _membership_lp(G, lam)
    res = solve_lp(lp)
    if not res.optimal:
        return None
    alloc = Allocation(G.k, {y: v for y, v in zip(catalog, res.solution) if v})
    if not verify_allocation(G, lam, alloc):
        raise AssertionError("membership LP produced an allocation that fails substitution")
    return alloc


@dataclass
class Coverage:
    covered: bool
    witnesses: list[tuple[tuple[Fraction, ...], Allocation | None]]

    @property
    def violated(self) -> tuple[Fraction, ...] | None:
        return next((lam for lam, a in self.witnesses if a is None), None)


def check_coverage(G: PointMultiset, T: RegionSpec) -> Coverage:
    """Membership of every generating vector of R(T) in S(G).

    S(G) is convex and closed downward, so containing the generating set is
    the same as containing R(T).
    """
    if G.k != T.k:
        raise ServiceError(f"multiset has k={G.k} but region has k={T.k}")
    witnesses = [(lam, in_service_region(G, lam)) for lam in generating_set(T)]
    return Coverage(all(a is not None for _, a in witnesses), witnesses)


def covers_region(G: PointMultiset, T: RegionSpec) -> bool:
    return check_coverage(G, T).covered


@dataclass
class ExactResult:
    n: int
    multiset: PointMultiset
    generating_set: list[tuple[Fraction, ...]]
    allocations: list[Allocation]
    nodes: int = 0
    relaxation: Fraction | None = None


def nmin_program(T: RegionSpec, floor: int = 0) -> tuple[LinearProgram, list[tuple[Fraction, ...]],
                                                          list[dict[int, RecoverySet]]]:
    """The exact minimum-node ILP: integer n_j plus one allocation per generating vector.

    Recovery sets of files with zero demand in a generating vector get no
    variable there; routing rate to them never helps.  The third return value
    maps each column index to its recovery set, one dict per generating vector.
    A positive ``floor`` adds the cut sum n_j >= floor, which is valid whenever
    floor is a proven lower bound on n(R(T)).
    """
    k = T.k
    gens = generating_set(T)
    catalog = recovery_catalog(k)
    ell = num_points(k)
    lp = LinearProgram()
    for j in range(1, ell + 1):
        lp.add_variable(f"n{j}", 1, integer=True)
    if floor > 0:
        lp.add_row({j: 1 for j in range(ell)}, GE, floor, "lower_bound")
    columns = []
    for g, lam in enumerate(gens):
        cols = {lp.add_variable(f"alpha{g + 1}{list(y.points)}"): y for y in catalog if lam[y.file - 1]}
        columns.append(cols)
        for i in range(1, k + 1):
            if lam[i - 1]:
                lp.add_row({c: 1 for c, y in cols.items() if y.file == i}, GE, lam[i - 1], f"demand{g + 1}.{i}")
        for j in range(1, ell + 1):
            row = {c: 1 for c, y in cols.items() if j in y.points}
            if row:
                row[j - 1] = -1
                lp.add_row(row, LE, 0, f"capacity{g + 1}.{j}")
    return lp, gens, columns


def exact_nmin(T: RegionSpec, node_limit: int | None = None, floor: int | None = None) -> ExactResult:
    """Minimum number of nodes covering R(T), with a witness multiset and allocations.

    ``floor`` defaults to the geometric ILP bound, added as a cut so the search
    stops once it meets it.  Pass ``floor=0`` to solve the plain program.
    """
    if T.k > MAX_EXACT_K:
        raise ServiceError(f"exact n(R) is limited to k <= {MAX_EXACT_K}, got k={T.k}")
    # the geometric ILP is small and its optimum is a valid floor for the exact program
    if floor is None:
        floor = cor7_bound(T, "ILP", node_limit=node_limit)
    lp, gens, columns = nmin_program(T, floor)
    res = solve_ilp(lp, node_limit=node_limit)
    if not res.optimal:
        raise AssertionError(f"minimum-node program reported {res.status}")
    ell = num_points(T.k)
    G = PointMultiset(T.k, tuple(int(v) for v in res.solution[:ell]))
    allocations = []
    for lam, cols in zip(gens, columns):
        alloc = Allocation(T.k, {y: res.solution[c] for c, y in cols.items() if res.solution[c]})
        if not verify_allocation(G, lam, alloc):
            raise AssertionError("minimum-node witness allocation fails substitution")
        allocations.append(alloc)
    return ExactResult(G.size, G, gens, allocations, nodes=res.nodes, relaxation=res.relaxation)


def allocate_k2(G: PointMultiset, lam: Sequence) -> Allocation:
    """Closed-form allocation for k = 2 when the three hyperplane inequalities hold."""
    if G.k != 2:
        raise ServiceError(f"closed-form allocation needs k=2, got k={G.k}")
    l1, l2 = _as_demand(lam, 2)
    n1, n2, n3 = (Fraction(G[j]) for j in (1, 2, 3))
    failed = [name for name, ok in (("n2 + n3 >= lambda1", n2 + n3 >= l1),
                                    ("n1 + n3 >= lambda2", n1 + n3 >= l2),
                                    ("n1 + n2 >= lambda1 + lambda2", n1 + n2 >= l1 + l2)) if not ok]
    if failed:
        raise ServiceError("allocation preconditions violated: " + ", ".join(failed))
    e1, e2 = unit_index(1, 2), unit_index(2, 2)
    rates = {
        RecoverySet(1, (e1,)): min(n2, l1),
        RecoverySet(2, (e2,)): min(n1, l2),
        RecoverySet(1, (1, 3)): max(Fraction(0), l1 - n2),
        RecoverySet(2, (2, 3)): max(Fraction(0), l2 - n1),
    }
    return Allocation(2, {y: r for y, r in rates.items() if r})


__all__ = [
    "Allocation", "Coverage", "ExactResult", "ServiceError", "NodeLimitExceeded", "MAX_EXACT_K",
    "verify_allocation", "in_service_region", "check_coverage", "covers_region", "nmin_program",
    "exact_nmin", "allocate_k2",
]

import random
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import size_plus_one_region, simplex_demand_grid, simpl_region
from srrdesign.bounds import geometric_program
from srrdesign.gf2geom import PointMultiset, RecoverySet, num_points, simplex_points
from srrdesign.region import RegionSpec, canonicalize, region_contains
from srrdesign.service import (
    Allocation,
    ServiceError,
    allocate_k2,
    check_coverage,
    covers_region,
    exact_nmin,
    in_service_region,
    verify_allocation,
)


def multisets(max_k=3, top=6):
    return st.integers(1, max_k).flatmap(
        lambda k: st.lists(st.integers(0, top), min_size=num_points(k), max_size=num_points(k))
        .map(lambda n: PointMultiset(k, tuple(n))))


def demand(k, rnd, top=12, den=2):
    return tuple(F(rnd.randint(0, top), den) for _ in range(k))


def test_membership_examples_simplex_k2():
    G = simplex_points({1, 2}, 2)
    alloc = in_service_region(G, (2, 0))
    assert alloc is not None and verify_allocation(G, (2, 0), alloc)
    assert in_service_region(G, (F(3, 2), F(3, 2))) is None
    assert in_service_region(G, (1, 1)) is not None


def test_membership_rejects_bad_demand():
    with pytest.raises(ValueError):
        in_service_region(simplex_points({1, 2}, 2), (1,))
    with pytest.raises(ValueError):
        in_service_region(simplex_points({1, 2}, 2), (1, -1))


def test_witness_allocation_has_no_idle_flow():
    G = PointMultiset(2, (3, 3, 3))
    alloc = in_service_region(G, (1, 2))
    assert alloc.served(1) == 1 and alloc.served(2) == 2


def test_verify_allocation_rejects_bad_witnesses():
    G = PointMultiset(2, (1, 2, 0))
    good = Allocation(2, {RecoverySet(1, (2,)): F(2), RecoverySet(2, (1,)): F(1)})
    assert verify_allocation(G, (2, 1), good)
    assert not verify_allocation(G, (3, 1), good)
    over = Allocation(2, {RecoverySet(1, (2,)): F(3)})
    assert not verify_allocation(G, (3, 0), over)
    # {1, 2} is not a reduced recovery set for file 1
    odd = Allocation(2, {RecoverySet(1, (1, 2)): F(1)})
    assert not verify_allocation(G, (1, 0), odd)
    neg = Allocation(2, {RecoverySet(1, (2,)): F(-1)})
    assert not verify_allocation(G, (0, 0), neg)


@settings(max_examples=40, deadline=None)
@given(multisets(), st.integers(0, 10**6))
def test_service_region_is_convex_and_lower_closed(G, seed):
    rnd = random.Random(seed)
    inside = [lam for lam in (demand(G.k, rnd) for _ in range(12)) if in_service_region(G, lam) is not None]
    for a, b in zip(inside, inside[1:]):
        mid = tuple((x + y) / 2 for x, y in zip(a, b))
        alloc = in_service_region(G, mid)
        assert alloc is not None and verify_allocation(G, mid, alloc)
    for lam in inside:
        lower = tuple(v * F(rnd.randint(0, 4), 4) for v in lam)
        assert in_service_region(G, lower) is not None


@settings(max_examples=40, deadline=None)
@given(multisets(), st.integers(0, 10**6))
def test_every_allocation_reverifies(G, seed):
    rnd = random.Random(seed)
    for _ in range(6):
        lam = demand(G.k, rnd)
        alloc = in_service_region(G, lam)
        if alloc is not None:
            assert verify_allocation(G, lam, alloc)


@pytest.mark.parametrize("S", [{1}, {2}, {1, 2}])
def test_simplex_code_region_k2(S):
    G = simplex_points(S, 2)
    T = simpl_region(S, 2)
    for lam in simplex_demand_grid(S, 2):
        assert (in_service_region(G, lam) is not None) == region_contains(T, lam), lam


@pytest.mark.parametrize("S", [{1}, {3}, {1, 3}, {2, 3}, {1, 2, 3}])
def test_simplex_code_region_k3(S):
    G = simplex_points(S, 3)
    T = simpl_region(S, 3)
    for lam in simplex_demand_grid(S, 3, step=F(1)):
        assert (in_service_region(G, lam) is not None) == region_contains(T, lam), lam


def test_allocate_k2_examples():
    a = allocate_k2(PointMultiset(2, (1, 2, 0)), (2, 1))
    assert dict(a.nonzero()) == {RecoverySet(1, (2,)): 2, RecoverySet(2, (1,)): 1}
    assert allocate_k2(PointMultiset(2, (0, 0, 0)), (0, 0)).nonzero() == []
    # {1, 3} would need a copy of point 1, so (2, 0) is out of reach here
    G = PointMultiset(2, (0, 1, 1))
    with pytest.raises(ServiceError):
        allocate_k2(G, (2, 0))
    assert in_service_region(G, (2, 0)) is None
    c = allocate_k2(PointMultiset(2, (1, 1, 1)), (2, 0))
    assert dict(c.nonzero()) == {RecoverySet(1, (2,)): 1, RecoverySet(1, (1, 3)): 1}


def test_allocate_k2_reports_violated_inequality():
    with pytest.raises(ServiceError, match="n1 \\+ n2 >= lambda1 \\+ lambda2"):
        allocate_k2(PointMultiset(2, (1, 0, 5)), (1, 1))
    with pytest.raises(ServiceError):
        allocate_k2(PointMultiset(3, (1,) * 7), (1, 1, 1))


def test_allocate_k2_grid():
    for n in product(range(4), repeat=3):
        G = PointMultiset(2, n)
        for lam in product([F(v, 2) for v in range(9)], repeat=2):
            ok = (n[1] + n[2] >= lam[0] and n[0] + n[2] >= lam[1] and n[0] + n[1] >= lam[0] + lam[1])
            if ok:
                assert verify_allocation(G, lam, allocate_k2(G, lam))
            # the three inequalities are exactly membership for k = 2
            assert ok == (in_service_region(G, lam) is not None)


def test_integral_geometric_solutions_are_servable():
    # Sigma = X + Y leaves the single generating vector (X, Y)
    for x, y in product(range(4), repeat=2):
        T = RegionSpec.k2(x, y, x + y)
        lp = geometric_program(T)
        for n in product(range(x + y + 1), repeat=3):
            if lp.is_feasible([F(v) for v in n]):
                G = PointMultiset(2, n)
                assert verify_allocation(G, (x, y), allocate_k2(G, (x, y)))


@pytest.mark.parametrize("x,y,s,expected", [(2, 2, 2, 3), (2, 2, 3, 4), (2, 2, 4, 4), (1, 0, 1, 1), (0, 0, 0, 0)])
def test_exact_nmin_k2(x, y, s, expected):
    res = exact_nmin(RegionSpec.k2(x, y, s))
    assert res.n == expected and res.multiset.size == expected
    assert covers_region(res.multiset, RegionSpec.k2(x, y, s))


def test_exact_nmin_size_plus_one():
    res = exact_nmin(size_plus_one_region())
    assert res.n == 6
    assert covers_region(res.multiset, size_plus_one_region())
    for lam, alloc in zip(res.generating_set, res.allocations):
        assert verify_allocation(res.multiset, lam, alloc)


def test_exact_nmin_k4_uniform():
    res = exact_nmin(RegionSpec.uniform(4, 1))
    # one systematic copy per file suffices, and each file needs a node
    assert res.n == 4


@pytest.mark.parametrize("T", [size_plus_one_region(), RegionSpec.k2(2, 2, 3), RegionSpec(3, (3, 1, 4, 1, 5, 2, 6))])
def test_floor_cut_does_not_change_optimum(T):
    assert exact_nmin(T).n == exact_nmin(T, floor=0).n


def test_exact_nmin_limits():
    with pytest.raises(ServiceError):
        exact_nmin(RegionSpec.uniform(5, 1))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=7, max_size=7))
def test_exact_nmin_invariant_under_canonicalization(vals):
    T = RegionSpec(3, tuple(vals))
    res = exact_nmin(T)
    assert res.n == exact_nmin(canonicalize(T)).n
    assert covers_region(res.multiset, T)


def test_coverage_reports_witness():
    cov = check_coverage(simplex_points({1, 2}, 2), RegionSpec.k2(2, 2, 3))
    assert not cov.covered
    assert cov.violated in {(1, 2), (2, 1)}
    with pytest.raises(ServiceError):
        check_coverage(simplex_points({1, 2}, 2), size_plus_one_region())

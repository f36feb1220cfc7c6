"""Explicit storage schemes and their end-to-end verification."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bounds import BoundReport, bound_report
from .gf2geom import PointMultiset, half_simplex_pair, simplex_points, unit_index
from .region import RegionSpec
from .service import Allocation, check_coverage

FULL_SIMPLEX = "FullSimplex"
HALF_SIMPLEX_PAIR = "HalfSimplexPair"
SINGLE_POINT = "SinglePoint"


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class Component:
    kind: str
    args: tuple[int, ...]
    copies: int

    def multiset(self, k: int) -> PointMultiset:
        if self.kind == FULL_SIMPLEX:
            base = simplex_points(self.args, k)
        elif self.kind == HALF_SIMPLEX_PAIR:
            base = half_simplex_pair(self.args[0], self.args[1], k)
        elif self.kind == SINGLE_POINT:
            base = PointMultiset.from_counts(k, {unit_index(self.args[0], k): 1})
        else:
            raise ConstructionError(f"unknown component kind {self.kind!r}")
        return base.scaled(self.copies)


@dataclass
class SchemeRecipe:
    k: int
    components: list[Component]
    claimed_size: int

    @property
    def multiset(self) -> PointMultiset:
        total = PointMultiset.zeros(self.k)
        for c in self.components:
            total = total + c.multiset(self.k)
        return total

    @property
    def size(self) -> int:
        return self.multiset.size


def construct_k2(x: int, y: int, sigma: int) -> SchemeRecipe:
    """Optimal scheme for lambda_1 <= x, lambda_2 <= y, lambda_1 + lambda_2 <= sigma.

    sigma - y replicas of file 1, sigma - x replicas of file 2, and L = x + y - sigma
    halves of Simpl({1, 2}): floor(L/2) full simplex copies plus the pair {e_1, e_2}
    when L is odd.
    """
    for name, v in (("X", x), ("Y", y), ("Sigma", sigma)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ConstructionError(f"{name} must be a nonnegative integer, got {v!r}")
    if sigma < max(x, y):
        raise ConstructionError(f"Sigma < max(X,Y): {sigma} < {max(x, y)}")
    if sigma > x + y:
        raise ConstructionError(f"Sigma > X+Y: {sigma} > {x + y}")
    L = x + y - sigma
    comps = []
    if sigma - y:
        comps.append(Component(SINGLE_POINT, (1,), sigma - y))
    if sigma - x:
        comps.append(Component(SINGLE_POINT, (2,), sigma - x))
    if L // 2:
        comps.append(Component(FULL_SIMPLEX, (1, 2), L // 2))
    if L % 2:
        comps.append(Component(HALF_SIMPLEX_PAIR, (1, 2), 1))
    claimed = -(-(x + y + sigma) // 2)
    recipe = SchemeRecipe(2, comps, claimed)
    if recipe.size != claimed:
        raise AssertionError(f"k=2 recipe has {recipe.size} nodes, expected {claimed}")
    return recipe


def construct_simplex_t_fold(k: int, t: int) -> SchemeRecipe:
    """t copies of every nonzero point; serves T(U) = t * 2**(k-1)."""
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise ConstructionError(f"k must be a positive integer, got {k!r}")
    if isinstance(t, bool) or not isinstance(t, int) or t < 1:
        raise ConstructionError(f"t must be a positive integer, got {t!r}")
    return SchemeRecipe(k, [Component(FULL_SIMPLEX, tuple(range(1, k + 1)), t)], t * (2**k - 1))


@dataclass
class VerificationReport:
    size: int
    covered: bool
    witnesses: list[tuple[tuple[Fraction, ...], Allocation | None]]
    bounds: BoundReport
    certified_optimal: bool
    problems: list[str] = field(default_factory=list)

    @property
    def violated(self) -> tuple[Fraction, ...] | None:
        return next((lam for lam, a in self.witnesses if a is None), None)

    @property
    def verdict(self) -> str:
        if not self.covered:
            return "not covered"
        return "certified optimal" if self.certified_optimal else "covered, optimality not certified"


def verify_scheme(recipe: SchemeRecipe | PointMultiset, T: RegionSpec, include_ilp: bool = True) -> VerificationReport:
    """Coverage with witnesses, the lower bounds, and whether they meet."""
    G = recipe.multiset if isinstance(recipe, SchemeRecipe) else recipe
    problems = []
    if isinstance(recipe, SchemeRecipe) and recipe.claimed_size != G.size:
        problems.append(f"claimed size {recipe.claimed_size} but the multiset has {G.size} points")
    if G.k != T.k:
        raise ConstructionError(f"scheme has k={G.k} but region has k={T.k}")
    cov = check_coverage(G, T)
    report = bound_report(T, include_ilp=include_ilp)
    if not cov.covered:
        problems.append("generating vector not servable: " + str(tuple(str(v) for v in cov.violated)))
    if cov.covered and G.size < report.best:
        problems.append(f"size {G.size} is below the lower bound {report.best}")
    certified = cov.covered and G.size == report.best
    return VerificationReport(G.size, cov.covered, cov.witnesses, report, certified, problems)

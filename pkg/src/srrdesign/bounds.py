"""Lower bounds on the minimum number of storage nodes n(R(T)).

Every hyperplane H of PG(k-1, 2) gives a valid inequality

    sum_{j : v_j not in H} n_j  >=  max_g  sum_{s in E(H)} g_s

over the generating vectors g, where E(H) lists the files whose unit vector
lies outside H.  The geometric ILP minimises the total node count under all
2**k - 1 of these.  When no constraint of T is strictly redundant the right
hand side equals T(E(H)), and aggregating the inequalities in different ways
gives the closed-form bounds below.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .gf2geom import Hyperplane, enumerate_hyperplanes, num_points, support
from .ratlp import GE, LinearProgram, ceil_fraction, format_rational, solve_ilp, solve_lp
from .region import RegionSpec, generating_set, is_strictly_redundant


class BoundError(ValueError):
    pass


@dataclass(frozen=True)
class HyperplaneInequality:
    hyperplane: Hyperplane
    rhs: Fraction

    @property
    def lhs_points(self) -> tuple[int, ...]:
        return tuple(sorted(self.hyperplane.outside))

    def holds(self, n) -> bool:
        return sum(n[j - 1] for j in self.lhs_points) >= self.rhs

    def describe(self) -> str:
        return " + ".join(f"n{j}" for j in self.lhs_points) + f" >= {format_rational(self.rhs)}"


def hyperplane_inequalities(T: RegionSpec, gens=None) -> list[HyperplaneInequality]:
    """One inequality per hyperplane, in ascending coefficient-mask order."""
    gens = generating_set(T) if gens is None else gens
    out = []
    for h in enumerate_hyperplanes(T.k):
        rhs = max(sum((g[s - 1] for s in h.excluded_units), Fraction(0)) for g in gens)
        out.append(HyperplaneInequality(h, rhs))
    return out


def geometric_program(T: RegionSpec, inequalities=None) -> LinearProgram:
    ineqs = hyperplane_inequalities(T) if inequalities is None else inequalities
    lp = LinearProgram()
    for j in range(1, num_points(T.k) + 1):
        lp.add_variable(f"n{j}", 1, integer=True)
    for q in ineqs:
        lp.add_row({j - 1: 1 for j in q.lhs_points}, GE, q.rhs, f"H{q.hyperplane.coeff}")
    return lp


def cor7_relaxation(T: RegionSpec) -> Fraction:
    """Exact optimum of the LP relaxation of the geometric program."""
    return solve_lp(geometric_program(T)).objective


def cor7_bound(T: RegionSpec, mode: str = "ILP", node_limit: int | None = None) -> int:
    mode = mode.upper()
    if mode == "LP":
        return ceil_fraction(cor7_relaxation(T))
    if mode == "ILP":
        return int(solve_ilp(geometric_program(T), node_limit=node_limit).objective)
    raise BoundError(f"mode must be 'LP' or 'ILP', got {mode!r}")


def no_strict_redundancy(T: RegionSpec) -> bool:
    return not any(is_strictly_redundant(T, files) for files, _ in T.items())


def thm8_bound(T: RegionSpec, applicable: bool | None = None) -> tuple[int, bool]:
    """ceil(sum of all T(U) / 2**(k-1))."""
    value = ceil_fraction(Fraction(T.total(), 2 ** (T.k - 1)))
    return value, no_strict_redundancy(T) if applicable is None else applicable


@dataclass
class IndexBound:
    index: int
    alpha: int
    beta: int
    value: int


def thm10_bound(T: RegionSpec, applicable: bool | None = None) -> tuple[list[IndexBound], int, bool]:
    """Per-file bound ceil((alpha_i + beta_i) / 2), from the inequalities split on whether E(H) holds i."""
    k = T.k
    if k < 2:
        raise BoundError("the per-file bound needs k >= 2")
    scale = 2 ** (k - 2)
    per = []
    for i in range(1, k + 1):
        without = sum(T.at(m) for m in T.masks() if i not in support(m, k))
        with_i = sum(T.at(m) for m in T.masks() if i in support(m, k))
        a = ceil_fraction(Fraction(without, scale))
        b = ceil_fraction(Fraction(with_i, scale))
        per.append(IndexBound(i, a, b, ceil_fraction(Fraction(a + b, 2))))
    return per, max(p.value for p in per), no_strict_redundancy(T) if applicable is None else applicable


def thm11_bound(T: RegionSpec, applicable: bool | None = None) -> tuple[list[tuple[int, int]], int, bool]:
    """Per-point bound: sum T(U) over U meeting the support of v_j evenly, over 2**(k-2)."""
    k = T.k
    if k < 2:
        raise BoundError("the per-point bound needs k >= 2")
    scale = 2 ** (k - 2)
    per = []
    for j in range(1, num_points(k) + 1):
        # U & j as masks is exactly U intersected with the support of v_j
        total = sum(T.at(m) for m in T.masks() if bin(m & j).count("1") % 2 == 0)
        per.append((j, ceil_fraction(Fraction(total, scale))))
    return per, max(v for _, v in per), no_strict_redundancy(T) if applicable is None else applicable


@dataclass
class BoundReport:
    k: int
    thm8: int
    thm10: int | None
    thm10_per_index: list[IndexBound]
    thm11: int | None
    thm11_per_point: list[tuple[int, int]]
    cor7_lp_value: Fraction
    cor7_lp: int
    cor7_ilp: int | None
    closed_form_applicable: bool
    strictly_redundant: list[tuple[int, ...]]
    inequalities: list[HyperplaneInequality] = field(default_factory=list)

    @property
    def best(self) -> int:
        cands = [self.cor7_lp]
        if self.cor7_ilp is not None:
            cands.append(self.cor7_ilp)
        if self.closed_form_applicable:
            cands += [v for v in (self.thm8, self.thm10, self.thm11) if v is not None]
        return max(cands)

    def rows(self) -> list[tuple[str, int | None, bool, str]]:
        ok = self.closed_form_applicable
        why = "" if ok else "some constraint is strictly redundant: " + ", ".join(
            str(list(u)) for u in self.strictly_redundant)
        rows = [("thm8", self.thm8, ok, why or "sum of T over 2^(k-1)")]
        if self.thm10 is not None:
            rows.append(("thm10", self.thm10, ok, why or "max over files i"))
        if self.thm11 is not None:
            rows.append(("thm11", self.thm11, ok, why or "max over points j"))
        rows.append(("cor7_lp", self.cor7_lp, True, f"ceiling of {format_rational(self.cor7_lp_value)}"))
        if self.cor7_ilp is not None:
            rows.append(("cor7_ilp", self.cor7_ilp, True, "geometric ILP optimum"))
        rows.append(("best", self.best, True, "max of applicable bounds"))
        return rows

    def to_markdown(self) -> str:
        lines = ["| bound | value | applicable | notes |", "|---|---|---|---|"]
        lines += [f"| {name} | {value} | {'yes' if ok else 'no'} | {note} |" for name, value, ok, note in self.rows()]
        return "\n".join(lines) + "\n"


def inequalities_markdown(ineqs: list[HyperplaneInequality]) -> str:
    """Table of the hyperplane inequalities, ordered by the number of excluded units."""
    lines = ["| hyperplane | excluded units | inequality |", "|---|---|---|"]
    for q in sorted(ineqs, key=lambda q: (len(q.hyperplane.excluded_units), sorted(q.hyperplane.excluded_units))):
        h = q.hyperplane
        eq = " + ".join(f"x{i}" for i in sorted(h.excluded_units)) + " = 0"
        units = ", ".join(f"e{i}" for i in sorted(h.excluded_units))
        lines.append(f"| {eq} | {units} | {q.describe()} |")
    return "\n".join(lines) + "\n"


def bound_report(T: RegionSpec, include_ilp: bool = True, node_limit: int | None = None) -> BoundReport:
    redundant = [files for files, _ in T.items() if is_strictly_redundant(T, files)]
    ok = not redundant
    ineqs = hyperplane_inequalities(T)
    lp = geometric_program(T, ineqs)
    relax = solve_lp(lp).objective
    ilp = int(solve_ilp(lp, node_limit=node_limit).objective) if include_ilp else None
    thm8, _ = thm8_bound(T, ok)
    if T.k >= 2:
        per10, thm10, _ = thm10_bound(T, ok)
        per11, thm11, _ = thm11_bound(T, ok)
    else:
        per10, thm10, per11, thm11 = [], None, [], None
    return BoundReport(T.k, thm8, thm10, per10, thm11, per11, relax, ceil_fraction(relax), ilp, ok, redundant, ineqs)

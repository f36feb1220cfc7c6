"""Exact rational linear and integer programming.

Minimisation only, every variable nonnegative, rows ``a.x <= b`` or ``a.x >= b``.
The LP path is a two-phase primal simplex on a sparse tableau of
:class:`fractions.Fraction` entries with Bland's rule, so it cannot cycle and
never rounds.  Optimal LP results carry the dual vector as a certificate;
:func:`verify_solution` checks primal feasibility, dual feasibility and equal
objective values by substitution, without trusting the solver.

Integer programs are solved by depth-first branch-and-bound on the LP
relaxation, branching on the most fractional variable (lowest index on ties,
down-branch first).
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

LE = "<="
GE = ">="

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
UNBOUNDED = "Unbounded"

DEFAULT_NODE_LIMIT = 10**6


class LPError(ValueError):
    """Malformed linear program."""


class NodeLimitExceeded(RuntimeError):
    def __init__(self, limit: int):
        super().__init__(f"branch-and-bound node limit of {limit} exceeded")
        self.limit = limit


def node_limit_from_env() -> int:
    raw = os.environ.get("SRR_NODE_LIMIT")
    if not raw:
        return DEFAULT_NODE_LIMIT
    try:
        limit = int(raw)
    except ValueError:
        raise LPError(f"SRR_NODE_LIMIT must be an integer, got {raw!r}") from None
    if limit < 1:
        raise LPError("SRR_NODE_LIMIT must be positive")
    return limit


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise LPError(f"floating point value {x!r} is not allowed; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


@dataclass
class Row:
    coeffs: dict[int, Fraction]
    relation: str
    rhs: Fraction
    name: str = ""

    def activity(self, x: Sequence[Fraction]) -> Fraction:
        return sum((v * x[j] for j, v in self.coeffs.items()), Fraction(0))

    def satisfied(self, x: Sequence[Fraction]) -> bool:
        act = self.activity(x)
        return act <= self.rhs if self.relation == LE else act >= self.rhs


@dataclass
class LinearProgram:
    """``min c.x`` subject to rows, ``x >= 0``; ``integer[j]`` marks integral variables."""

    objective: list[Fraction] = field(default_factory=list)
    rows: list[Row] = field(default_factory=list)
    integer: list[bool] = field(default_factory=list)
    var_names: list[str] = field(default_factory=list)

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def add_variable(self, name: str = "", cost=0, integer: bool = False) -> int:
        self.objective.append(as_fraction(cost))
        self.integer.append(bool(integer))
        self.var_names.append(name or f"x{len(self.objective)}")
        return len(self.objective) - 1

    def add_row(self, coeffs: Mapping[int, object], relation: str, rhs, name: str = "") -> Row:
        if relation not in (LE, GE):
            raise LPError(f"relation must be '<=' or '>=', got {relation!r}")
        clean = {}
        for j, v in coeffs.items():
            if not 0 <= j < self.num_vars:
                raise LPError(f"row {name!r} references variable {j} but the program has {self.num_vars}")
            v = as_fraction(v)
            if v:
                clean[j] = clean.get(j, Fraction(0)) + v
        row = Row({j: v for j, v in sorted(clean.items()) if v}, relation, as_fraction(rhs), name or f"r{len(self.rows) + 1}")
        self.rows.append(row)
        return row

    def check(self) -> None:
        n = self.num_vars
        if len(self.integer) != n or len(self.var_names) != n:
            raise LPError("objective, integrality flags and variable names differ in length")
        for row in self.rows:
            if row.relation not in (LE, GE):
                raise LPError(f"row {row.name!r} has relation {row.relation!r}")
            if any(not 0 <= j < n for j in row.coeffs):
                raise LPError(f"row {row.name!r} references a variable outside [0, {n})")

    def objective_value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), Fraction(0))

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        return len(x) == self.num_vars and all(v >= 0 for v in x) and all(r.satisfied(x) for r in self.rows)


@dataclass
class Certificate:
    """Final simplex basis and the matching dual prices, one per row."""

    basis: tuple[str, ...]
    duals: tuple[Fraction, ...]


@dataclass
class SolveResult:
    status: str
    objective: Fraction | None = None
    solution: list[Fraction] | None = None
    certificate: Certificate | None = None
    pivots: int = 0
    nodes: int = 0
    relaxation: Fraction | None = None
    integral: bool = False

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Sparse simplex tableau; rows are dicts column -> nonzero Fraction."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[dict[int, Fraction]] = []
        self.rhs: list[Fraction] = []
        self.basis: list[int] = []
        self.obj: dict[int, Fraction] = {}
        self.obj_rhs = Fraction(0)
        self.pivots = 0

    def set_objective(self, cost: Mapping[int, Fraction]) -> None:
        self.obj = {j: v for j, v in cost.items() if v}
        self.obj_rhs = Fraction(0)
        for i, b in enumerate(self.basis):
            f = self.obj.get(b)
            if f:
                self._eliminate(self.obj, self.rows[i], f)
                self.obj_rhs -= f * self.rhs[i]

    @staticmethod
    def _eliminate(target: dict[int, Fraction], prow: dict[int, Fraction], f: Fraction) -> None:
        for j, v in prow.items():
            nv = target.get(j, 0) - f * v
            if nv:
                target[j] = nv
            else:
                target.pop(j, None)

    def pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        piv = prow[c]
        if piv != 1:
            prow = {j: v / piv for j, v in prow.items()}
            self.rows[r] = prow
            self.rhs[r] /= piv
        for i, row in enumerate(self.rows):
            if i != r:
                f = row.get(c)
                if f:
                    self._eliminate(row, prow, f)
                    self.rhs[i] -= f * self.rhs[r]
        f = self.obj.get(c)
        if f:
            self._eliminate(self.obj, prow, f)
            self.obj_rhs -= f * self.rhs[r]
        self.basis[r] = c
        self.pivots += 1

    def copy(self) -> _Tableau:
        other = _Tableau(self.ncols)
        other.rows = [dict(row) for row in self.rows]
        other.rhs = list(self.rhs)
        other.basis = list(self.basis)
        other.obj = dict(self.obj)
        other.obj_rhs = self.obj_rhs
        return other

    def add_bound(self, var: int, relation: str, bound: Fraction) -> None:
        """Append ``x_var <= bound`` or ``x_var >= bound`` with a fresh slack column as basic.

        ``var`` must be basic; the new row is written in nonbasic terms, so its
        right-hand side goes negative when the current point violates it.
        """
        r = self.basis.index(var)
        s = self.ncols
        self.ncols += 1
        sign = 1 if relation == LE else -1
        row = {j: -sign * v for j, v in self.rows[r].items() if j != var}
        row[s] = Fraction(1)
        self.rows.append(row)
        self.rhs.append(sign * (bound - self.rhs[r]))
        self.basis.append(s)

    def dual_run(self, banned: set[int]) -> str:
        """Dual simplex from a dual-feasible basis; smallest-index choices prevent cycling."""
        while True:
            leaving = [(self.basis[i], i) for i, b in enumerate(self.rhs) if b < 0]
            if not leaving:
                return OPTIMAL
            _, r = min(leaving)
            best = None
            for j, a in self.rows[r].items():
                if a < 0 and j not in banned:
                    key = (self.obj.get(j, Fraction(0)) / -a, j)
                    if best is None or key < best:
                        best = key
            if best is None:
                return INFEASIBLE
            self.pivot(r, best[1])

    def run(self, banned: set[int]) -> str:
        """Primal simplex with Bland's rule on the current objective."""
        while True:
            entering = [j for j, v in self.obj.items() if v < 0 and j not in banned]
            if not entering:
                return OPTIMAL
            c = min(entering)
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(c)
                if a is not None and a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], c)


def _solve_rows(objective: Sequence[Fraction], rows: Sequence[Row], n: int,
                var_names: Sequence[str] | None = None) -> SolveResult:
    return _solve_tableau(objective, rows, n, var_names)[0]


def _solve_tableau(objective: Sequence[Fraction], rows: Sequence[Row], n: int,
                   var_names: Sequence[str] | None = None) -> tuple[SolveResult, _Tableau | None, set[int]]:
    m = len(rows)
    # columns: [0, n) structural, n + r slack/surplus of row r, n + m + r artificial of row r
    tab = _Tableau(n + 2 * m)
    signs, identity, artificials = [], [], []
    for r, row in enumerate(rows):
        coeffs, rhs, rel = dict(row.coeffs), row.rhs, row.relation
        sign = 1
        if rhs < 0 or (rhs == 0 and rel == GE):
            sign = -1
            coeffs = {j: -v for j, v in coeffs.items()}
            rhs = -rhs
            rel = LE if rel == GE else GE
        if rel == LE:
            coeffs[n + r] = Fraction(1)
            ident = n + r
        else:
            coeffs[n + r] = Fraction(-1)
            coeffs[n + m + r] = Fraction(1)
            ident = n + m + r
            artificials.append(ident)
        tab.rows.append(coeffs)
        tab.rhs.append(rhs)
        tab.basis.append(ident)
        signs.append(sign)
        identity.append(ident)

    art = set(artificials)
    if art:
        tab.set_objective({a: Fraction(1) for a in art})
        tab.run(banned=set())
        if -tab.obj_rhs > 0:
            return SolveResult(INFEASIBLE, pivots=tab.pivots), None, art
        for i, b in enumerate(tab.basis):
            if b in art:
                cols = [j for j, v in tab.rows[i].items() if v and j not in art]
                if cols:
                    tab.pivot(i, min(cols))
                # otherwise the row is redundant; the artificial stays basic at zero

    tab.set_objective({j: c for j, c in enumerate(objective)})
    status = tab.run(banned=art)
    if status == UNBOUNDED:
        return SolveResult(UNBOUNDED, pivots=tab.pivots), None, art

    x = _primal(tab, n)
    duals = tuple(-tab.obj.get(identity[r], Fraction(0)) * signs[r] for r in range(m))
    names = list(var_names) if var_names else [f"x{j + 1}" for j in range(n)]

    def colname(b: int) -> str:
        if b < n:
            return names[b]
        if b < n + m:
            return f"slack[{rows[b - n].name}]"
        return f"artificial[{rows[b - n - m].name}]"

    value = sum((c * v for c, v in zip(objective, x)), Fraction(0))
    res = SolveResult(OPTIMAL, value, x, Certificate(tuple(colname(b) for b in tab.basis), duals),
                      pivots=tab.pivots)
    return res, tab, art


def _primal(tab: _Tableau, n: int) -> list[Fraction]:
    x = [Fraction(0)] * n
    for i, b in enumerate(tab.basis):
        if b < n:
            x[b] = tab.rhs[i]
    return x


def _dual_certifies(objective: Sequence[Fraction], rows: Sequence[Row], x: Sequence[Fraction],
                    duals: Sequence[Fraction]) -> bool:
    if len(duals) != len(rows):
        return False
    for row, y in zip(rows, duals):
        if (row.relation == LE and y > 0) or (row.relation == GE and y < 0):
            return False
    reduced = list(objective)
    for row, y in zip(rows, duals):
        if y:
            for j, v in row.coeffs.items():
                reduced[j] -= y * v
    if any(d < 0 for d in reduced):
        return False
    dual_value = sum((y * row.rhs for row, y in zip(rows, duals)), Fraction(0))
    primal_value = sum((c * v for c, v in zip(objective, x)), Fraction(0))
    return dual_value == primal_value


def solve_lp(lp: LinearProgram) -> SolveResult:
    """Solve the LP relaxation exactly (integrality flags ignored)."""
    lp.check()
    res = _solve_rows(lp.objective, lp.rows, lp.num_vars, lp.var_names)
    if res.optimal:
        if not lp.is_feasible(res.solution) or not _dual_certifies(lp.objective, lp.rows, res.solution,
                                                                    res.certificate.duals):
            raise AssertionError("simplex returned a solution that fails its own certificate")
        res.relaxation = res.objective
    return res


def _integral_objective(lp: LinearProgram) -> bool:
    return all(c.denominator == 1 and (not c or lp.integer[j]) for j, c in enumerate(lp.objective))


def solve_ilp(lp: LinearProgram, node_limit: int | None = None) -> SolveResult:
    """Branch-and-bound over the variables flagged integral."""
    lp.check()
    limit = node_limit_from_env() if node_limit is None else node_limit
    int_vars = [j for j, flag in enumerate(lp.integer) if flag]
    round_bound = _integral_objective(lp)

    def bound_of(value: Fraction) -> Fraction:
        return Fraction(ceil_fraction(value)) if round_bound else value

    root, tab, banned = _solve_tableau(lp.objective, lp.rows, lp.num_vars, lp.var_names)
    nodes, pivots = 1, root.pivots
    if nodes > limit:
        raise NodeLimitExceeded(limit)
    if not root.optimal:
        return SolveResult(root.status, pivots=pivots, nodes=nodes)
    relaxation = root.objective

    best: SolveResult | None = None
    # children re-optimise the parent tableau with one extra bound row (dual simplex)
    stack: list[tuple[_Tableau, int, str, Fraction, Fraction] | None] = [None]
    while stack:
        item = stack.pop()
        if item is None:
            res = root
        else:
            parent, j, rel, bound, parent_value = item
            # a child can only do worse than its parent
            if best is not None and bound_of(parent_value) >= best.objective:
                continue
            nodes += 1
            if nodes > limit:
                raise NodeLimitExceeded(limit)
            tab = parent.copy()
            tab.add_bound(j, rel, bound)
            before = tab.pivots
            status = tab.dual_run(banned)
            pivots += tab.pivots - before
            if status != OPTIMAL:
                continue
            x = _primal(tab, lp.num_vars)
            res = SolveResult(OPTIMAL, lp.objective_value(x), x)
        if best is not None and bound_of(res.objective) >= best.objective:
            continue
        frac = [(abs(res.solution[j] - math.floor(res.solution[j]) - Fraction(1, 2)), j)
                for j in int_vars if res.solution[j].denominator != 1]
        if not frac:
            best = res
            continue
        _, j = min(frac)
        v = res.solution[j]
        stack.append((tab, j, GE, Fraction(math.floor(v) + 1), res.objective))
        stack.append((tab, j, LE, Fraction(math.floor(v)), res.objective))

    if best is None:
        return SolveResult(INFEASIBLE, pivots=pivots, nodes=nodes, relaxation=relaxation)
    best = SolveResult(OPTIMAL, best.objective, best.solution, best.certificate)
    best.pivots, best.nodes, best.relaxation, best.integral = pivots, nodes, relaxation, True
    if not lp.is_feasible(best.solution):
        raise AssertionError("branch-and-bound incumbent violates the program")
    return best


def verify_solution(lp: LinearProgram, result: SolveResult) -> bool:
    """Re-check an Optimal result by exact substitution.

    Always checks feasibility and the reported objective value.  LP results
    must also carry a dual certificate proving optimality; integer results
    must be integral on every flagged variable.
    """
    if result is None or not result.optimal or result.solution is None:
        return False
    x = result.solution
    if not lp.is_feasible(x) or lp.objective_value(x) != result.objective:
        return False
    if result.integral:
        return all(x[j].denominator == 1 for j, flag in enumerate(lp.integer) if flag)
    if result.certificate is None:
        return False
    return _dual_certifies(lp.objective, lp.rows, x, result.certificate.duals)


def format_rational(x: Fraction) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dump_lp(lp: LinearProgram) -> str:
    """Plain-text dump: one line per row, ``name | c1 c2 ... | rel | rhs``.

    The first line is the objective (``min | ... |``), the last lists the
    integral variables by name.
    """
    lines = ["# vars " + " ".join(lp.var_names),
             "min | " + " ".join(format_rational(c) for c in lp.objective)]
    for row in lp.rows:
        dense = [row.coeffs.get(j, Fraction(0)) for j in range(lp.num_vars)]
        lines.append(f"{row.name} | {' '.join(format_rational(v) for v in dense)} | {row.relation} | "
                     f"{format_rational(row.rhs)}")
    lines.append("int | " + " ".join(n for n, f in zip(lp.var_names, lp.integer) if f))
    return "\n".join(lines) + "\n"


def load_lp(text: str) -> LinearProgram:
    """Inverse of :func:`dump_lp`."""
    lp = LinearProgram()
    names: list[str] = []
    integral: set[str] = set()
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("# vars"):
            names = line[len("# vars"):].split()
            continue
        parts = [p.strip() for p in line.split("|")]
        if parts[0] == "min":
            for name, c in zip(names or [None] * len(parts[1].split()), parts[1].split()):
                lp.add_variable(name or "", Fraction(c))
        elif parts[0] == "int":
            integral = set(parts[1].split())
        else:
            if len(parts) != 4:
                raise LPError(f"cannot parse LP row: {raw!r}")
            coeffs = {j: Fraction(v) for j, v in enumerate(parts[1].split())}
            lp.add_row(coeffs, parts[2], Fraction(parts[3]), parts[0])
    lp.integer = [n in integral for n in lp.var_names]
    return lp


__all__ = [
    "LE", "GE", "OPTIMAL", "INFEASIBLE", "UNBOUNDED", "Row", "LinearProgram", "SolveResult",
    "Certificate", "LPError", "NodeLimitExceeded", "solve_lp", "solve_ilp", "verify_solution",
    "dump_lp", "load_lp", "format_rational", "ceil_fraction", "as_fraction",
]


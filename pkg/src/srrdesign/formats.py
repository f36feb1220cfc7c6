"""JSON wire formats.

Rationals are written as ``"p/q"`` strings (``"3"`` when integral) and never as
decimals.  Points are always referred to by index.

Region:     {"k": 2, "T": [{"subset": [1], "value": 2}, ...]}   every nonempty subset listed
Demand:     {"lambda": [1, "3/2"]}
Multiset:   {"k": 3, "n": {"1": 2, "4": 2}}                     omitted indices are 0
Allocation: [{"file": 1, "recovery": [2], "rate": "1"}, ...]
Recipe:     {"k": 2, "components": [{"kind": "SinglePoint", "args": [1], "copies": 1}], "multiset": {...}}
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .bounds import BoundReport, HyperplaneInequality
from .construct import Component, SchemeRecipe, VerificationReport
from .gf2geom import GeometryError, PointMultiset, RecoverySet, num_points
from .ratlp import format_rational
from .region import RegionError, RegionSpec
from .service import Allocation, ExactResult


class FormatError(ValueError):
    pass


_RATIONAL = re.compile(r"-?\d+(/\d+)?")


def parse_rational(raw: Any, where: str) -> Fraction:
    if isinstance(raw, int) and not isinstance(raw, bool):
        return Fraction(raw)
    if isinstance(raw, str) and _RATIONAL.fullmatch(raw.strip()):
        try:
            return Fraction(raw.strip())
        except ZeroDivisionError:
            pass
    raise FormatError(f"{where}: expected an integer or 'p/q' string, got {raw!r}")


def _require(obj: Any, key: str, where: str):
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected a JSON object")
    if key not in obj:
        raise FormatError(f"{where}: missing field '{key}'")
    return obj[key]


def _int_field(raw: Any, where: str, minimum: int = 0) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int) or raw < minimum:
        raise FormatError(f"{where}: expected an integer >= {minimum}, got {raw!r}")
    return raw


def region_to_json(T: RegionSpec) -> dict:
    return {"k": T.k, "T": [{"subset": list(files), "value": v} for files, v in T.items()]}


def region_from_json(obj: Any) -> RegionSpec:
    k = _int_field(_require(obj, "k", "region"), "region.k", 1)
    entries = _require(obj, "T", "region")
    if not isinstance(entries, list):
        raise FormatError("region.T: expected a list of {subset, value} objects")
    table = {}
    for n, e in enumerate(entries):
        where = f"region.T[{n}]"
        subset = _require(e, "subset", where)
        if not isinstance(subset, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in subset):
            raise FormatError(f"{where}.subset: expected a list of file indices")
        value = _int_field(_require(e, "value", where), f"{where}.value")
        key = tuple(sorted(subset))
        if key in table:
            raise FormatError(f"{where}.subset: {list(key)} appears twice")
        table[key] = value
    try:
        return RegionSpec.from_subsets(k, table)
    except RegionError as exc:
        raise FormatError(f"region.T: {exc}") from None


def demand_to_json(lam) -> dict:
    return {"lambda": [int(v) if Fraction(v).denominator == 1 else format_rational(v) for v in lam]}


def demand_from_json(obj: Any) -> tuple[Fraction, ...]:
    raw = _require(obj, "lambda", "demand")
    if not isinstance(raw, list) or not raw:
        raise FormatError("demand.lambda: expected a nonempty list")
    lam = tuple(parse_rational(v, f"demand.lambda[{i}]") for i, v in enumerate(raw))
    for i, v in enumerate(lam):
        if v < 0:
            raise FormatError(f"demand.lambda[{i}]: must be nonnegative")
    return lam


def multiset_to_json(G: PointMultiset) -> dict:
    return {"k": G.k, "n": {str(j): c for j, c in G.counts().items()}}


def multiset_from_json(obj: Any) -> PointMultiset:
    k = _int_field(_require(obj, "k", "multiset"), "multiset.k", 1)
    raw = _require(obj, "n", "multiset")
    if not isinstance(raw, dict):
        raise FormatError("multiset.n: expected an object mapping point index to multiplicity")
    counts = {}
    for key, c in raw.items():
        try:
            j = int(key)
        except ValueError:
            raise FormatError(f"multiset.n: key {key!r} is not a point index") from None
        if not 1 <= j <= num_points(k):
            raise FormatError(f"multiset.n: point {j} out of range [1, {num_points(k)}]")
        counts[j] = _int_field(c, f"multiset.n[{key}]")
    try:
        return PointMultiset.from_counts(k, counts)
    except GeometryError as exc:
        raise FormatError(f"multiset: {exc}") from None


def allocation_to_json(alloc: Allocation) -> list:
    return [{"file": y.file, "recovery": list(y.points), "rate": format_rational(r)} for y, r in alloc.nonzero()]


def allocation_from_json(obj: Any, k: int) -> Allocation:
    if not isinstance(obj, list):
        raise FormatError("allocation: expected a list")
    rates = {}
    for n, e in enumerate(obj):
        where = f"allocation[{n}]"
        file = _int_field(_require(e, "file", where), f"{where}.file", 1)
        rec = _require(e, "recovery", where)
        if not isinstance(rec, list):
            raise FormatError(f"{where}.recovery: expected a list of point indices")
        y = RecoverySet(file, tuple(sorted(rec)))
        rates[y] = rates.get(y, Fraction(0)) + parse_rational(_require(e, "rate", where), f"{where}.rate")
    return Allocation(k, rates)


def component_to_json(c: Component) -> dict:
    return {"kind": c.kind, "args": list(c.args), "copies": c.copies}


def recipe_to_json(r: SchemeRecipe) -> dict:
    return {"k": r.k, "components": [component_to_json(c) for c in r.components],
            "multiset": multiset_to_json(r.multiset), "claimedSize": r.claimed_size}


def recipe_from_json(obj: Any) -> SchemeRecipe:
    k = _int_field(_require(obj, "k", "recipe"), "recipe.k", 1)
    comps = []
    for n, c in enumerate(_require(obj, "components", "recipe")):
        where = f"recipe.components[{n}]"
        comps.append(Component(_require(c, "kind", where), tuple(_require(c, "args", where)),
                               _int_field(_require(c, "copies", where), f"{where}.copies")))
    recipe = SchemeRecipe(k, comps, obj.get("claimedSize", 0))
    if "claimedSize" not in obj:
        recipe.claimed_size = recipe.size
    return recipe


def inequality_to_json(q: HyperplaneInequality) -> dict:
    h = q.hyperplane
    return {"coeff": list(h.coeff_vector()), "excludedUnits": sorted(h.excluded_units),
            "lhsPoints": list(q.lhs_points), "rhs": format_rational(q.rhs)}


def bounds_to_json(b: BoundReport) -> dict:
    return {
        "thm8": b.thm8,
        "thm10": b.thm10,
        "thm10PerIndex": [{"i": p.index, "alpha": p.alpha, "beta": p.beta, "value": p.value} for p in b.thm10_per_index],
        "thm11": b.thm11,
        "thm11PerPoint": [{"j": j, "value": v} for j, v in b.thm11_per_point],
        "cor7LpValue": format_rational(b.cor7_lp_value),
        "cor7Lp": b.cor7_lp,
        "cor7Ilp": b.cor7_ilp,
        "closedFormApplicable": b.closed_form_applicable,
        "strictlyRedundant": [list(u) for u in b.strictly_redundant],
        "best": b.best,
        "inequalities": [inequality_to_json(q) for q in b.inequalities],
    }


def witnesses_to_json(witnesses) -> list:
    return [{"lambda": demand_to_json(lam)["lambda"], "servable": a is not None,
             "allocation": allocation_to_json(a) if a is not None else None} for lam, a in witnesses]


def exact_to_json(r: ExactResult) -> dict:
    return {"n": r.n, "multiset": multiset_to_json(r.multiset),
            "generatingSet": [demand_to_json(g)["lambda"] for g in r.generating_set],
            "allocations": [allocation_to_json(a) for a in r.allocations], "nodes": r.nodes}


def verification_to_json(v: VerificationReport) -> dict:
    return {"size": v.size, "covered": v.covered, "verdict": v.verdict,
            "certifiedOptimal": v.certified_optimal, "witnesses": witnesses_to_json(v.witnesses),
            "bounds": bounds_to_json(v.bounds), "problems": v.problems}


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"

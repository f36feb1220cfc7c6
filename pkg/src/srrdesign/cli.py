"""``srr`` command line.

Exit codes: 0 success or affirmative verdict, 1 negative verdict, 2 invalid
input, 3 branch-and-bound node cap hit (``SRR_NODE_LIMIT`` overrides the cap).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import formats as fmt
from .bounds import bound_report, inequalities_markdown
from .construct import ConstructionError, construct_k2, construct_simplex_t_fold, verify_scheme
from .gf2geom import GeometryError
from .ratlp import LPError, NodeLimitExceeded, format_rational, node_limit_from_env
from .region import RegionError, RegionSpec, canonicalize, generating_set, region_contains, region_vertices
from .service import MAX_EXACT_K, ServiceError, check_coverage, exact_nmin, in_service_region

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
FORMATS = ("json", "markdown", "csv")


class InputError(Exception):
    pass


class Output:
    """One command result in all three renderings."""

    def __init__(self, data, markdown: str | None = None, table: list[list] | None = None, code: int = EXIT_OK):
        self.data, self.markdown, self.table, self.code = data, markdown, table, code

    def render(self, form: str) -> str:
        if form == "json":
            return fmt.dumps(self.data)
        if form == "markdown":
            return self.markdown if self.markdown is not None else "```json\n" + fmt.dumps(self.data) + "```\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in self.table if self.table is not None else _flatten(self.data):
            writer.writerow(row)
        return buf.getvalue()


def _flatten(data, prefix: str = "") -> list[list]:
    if isinstance(data, dict):
        rows = [["key", "value"]] if not prefix else []
        for key, v in data.items():
            rows += _flatten(v, f"{prefix}.{key}" if prefix else str(key))
        return rows
    if isinstance(data, list):
        return [[prefix, json.dumps(data)]]
    return [[prefix, data]]


def _load(arg: str, what: str):
    try:
        if arg == "-":
            text = sys.stdin.read()
        elif arg.lstrip().startswith(("{", "[")):
            text = arg
        else:
            text = Path(arg).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {what} {arg!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} is not valid JSON: {exc}") from None


def _region(arg: str) -> RegionSpec:
    return fmt.region_from_json(_load(arg, "region"))


def _vec_row(v) -> list[str]:
    return [format_rational(x) for x in v]


def _lambda_header(k: int) -> list[str]:
    return [f"lambda{i}" for i in range(1, k + 1)]


def _region_table_md(T: RegionSpec) -> str:
    lines = ["| subset | T |", "|---|---|"]
    lines += [f"| {{{', '.join(map(str, files))}}} | {v} |" for files, v in T.items()]
    return "\n".join(lines) + "\n"


def cmd_region(args) -> Output:
    T = _region(args.region)
    if args.action == "canonicalize":
        Tc = canonicalize(T)
        data = {"input": fmt.region_to_json(T), "canonical": fmt.region_to_json(Tc), "changed": Tc != T}
        table = [["subset", "input", "canonical"]] + [
            [" ".join(map(str, files)), v, Tc(files)] for files, v in T.items()]
        return Output(data, "## Canonical T\n\n" + _region_table_md(Tc), table)
    if args.action in ("vertices", "gen-set"):
        src = canonicalize(T) if (args.action == "gen-set" and args.canonicalize) else T
        vecs = region_vertices(src) if args.action == "vertices" else generating_set(src)
        listed = [fmt.demand_to_json(v)["lambda"] for v in vecs]
        md = "\n".join(f"- ({', '.join(_vec_row(v))})" for v in vecs) + "\n"
        return Output(listed, md, [_lambda_header(T.k)] + [_vec_row(v) for v in vecs])
    if args.demand is None:
        raise InputError("region contains needs a demand argument")
    lam = fmt.demand_from_json(_load(args.demand, "demand"))
    if len(lam) != T.k:
        raise InputError(f"demand.lambda: has {len(lam)} entries but region has k={T.k}")
    inside = region_contains(T, lam)
    return Output({"contains": inside}, f"contains: {str(inside).lower()}\n", [["contains"], [inside]])


def _bounds_markdown(report, title: str = "Lower bounds") -> str:
    return (f"## {title}\n\n" + report.to_markdown() + "\n## Hyperplane inequalities\n\n"
            + inequalities_markdown(report.inequalities))


def _prepared_region(args) -> tuple[RegionSpec, RegionSpec]:
    T = _region(args.region)
    return T, canonicalize(T) if args.canonicalize else T


def cmd_bounds(args) -> Output:
    T, Tc = _prepared_region(args)
    report = bound_report(Tc, include_ilp=not args.lp_only)
    data = {"T": fmt.region_to_json(T), "canonical": fmt.region_to_json(Tc), "bounds": fmt.bounds_to_json(report)}
    table = [["bound", "value", "applicable", "notes"]] + [list(r) for r in report.rows()]
    return Output(data, _bounds_markdown(report), table)


def cmd_nmin(args) -> Output:
    T, Tc = _prepared_region(args)
    report = bound_report(Tc, include_ilp=not args.lp_only)
    exact, notice = None, None
    if args.lp_only:
        notice = "exact n(R) skipped (--lp-only)"
    elif Tc.k > MAX_EXACT_K:
        notice = f"exact n(R) skipped: k={Tc.k} exceeds {MAX_EXACT_K}; only lower bounds are reported"
    else:
        exact = exact_nmin(Tc)
    data = {"T": fmt.region_to_json(T), "canonical": fmt.region_to_json(Tc), "bounds": fmt.bounds_to_json(report),
            "exact": fmt.exact_to_json(exact) if exact else None, "notice": notice}
    md = _bounds_markdown(report)
    table = [["bound", "value", "applicable", "notes"]] + [list(r) for r in report.rows()]
    if exact:
        pts = ", ".join(f"n{j}={c}" for j, c in exact.multiset.counts().items()) or "empty"
        md += f"\n## Exact minimum\n\nn(R) = {exact.n}; witness multiset: {pts}\n"
        table.append(["exact", exact.n, True, pts])
    if notice:
        md += f"\n{notice}\n"
    return Output(data, md, table)


def cmd_construct(args) -> Output:
    try:
        if args.kind == "k2":
            recipe = construct_k2(args.x, args.y, args.sigma)
            T = RegionSpec.k2(args.x, args.y, args.sigma)
        else:
            recipe = construct_simplex_t_fold(args.k, args.t)
            T = RegionSpec.uniform(args.k, args.t * 2 ** (args.k - 1))
    except ConstructionError as exc:
        raise InputError(str(exc)) from None
    report = verify_scheme(recipe, T, include_ilp=not args.lp_only)
    data = {"recipe": fmt.recipe_to_json(recipe), "region": fmt.region_to_json(T),
            "verification": fmt.verification_to_json(report)}
    comps = "\n".join(f"- {c.copies} x {c.kind}({', '.join(map(str, c.args))})" for c in recipe.components)
    md = (f"## Scheme\n\n{comps}\n\nsize {report.size}: {report.verdict}\n\n"
          + _bounds_markdown(report.bounds))
    table = [["point", "multiplicity"]] + [[j, c] for j, c in recipe.multiset.counts().items()]
    return Output(data, md, table, EXIT_OK if report.covered else EXIT_NEGATIVE)


def cmd_check(args) -> Output:
    G = fmt.multiset_from_json(_load(args.multiset, "multiset"))
    if args.mode == "covers":
        T = _region(args.target)
        if T.k != G.k:
            raise InputError(f"region.k: {T.k} does not match multiset.k {G.k}")
        cov = check_coverage(G, T)
        data = {"covered": cov.covered, "witnesses": fmt.witnesses_to_json(cov.witnesses)}
        if not cov.covered:
            data["violated"] = fmt.demand_to_json(cov.violated)["lambda"]
        table = [_lambda_header(G.k) + ["servable"]] + [_vec_row(lam) + [a is not None] for lam, a in cov.witnesses]
        md = f"covered: {str(cov.covered).lower()}\n"
        return Output(data, md, table, EXIT_OK if cov.covered else EXIT_NEGATIVE)
    lam = fmt.demand_from_json(_load(args.target, "demand"))
    if len(lam) != G.k:
        raise InputError(f"demand.lambda: has {len(lam)} entries but multiset has k={G.k}")
    alloc = in_service_region(G, lam)
    data = {"member": alloc is not None, "allocation": fmt.allocation_to_json(alloc) if alloc else None}
    table = [["file", "recovery", "rate"]] + [[y.file, " ".join(map(str, y.points)), format_rational(r)]
                                              for y, r in (alloc.nonzero() if alloc else [])]
    return Output(data, f"member: {str(alloc is not None).lower()}\n", table,
                  EXIT_OK if alloc is not None else EXIT_NEGATIVE)


def cmd_sweep_k2(args) -> Output:
    from .bounds import thm8_bound

    rows, ok = [], True
    for x in range(args.max + 1):
        for y in range(args.max + 1):
            for sigma in range(max(x, y), x + y + 1):
                T = RegionSpec.k2(x, y, sigma)
                formula = -(-(x + y + sigma) // 2)
                recipe = construct_k2(x, y, sigma)
                thm8, _ = thm8_bound(T)
                covered = check_coverage(recipe.multiset, T).covered
                exact = exact_nmin(T).n if args.exact else None
                agree = covered and recipe.size == formula == thm8 and exact in (None, formula)
                ok &= agree
                rows.append({"X": x, "Y": y, "Sigma": sigma, "formula": formula, "thm8": thm8,
                             "exact": exact, "constructed": recipe.size, "covered": covered, "agree": agree})
    header = list(rows[0]) if rows else []
    table = [header] + [[r[h] for h in header] for r in rows]
    md = "| " + " | ".join(header) + " |\n|" + "---|" * len(header) + "\n" + "".join(
        "| " + " | ".join(str(r[h]) for h in header) + " |\n" for r in rows)
    return Output({"instances": rows, "allAgree": ok}, md, table, EXIT_OK if ok else EXIT_NEGATIVE)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="srr", description="Storage design for service rate regions of binary codes.")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--node-limit", type=int, default=None, help="branch-and-bound node cap (overrides SRR_NODE_LIMIT)")
    # accept the global options after the subcommand as well
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
    common.add_argument("--node-limit", type=int, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    def canon_flags(sp):
        sp.add_argument("--no-canonicalize", dest="canonicalize", action="store_false",
                        help="use T exactly as given")

    r = sub.add_parser("region", parents=[common], help="canonicalize T, list vertices or the generating set, test membership")
    r.add_argument("action", choices=("canonicalize", "vertices", "gen-set", "contains"))
    r.add_argument("region", help="region JSON file, inline JSON, or - for stdin")
    r.add_argument("demand", nargs="?", help="demand JSON (for contains)")
    canon_flags(r)
    r.set_defaults(func=cmd_region)

    for name, func in (("bounds", cmd_bounds), ("nmin", cmd_nmin)):
        s = sub.add_parser(name, parents=[common], help="lower bounds" if name == "bounds" else "bounds plus exact minimum node count")
        s.add_argument("region")
        canon_flags(s)
        s.add_argument("--lp-only", action="store_true", help="skip every integer program")
        s.add_argument("--ilp", dest="lp_only", action="store_false", help="solve the integer programs (default)")
        s.set_defaults(func=func)

    c = sub.add_parser("construct", help="build and verify a storage scheme")
    csub = c.add_subparsers(dest="kind", required=True)
    k2 = csub.add_parser("k2", parents=[common], help="optimal two-file scheme for (X, Y, Sigma)")
    k2.add_argument("x", type=int)
    k2.add_argument("y", type=int)
    k2.add_argument("sigma", type=int)
    sx = csub.add_parser("simplex", parents=[common], help="t-fold k-dimensional simplex scheme")
    sx.add_argument("k", type=int)
    sx.add_argument("t", type=int)
    for sp in (k2, sx):
        sp.add_argument("--lp-only", action="store_true", help="skip the geometric ILP in the report")
    c.set_defaults(func=cmd_construct)

    ch = sub.add_parser("check", parents=[common], help="coverage of a region or membership of a demand vector")
    ch.add_argument("mode", choices=("covers", "member"))
    ch.add_argument("multiset")
    ch.add_argument("target", help="region JSON (covers) or demand JSON (member)")
    ch.set_defaults(func=cmd_check)

    sw = sub.add_parser("sweep-k2", parents=[common], help="check the two-file formula on a grid of (X, Y, Sigma)")
    sw.add_argument("--max", type=int, default=6)
    sw.add_argument("--no-exact", dest="exact", action="store_false", help="skip the exact ILP per instance")
    sw.set_defaults(func=cmd_sweep_k2)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    saved = os.environ.get("SRR_NODE_LIMIT")
    try:
        if args.node_limit is not None:
            # the solvers read the cap from the environment
            os.environ["SRR_NODE_LIMIT"] = str(args.node_limit)
        node_limit_from_env()
        out = args.func(args)
    except NodeLimitExceeded as exc:
        print(f"srr: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, fmt.FormatError, RegionError, GeometryError, ServiceError, LPError) as exc:
        print(f"srr: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        if saved is None:
            os.environ.pop("SRR_NODE_LIMIT", None)
        else:
            os.environ["SRR_NODE_LIMIT"] = saved
    sys.stdout.write(out.render(args.format))
    return out.code


if __name__ == "__main__":
    sys.exit(main())

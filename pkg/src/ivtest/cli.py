"""Command-line front end.

Exit status: 0 when every input passes (compatible, equal, ...), 1 when
some input fails, 2 for usage, input or capacity errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .continuous import partition_statistic, refine_partition, table_from_json
from .core import CapacityError, ConsistencyError, Dims, ShapeError, dist_to_json, load_dists
from .counting import extreme_counts, trend_report
from .linear_tests import (
    LinearTest,
    evaluate,
    extend,
    five_term_test,
    pearl_statistic,
    pearl_suite,
    suite_by_name,
    variations,
)
from .polyhedra import UnboundedError, certificate_inequality, compatible_polytope, lp_feasible, sufficiency_check
from .polyhedra.membership import _distinct
from .response import (
    composite_matrix,
    pearl_matrix,
    response_matrix,
    sample_compatible,
    sample_response_dist,
    vertex_dist,
)

SEED_LIMIT = 2**64


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out: str | None = None) -> None:
    if out and out != "-":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2)


def _approx(v: Fraction) -> str:
    return f"{float(v):.6g}"


def _dims(args) -> Dims:
    return Dims(args.l, args.m, args.n)


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= v < SEED_LIMIT:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


# ---------------------------------------------------------------- commands


def cmd_count(args) -> int:
    c = extreme_counts(_dims(args))
    if args.format == "json":
        obj = {"dims": [c.dims.l, c.dims.m, c.dims.n], "ext_B": c.ext_b, "ext_F": c.ext_f, "R": str(c.ratio)}
        _emit(_dumps(obj))
    else:
        lines = [f"ext_B={c.ext_b}", f"ext_F={c.ext_f}", f"R={c.ratio}"]
        if args.decimal:
            lines.append(f"R~{_approx(c.ratio)} (approximate)")
        _emit("\n".join(lines))
    if args.trend:
        fixed = {"l": args.l, "m": args.m, "n": args.n}
        axis = args.trend
        start = fixed.pop(axis)
        _emit(trend_report(axis, fixed, range(start, args.upto + 1)).csv())
    return 0


def cmd_trend(args) -> int:
    fixed = {k: getattr(args, k) for k in ("l", "m", "n") if k != args.axis}
    missing = [k for k, v in fixed.items() if v is None]
    if missing:
        raise UsageError(f"--{missing[0]} is required when the axis is {args.axis}")
    rep = trend_report(args.axis, fixed, range(args.start, args.stop + 1))
    if args.format == "json":
        obj = {
            "axis": rep.axis,
            "rows": [{"value": r.value, "R": str(r.ratio)} for r in rep.rows],
            "strictly_increasing": rep.strictly_increasing,
            "strictly_decreasing": rep.strictly_decreasing,
            "expected": rep.expected,
        }
        _emit(_dumps(obj))
    else:
        _emit(rep.csv())
    return 0 if rep.consistent else 1


def _dist_label(pos: int, total: int) -> str:
    return f"[{pos}] " if total > 1 else ""


def cmd_pearl(args) -> int:
    dists = load_dists(_read(args.dist))
    status = 0
    reports = []
    lines = []
    for pos, dist in enumerate(dists):
        failed = [evaluate(t, dist) for t in pearl_suite(dist.dims)]
        failed = [r for r in failed if not r.passed]
        stat = pearl_statistic(dist)
        if failed:
            status = 1
        reports.append({"statistic": str(stat), "passed": not failed, "failed": [r.as_dict() for r in failed]})
        tag = _dist_label(pos, len(dists))
        lines.append(f"{tag}statistic={stat} {'PASS' if not failed else 'FAIL'}")
        for r in failed:
            lines.append(f"{tag}  {r.test.name}: {r.test.expression()}  (value {r.test.alpha - r.margin})")
    _emit(_dumps(reports if len(reports) > 1 else reports[0]) if args.format == "json" else "\n".join(lines))
    return status


def _load_tests(path: str) -> list[LinearTest]:
    obj = json.loads(_read(path))
    items = obj if isinstance(obj, list) else [obj]
    out = []
    for t in items:
        try:
            dims = Dims(int(t["l"]), int(t["m"]), int(t["n"]))
            terms = [tuple(int(v) for v in ijk) for ijk in t["terms"]]
            out.append(LinearTest.from_terms(dims, terms, int(t["alpha"]), str(t.get("name", ""))))
        except (KeyError, TypeError, ValueError) as exc:
            raise ShapeError(f"test objects need l, m, n, terms, alpha: {exc}") from exc
    return out


def cmd_test(args) -> int:
    dists = load_dists(_read(args.dist))
    custom = _load_tests(args.tests) if args.tests else []
    status = 0
    out = []
    lines = []
    for pos, dist in enumerate(dists):
        suite = suite_by_name(args.suite.split(","), dist.dims) if args.suite else []
        for t in custom:
            if not t.dims.fits(dist.dims):
                raise ShapeError(f"test {t.name or t.expression()} is for {t.dims}, larger than {dist.dims}")
            suite.append(extend(t, dist.dims))
        reports = [evaluate(t, dist) for t in suite]
        ok = all(r.passed for r in reports)
        status = max(status, 0 if ok else 1)
        out.append({"passed": ok, "tests": [r.as_dict() for r in reports]})
        tag = _dist_label(pos, len(dists))
        lines.append(f"{tag}{len(reports)} tests, {sum(not r.passed for r in reports)} failed: {'PASS' if ok else 'FAIL'}")
        for r in reports:
            if not r.passed or args.verbose:
                mark = "ok  " if r.passed else "FAIL"
                lines.append(f"{tag}  {mark} {r.test.name}: {r.test.expression()}  (value {r.test.alpha - r.margin})")
    _emit(_dumps(out if len(out) > 1 else out[0]) if args.report == "json" else "\n".join(lines))
    return status


def cmd_feasible(args) -> int:
    dists = load_dists(_read(args.dist))
    status = 0
    out = []
    lines = []
    for pos, dist in enumerate(dists):
        res = lp_feasible(dist, rule=args.rule)
        tag = _dist_label(pos, len(dists))
        entry = {"feasible": res.feasible, "pivots": res.pivots}
        if res.feasible:
            lines.append(f"{tag}feasible")
            if args.witness:
                entry["witness"] = {str(k): str(v) for k, v in res.support().items()}
                lines.append(f"{tag}witness: " + json.dumps(entry["witness"]))
        else:
            status = 1
            lines.append(f"{tag}infeasible")
            if args.certificate:
                pi0, pi = res.certificate
                ineq = certificate_inequality(res.certificate, dist.dims, dist)
                entry["certificate"] = {"pi0": str(pi0), "pi": [str(v) for v in pi]}
                entry["inequality"] = {"coeffs": list(ineq.coeffs), "bound": ineq.bound}
                lines.append(f"{tag}certificate: " + json.dumps([str(pi0)] + [str(v) for v in pi]))
                lines.append(f"{tag}separating inequality: coeffs @ F <= {ineq.bound}, coeffs = {list(ineq.coeffs)}")
        out.append(entry)
    _emit(_dumps(out if len(out) > 1 else out[0]) if args.format == "json" else "\n".join(lines))
    return status


def _constraint_json(c, b) -> dict:
    return {"coeffs": [str(v) for v in c], "rhs": str(b)}


def cmd_facets(args) -> int:
    dims = _dims(args)
    poly = compatible_polytope(dims)
    obj = {
        "dims": [dims.l, dims.m, dims.n],
        "vertices": len(poly.vertices or []),
        "equalities": [_constraint_json(c, b) for c, b in poly.equalities],
        "inequalities": [_constraint_json(c, b) for c, b in poly.inequalities],
    }
    _emit(_dumps(obj), args.out)
    if args.out and args.out != "-":
        _emit(f"{len(poly.inequalities)} facets, {len(poly.equalities)} equalities -> {args.out}")
    return 0


def cmd_suffcheck(args) -> int:
    dims = _dims(args)
    res = sufficiency_check(dims, suite_by_name(args.suite.split(","), dims))
    if args.format == "json":
        obj = {
            "dims": [dims.l, dims.m, dims.n],
            "equal": res.equal,
            "kind": res.kind,
            "suite_vertices": res.suite_vertices,
            "compatible_vertices": res.compatible_vertices,
            "counterexample": dist_to_json(res.counterexample) if res.counterexample else None,
        }
        _emit(_dumps(obj))
    else:
        lines = [f"{res.kind}: suite polytope has {res.suite_vertices} vertices, compatible set {res.compatible_vertices}"]
        if res.counterexample is not None:
            lines.append("counterexample: " + json.dumps(dist_to_json(res.counterexample)))
        _emit("\n".join(lines))
    return 0 if res.equal else 1


def cmd_variations(args) -> int:
    if args.tests:
        bases = _load_tests(args.tests)
    else:
        bases = [five_term_test()]
    lines = []
    out = []
    for base in bases:
        if args.l or args.m or args.n:
            target = Dims(args.l or base.dims.l, args.m or base.dims.m, args.n or base.dims.n)
            base = extend(base, target)
        for v in variations(base):
            lines.append(f"{v.name}: {v.expression()}")
            out.append({"name": v.name, "tau": list(v.tau), "alpha": v.alpha})
    _emit(_dumps(out) if args.format == "json" else "\n".join(lines))
    return 0


def cmd_sample(args) -> int:
    dims = _dims(args)
    if args.vertex is not None:
        cols = _distinct(dims)
        if not 1 <= args.vertex <= len(cols):
            raise ShapeError(f"--vertex must be in 1..{len(cols)} for {dims}")
        dists = [vertex_dist(dims, cols[args.vertex - 1][0])]
    else:
        rng = random.Random(args.seed)
        dists = [sample_compatible(sample_response_dist(dims, rng)) for _ in range(args.count)]
    objs = [dist_to_json(d) for d in dists]
    _emit(json.dumps(objs if len(objs) > 1 else objs[0]), args.out)
    return 0


def cmd_continuous(args) -> int:
    table = table_from_json(_read(args.table))
    rep = partition_statistic(table)
    obj = rep.as_dict(table)
    if args.merge:
        try:
            mapping = [int(v) for v in args.merge.split(",")]
        except ValueError as exc:
            raise ShapeError(f"--merge takes comma-separated cell indices: {exc}") from exc
        ref = refine_partition(table, mapping)
        obj["coarse_statistic"] = str(ref.coarse.value)
        obj["monotone"] = ref.monotone
    if args.format == "json":
        _emit(_dumps(obj))
    else:
        lines = [
            f"statistic={rep.value} {'REJECT' if rep.rejects else 'no rejection'}",
            f"with remainder cell <= {rep.with_remainder}",
            f"maximizing x = x{rep.argmax_x + 1}",
            "note: Z is probed only at the listed values, so a value <= 1 does not "
            "certify instrumentality",
        ]
        if args.merge:
            lines.append(f"coarse statistic={obj['coarse_statistic']} (monotone: {obj['monotone']})")
        _emit("\n".join(lines))
    return 1 if rep.rejects else 0


def cmd_matrix(args) -> int:
    dims = _dims(args)
    if args.vertices:
        verts = [[str(v) for v in vertex_dist(dims, col).values] for col, _ in _distinct(dims)]
        _emit(json.dumps(verts))
        return 0
    build = {"response": response_matrix, "pearl": pearl_matrix, "composite": composite_matrix}[args.which]
    _emit(build(dims).format())
    return 0


# ---------------------------------------------------------------- parser


def _add_dims(p, required=True):
    for name, what in (("l", "Z"), ("m", "Y"), ("n", "X")):
        p.add_argument(f"--{name}", type=_positive, required=required, help=f"number of values of {what}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ivtest",
        description="Exact instrumental-variable tests for finite discrete distributions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="vertex counts of the compatible and ambient sets")
    _add_dims(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--decimal", action="store_true", help="also print an approximate decimal ratio")
    p.add_argument("--trend", choices=["l", "m", "n"], help="append a CSV trend table along this axis")
    p.add_argument("--upto", type=_positive, default=8, help="last axis value of the trend table")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("trend", help="exact vertex-ratio table along one axis")
    p.add_argument("--axis", choices=["l", "m", "n"], required=True)
    _add_dims(p, required=False)
    p.add_argument("--from", dest="start", type=_positive, default=2)
    p.add_argument("--to", dest="stop", type=_positive, default=8)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_trend)

    p = sub.add_parser("pearl", help="instrumental inequality")
    p.add_argument("--dist", required=True, help="distribution JSON file, or - for stdin")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_pearl)

    p = sub.add_parser("test", help="evaluate named suites and/or tests from a file")
    p.add_argument("--dist", required=True)
    p.add_argument("--suite", default=None, help="comma list of pearl, five-term")
    p.add_argument("--tests", help="JSON file of {l, m, n, terms, alpha, name} objects")
    p.add_argument("--report", "--format", dest="report", choices=["text", "json"], default="text")
    p.add_argument("--verbose", "-v", action="store_true", help="list passing tests too")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("feasible", help="exact compatibility decision")
    p.add_argument("--dist", required=True)
    p.add_argument("--certificate", action="store_true", help="print the infeasibility certificate")
    p.add_argument("--witness", action="store_true", help="print the response-distribution witness")
    p.add_argument("--rule", choices=["bland", "dantzig"], default="bland")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("facets", help="H-representation of the compatible set")
    _add_dims(p)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_facets)

    p = sub.add_parser("suffcheck", help="does a suite cut out exactly the compatible set?")
    _add_dims(p)
    p.add_argument("--suite", default="pearl")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_suffcheck)

    p = sub.add_parser("variations", help="relabelings of a test (default: the five-term test)")
    p.add_argument("--tests", help="JSON file of tests; default is the five-term test")
    _add_dims(p, required=False)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_variations)

    p = sub.add_parser("sample", help="seeded compatible distributions")
    _add_dims(p)
    p.add_argument("--seed", type=_seed, default=0, help="unsigned 64-bit seed")
    p.add_argument("--count", type=_positive, default=1)
    p.add_argument("--vertex", type=int, help="emit the k-th distinct vertex (1-based) instead")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser(
        "continuous",
        help="partition statistic for continuous Y and Z",
        description="Evaluates the partition statistic on a finite table. Z is only probed at "
        "the listed values, which can miss violations: a rejection is sound, a pass is not "
        "a certificate.",
    )
    p.add_argument("--table", required=True)
    p.add_argument("--merge", help="comma list mapping each cell to a coarse cell index")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_continuous)

    p = sub.add_parser("matrix", help="debug export of the 0/1 matrices or the vertex list")
    _add_dims(p)
    p.add_argument("--which", choices=["response", "pearl", "composite"], default="response")
    p.add_argument("--vertices", action="store_true", help="print the distinct vertices as JSON")
    p.set_defaults(func=cmd_matrix)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ShapeError, CapacityError, UnboundedError, UsageError, IndexError, ValueError, OSError) as exc:
        print(f"ivtest {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"ivtest {args.command}: internal consistency failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

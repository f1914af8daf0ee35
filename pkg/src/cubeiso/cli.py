"""Command-line entry point: ``cubeiso <subcommand> ...``.

Results go to stdout and diagnostics to stderr.  Exit status is 0 on
success, 1 when a verification suite (or a solver cross-check) finds a
violation and 2 for invalid input, unmet hypotheses or exhausted budgets.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections.abc import Sequence
from math import comb

from cubeiso import bounds, compression, constructions, solver, suites
from cubeiso.core import VertexFamily, edge_boundary, edge_decomposition, edges_within
from cubeiso.errors import BackendDisagreement, CubeisoError, InvalidInput

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID = 0, 1, 2

THEOREMS = (
    "thm21", "thm12", "thm13", "kw", "trivial", "kkl", "kleitman", "e1",
    "ell", "ell-prime", "beta", "beta-prime", "prop31", "finishing", "lemma-ba",
)

TIGHTNESS_COLUMNS = ("theorem", "t", "r", "n", "k", "m", "edges", "bound", "ratio", "best")
EXACT_COLUMNS = ("n", "m", "r", "value", "backend", "witnesses", "initial_segment", "trivial", "pairs", "theorem_min")

TABLE_HELP = f"""\
CSV columns
  tightness: {', '.join(TIGHTNESS_COLUMNS)}
    even r = 2t rows use Hamming balls of radius k against the even-distance
    bound; odd r = 2t+1 rows use the odd-tight family against the
    odd-distance bound.  ratio = bound / edges; best marks the k with the
    smallest ratio for each (theorem, t, n).
  exact: {', '.join(EXACT_COLUMNS)}
    value is D(m, n, r) from the solver; initial_segment is the edge count of
    the first m vertices in binary order; theorem_min is the smallest
    applicable theorem bound (empty when none applies).
"""


def _format_number(value: float | int) -> str:
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _add_common(p: argparse.ArgumentParser, default_format: str = "text") -> None:
    p.add_argument("--format", choices=("text", "json", "csv"), default=default_format)
    p.add_argument("--seed", type=int, default=0, help="seed for randomized corpora (default 0)")
    p.add_argument("--threads", type=int, default=1, help="parallel solver workers; output does not depend on it")


def _add_family_input(p: argparse.ArgumentParser) -> None:
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--family", metavar="PATH", help="family JSON file, '-' for stdin")
    source.add_argument("--construct", choices=constructions.KINDS, help="build a named family instead")
    p.add_argument("--n", type=int, help="dimension for --construct")
    p.add_argument("--m", type=int, help="size for initial-segment")
    p.add_argument("--d", type=int, help="dimension of a subcube")
    p.add_argument("--k", type=int, help="radius, layer or threshold parameter")
    p.add_argument("--s", type=int, help="core size for kw-star")


def _construct_params(args: argparse.Namespace) -> tuple[int, ...]:
    needed = {
        "initial-segment": ("m",),
        "subcube": ("d",),
        "hamming-ball": ("k",),
        "odd-tight": ("k",),
        "kw-layer": ("k",),
        "kw-star": ("k", "s"),
    }[args.construct]
    missing = [f"--{name}" for name in ("n",) + needed if getattr(args, name) is None]
    if missing:
        raise InvalidInput(f"--construct {args.construct} needs {' '.join(missing)}")
    return tuple(getattr(args, name) for name in needed)


def _load_family(args: argparse.Namespace) -> VertexFamily:
    if args.construct:
        return constructions.ConstructionSpec(args.construct, args.n, _construct_params(args)).build()
    try:
        if args.family == "-":
            text = sys.stdin.read()
        else:
            with open(args.family, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read family file: {exc}") from None
    return VertexFamily.from_json(text)


def _emit_scalar(args: argparse.Namespace, name: str, value, extra: dict | None = None) -> None:
    if args.format == "json":
        print(json.dumps({name: value, **(extra or {}), "seed": args.seed}))
    elif args.format == "csv":
        row = {name: value, **(extra or {})}
        _write_csv(list(row), [list(row.values())])
    else:
        print(_format_number(value) if isinstance(value, (int, float)) else value)


def _write_csv(header: Sequence[str], rows: Sequence[Sequence]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_number(v) if isinstance(v, float) else v for v in row])
    sys.stdout.write(buf.getvalue())


def cmd_edges(args: argparse.Namespace) -> int:
    A = _load_family(args)
    _emit_scalar(args, "edges", edges_within(A, args.r), {"n": A.dim, "m": len(A), "r": args.r})
    return EXIT_OK


def cmd_boundary(args: argparse.Namespace) -> int:
    A = _load_family(args)
    _emit_scalar(args, "boundary", edge_boundary(A, args.r), {"n": A.dim, "m": len(A), "r": args.r})
    return EXIT_OK


def cmd_decompose(args: argparse.Namespace) -> int:
    A = _load_family(args)
    if args.beta is None:
        decomposition = edge_decomposition(A, args.rmax)
        counts = decomposition.to_dict()["counts"]
        rows = [[c["b"], c["a"], c["count"]] for c in counts]
        header = ["b", "a", "count"]
    else:
        split = compression.split_edge_decomposition(A, args.rmax, args.beta)
        counts = {f"{b},{a}": {"ell_y_le": le, "ell_y_gt": gt} for (b, a), (le, gt) in split.items()}
        rows = [[b, a, le, gt] for (b, a), (le, gt) in split.items()]
        header = ["b", "a", "ell_y_le", "ell_y_gt"]
    if args.format == "json":
        print(json.dumps({"rmax": args.rmax, "beta": args.beta, "counts": counts, "seed": args.seed}))
    elif args.format == "csv":
        _write_csv(header, rows)
    else:
        for row in rows:
            print(" ".join(map(str, row)))
    return EXIT_OK


def cmd_construct(args: argparse.Namespace) -> int:
    A = _load_family(args)
    if args.format == "text":
        for s in A.to_dict()["vertices"]:
            print(s)
    elif args.format == "csv":
        _write_csv(["vertex"], [[s] for s in A.to_dict()["vertices"]])
    else:
        print(A.to_json())
    return EXIT_OK


def cmd_normalize(args: argparse.Namespace) -> int:
    A = _load_family(args)
    out, trace = compression.normalize(A, args.r)
    if args.trace:
        sys.stdout.write(trace.to_jsonl())
    print(out.to_json())
    return EXIT_OK


def _need(args: argparse.Namespace, *names: str) -> list[int]:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise InvalidInput(f"--theorem {args.theorem} needs {' '.join(missing)}")
    return [getattr(args, n) for n in names]


def cmd_bound(args: argparse.Namespace) -> int:
    th = args.theorem
    report: bounds.BoundReport | None = None
    if th == "thm21":
        report = bounds.bound_thm21(*_need(args, "m", "n"))
    elif th == "thm12":
        report = bounds.bound_thm12(*_need(args, "m", "n", "t"))
    elif th == "thm13":
        report = bounds.bound_thm13(*_need(args, "m", "n", "t"))
    elif th == "kw":
        report = bounds.bound_kw(*_need(args, "m", "n"))
    if report is not None:
        if args.format == "json":
            print(json.dumps({**report.to_dict(), "seed": args.seed}))
        elif args.format == "csv":
            _write_csv(bounds.CSV_COLUMNS, [report.csv_row()])
        else:
            print(_format_number(report.bound))
        return EXIT_OK

    if th == "trivial":
        m, n, r = _need(args, "m", "n", "r")
        value = bounds.bound_trivial(m, n, r)
    elif th == "kkl":
        value = bounds.kkl_exact(*_need(args, "n", "r"))
    elif th == "kleitman":
        value = bounds.kleitman_threshold(*_need(args, "n", "r"))
    elif th == "e1":
        value = bounds.remark_e1_bound(*_need(args, "m"))
    elif th == "ell":
        value = bounds.ell(*_need(args, "m", "n"))
    elif th == "ell-prime":
        value = bounds.ell_prime(*_need(args, "m", "n"))
    elif th == "beta":
        value = bounds.beta(*_need(args, "m", "n"))
    elif th == "beta-prime":
        value = bounds.beta_prime(*_need(args, "m", "n"))
    elif th == "finishing":
        value = bounds.finishing_monotonicity_check(*_need(args, "m", "n", "t"))
    elif th == "lemma-ba":
        b, a, m, n = _need(args, "b", "a", "m", "n")
        value = bounds.lemma_ba_bound(b, a, m, n, args.case)
    else:
        facts = bounds.prop31_check(*_need(args, "m", "n"))
        if args.format == "json":
            print(json.dumps({**facts._asdict(), "seed": args.seed}))
        elif args.format == "csv":
            _write_csv(list(facts._fields), [[str(v).lower() for v in facts]])
        else:
            for name, ok in facts._asdict().items():
                print(f"{name} {str(ok).lower()}")
        return EXIT_OK
    if isinstance(value, bool):
        value = str(value).lower()
    _emit_scalar(args, "value", value, {"theorem": th})
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    result = solver.solve(args.n, args.m, args.r, backend=args.backend, cross_check=args.cross_check, workers=args.threads)
    if args.format == "json":
        print(json.dumps({**result.to_dict(args.timing), "seed": args.seed}))
    elif args.format == "csv":
        _write_csv(["witness", "vertices"], [[i, " ".join(w.to_dict()["vertices"])] for i, w in enumerate(result.witnesses)])
    else:
        print(f"value {result.value}")
        print(f"backend {result.backend}")
        print(f"witnesses {len(result.witnesses)}")
        for w in result.witnesses:
            print(" ".join(w.to_dict()["vertices"]))
        if args.timing:
            print(f"wall_time {result.wall_time:.6f}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    names = list(suites.SUITES) if args.suite == "all" else [args.suite]
    results = [suites.run_suite(name, seed=args.seed, workers=args.threads) for name in names]
    if args.format == "json":
        print(json.dumps({"seed": args.seed, "pass": all(r.passed for r in results), "suites": [r.to_dict() for r in results]}))
    elif args.format == "csv":
        _write_csv(["suite", "pass", "checked", "failures", "seed"], [[r.name, str(r.passed).lower(), r.checked, r.failures, args.seed] for r in results])
    else:
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'} {r.name} checked={r.checked} failures={r.failures} seed={args.seed}")
            for v in r.violations:
                print(f"  {v}")
    for r in results:
        for v in r.violations:
            print(f"{r.name}: {v}", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


def tightness_rows(ts: Sequence[int], ns: Sequence[int]) -> list[list]:
    """Bound-to-construction ratios, one row per feasible radius parameter k."""
    rows = []
    for theorem in ("thm12", "thm13"):
        for t in ts:
            r = 2 * t if theorem == "thm12" else 2 * t + 1
            for n in ns:
                if r > n:
                    continue
                block = []
                for k in range(n + 1):
                    if theorem == "thm12":
                        size = sum(comb(n, j) for j in range(k + 1))
                        edges_fn = constructions.ball_edges
                        evaluate = bounds.bound_thm12
                    else:
                        size = sum(comb(k, j) for j in range(k + 1)) + (n - k) * sum(comb(k, j) for j in range(k))
                        edges_fn = constructions.odd_tight_edges
                        evaluate = bounds.bound_thm13
                    if not (1 << t) <= size <= 1 << n:
                        continue
                    edges = edges_fn(n, k, r)
                    if edges == 0:
                        continue
                    bound = evaluate(size, n, t).bound
                    block.append([theorem, t, r, n, k, size, edges, bound, bound / edges])
                if block:
                    best = min(range(len(block)), key=lambda i: (block[i][8], block[i][4]))
                    for i, row in enumerate(block):
                        rows.append(row + [str(i == best).lower()])
    return rows


def exact_rows(ns: Sequence[int], rs: Sequence[int] | None, workers: int) -> list[list]:
    rows = []
    for n in ns:
        for r in rs or range(1, n + 1):
            if not 1 <= r <= n:
                continue
            for m in range((1 << n) + 1):
                result = solver.solve(n, m, r, workers=workers)
                seg = edges_within(constructions.initial_segment(n, m), r)
                applicable = bounds.theorem_bounds(m, n, r)
                theorem_min = min((v for k, v in applicable.items() if k not in ("trivial", "pairs")), default="")
                rows.append([n, m, r, result.value, result.backend, len(result.witnesses), seg,
                             applicable["trivial"], int(applicable["pairs"]), theorem_min])
    return rows


def cmd_table(args: argparse.Namespace) -> int:
    if args.kind == "tightness":
        header, rows = TIGHTNESS_COLUMNS, tightness_rows(args.t, args.n)
    else:
        header, rows = EXACT_COLUMNS, exact_rows(args.n, args.r, args.threads)
    if args.format == "json":
        print(json.dumps({"kind": args.kind, "seed": args.seed, "rows": [dict(zip(header, row)) for row in rows]}))
    else:
        _write_csv(header, rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubeiso", description="Edge-isoperimetry workbench for powers of the hypercube.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (
        ("edges", cmd_edges, "count pairs at distance 1..r inside a family"),
        ("boundary", cmd_boundary, "count Q_n^r edges leaving a family"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_family_input(p)
        p.add_argument("--r", type=int, required=True)
        _add_common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("decompose", help="pair counts per class (b, a)")
    _add_family_input(p)
    p.add_argument("--rmax", type=int, required=True)
    p.add_argument("--beta", type=int, help="also split each class by large-coordinate counts above this threshold")
    _add_common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("construct", help="print a named family")
    _add_family_input(p)
    _add_common(p, "json")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("normalize", help="compress to a left-compressed down-set")
    _add_family_input(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--trace", action="store_true", help="emit one JSON line per compression step before the result")
    _add_common(p, "json")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("bound", help="evaluate a bound or threshold")
    p.add_argument("--theorem", choices=THEOREMS, required=True)
    for flag in ("m", "n", "t", "r", "b", "a"):
        p.add_argument(f"--{flag}", type=int)
    p.add_argument("--case", choices=bounds.CASES, default="ell_y_le", help="half of the split for lemma-ba")
    _add_common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("solve", help="compute D(m, n, r) exactly with all optimal witnesses")
    for flag in ("n", "m", "r"):
        p.add_argument(f"--{flag}", type=int, required=True)
    p.add_argument("--backend", choices=("auto",) + solver.BACKENDS, default="auto")
    p.add_argument("--cross-check", action="store_true", help="run both backends when budgets allow and compare")
    p.add_argument("--timing", action="store_true", help="include wall time (makes output run-dependent)")
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=("all",) + tuple(suites.SUITES), default="all")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser(
        "table", help="sweep parameter grids to CSV", epilog=TABLE_HELP, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    p.add_argument("--kind", choices=("tightness", "exact"), default="tightness")
    p.add_argument("--n", type=int, nargs="+", default=[12, 16, 20])
    p.add_argument("--t", type=int, nargs="+", default=[1, 2], help="tightness: distance parameters t")
    p.add_argument("--r", type=int, nargs="+", help="exact: radii (default 1..n)")
    _add_common(p, "csv")
    p.set_defaults(func=cmd_table)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except BackendDisagreement as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except CubeisoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())

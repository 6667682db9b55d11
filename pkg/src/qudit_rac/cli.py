"""Command-line interface.

Every subcommand prints text, CSV or JSON (``--format``) to standard output
or to ``--out``. Exit status is 0 on success, 2 on invalid input and 1 when
a numerical routine fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from importlib import resources

from . import __version__
from .classical import brute_force_optimal, classical_success
from .errors import Infeasible, NumericalFailure
from .experiment import analyze, load_table2
from .linalg import MAX_DIM
from .qrac2 import success2_closed, success2_simulated
from .qrac3 import optimize_qrac3
from .seesaw import seesaw_run

CLASSICAL_MAX_N = 50
FORMATS = ("text", "csv", "json")


def fmt(x):
    """Six significant digits, as used in every CSV column."""
    return f"{x:.6g}"


def load_table1_constants():
    text = resources.files("qudit_rac").joinpath("data/table1_constants.csv").read_text("utf-8")
    rows = csv.DictReader(line for line in text.splitlines() if not line.startswith("#"))
    return [(int(r["d"]), float(r["pQ"])) for r in rows]


def parse_range(text):
    """``"2..40"`` -> ``range(2, 41)``; a single integer is a one-element range."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
    else:
        lo = hi = int(text)
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _dims(args):
    dims = args.d_range if args.d_range is not None else range(args.d, args.d + 1)
    if dims[0] < 2 or dims[-1] > MAX_DIM:
        raise ValueError(f"d must lie in 2..{MAX_DIM}")
    return dims


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json(payload):
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _finite(x):
    return x if x is None or math.isfinite(x) else None


def cmd_classical(args):
    if args.n < 1 or args.n > CLASSICAL_MAX_N:
        raise ValueError(f"n must lie in 1..{CLASSICAL_MAX_N}")
    exact = classical_success(args.n, args.d)
    result = {"command": "classical", "n": args.n, "d": args.d,
              "pC": float(exact), "pC_exact": f"{exact.numerator}/{exact.denominator}"}
    if args.oracle:
        best, strategy = brute_force_optimal(args.n, args.d)
        result["oracle"] = {
            "pC": float(best),
            "pC_exact": f"{best.numerator}/{best.denominator}",
            "agrees": best == exact,
            "encode": list(strategy.encode),
            "decode": [list(t) for t in strategy.decode],
        }
    if args.format == "json":
        return _json(result)
    if args.format == "csv":
        header = ["n", "d", "pC_exact", "pC"]
        row = [args.n, args.d, result["pC_exact"], result["pC"]]
        if args.oracle:
            header += ["oracle_pC", "oracle_agrees"]
            row += [result["oracle"]["pC"], str(result["oracle"]["agrees"]).lower()]
        return _csv(header, [row])
    lines = [f"classical success n={args.n} d={args.d}: {result['pC_exact']} = {result['pC']:.6g}"]
    if args.oracle:
        o = result["oracle"]
        verdict = "agrees" if o["agrees"] else "DISAGREES"
        lines.append(f"brute-force optimum: {o['pC_exact']} = {o['pC']:.6g} ({verdict})")
    return "\n".join(lines) + "\n"


def cmd_table1(args):
    rows = []
    for d, pq in load_table1_constants():
        pc = float(classical_success(d + 1, d))
        rows.append({"d": d, "pQ": pq, "pC": pc, "ratio": pq / pc})
    if args.format == "json":
        return _json({"command": "table1", "rows": rows})
    if args.format == "csv":
        return _csv(["d", "pQ", "pC", "ratio"], [[r["d"], r["pQ"], r["pC"], r["ratio"]] for r in rows])
    lines = ["d   pQ      pC      ratio"]
    lines += [f"{r['d']:<3d} {r['pQ']:.4f}  {r['pC']:.4f}  {r['ratio']:.4f}" for r in rows]
    return "\n".join(lines) + "\n"


def _quantum_rows(args, family):
    rows = []
    failures = []
    for d in _dims(args):
        pc = float(classical_success(family, d))
        row = {"d": d, "pC": pc}
        if family == 2:
            avg, worst = success2_simulated(d)
            row.update(pQ_avg=avg, pQ_worst=worst, ratio=success2_closed(d) / pc)
        else:
            try:
                code = optimize_qrac3(d)
            except Infeasible as exc:
                failures.append(f"d={d}: {exc}")
                row.update(pQ_avg=None, pQ_worst=None, ratio=None, error=str(exc))
                rows.append(row)
                continue
            row.update(pQ_avg=code.average, pQ_worst=code.worst, ratio=code.average / pc,
                       mub_deviation=code.mub_deviation, r_boundary_margin=code.boundary_margin)
        rows.append(row)
    return rows, failures


def cmd_quantum(args, family):
    rows, failures = _quantum_rows(args, family)
    name = f"q{family}"
    if args.format == "json":
        out = _json({"command": name, "rows": [{k: _finite(v) if isinstance(v, float) else v
                                               for k, v in r.items()} for r in rows]})
    elif args.format == "csv":
        out = _csv(
            ["d", "pQ_avg", "pQ_worst", "pC", "ratio"],
            [[r["d"]] + [r[k] if r[k] is not None else "nan" for k in ("pQ_avg", "pQ_worst", "pC", "ratio")]
             for r in rows],
        )
    else:
        lines = ["d   pQ_avg    pQ_worst  pC        ratio"]
        for r in rows:
            if r.get("error"):
                lines.append(f"{r['d']:<3d} infeasible: {r['error']}")
                continue
            line = f"{r['d']:<3d} {r['pQ_avg']:.6f}  {r['pQ_worst']:.6f}  {r['pC']:.6f}  {r['ratio']:.6f}"
            if r.get("mub_deviation", 0.0) > 1e-10:
                line += f"  [third basis not unbiased: deviation {r['mub_deviation']:.3g}]"
            lines.append(line)
        out = "\n".join(lines) + "\n"
    return out, (1 if failures else 0)


def _seesaw_reference(n, d):
    if n == 2:
        return success2_closed(d), "closed form"
    if n == 3:
        return optimize_qrac3(d).average, "three-symbol family"
    return None, None


def cmd_seesaw(args):
    report = seesaw_run(args.n, args.d, restarts=args.restarts, max_iters=args.iters, seed=args.seed)
    ref, ref_kind = _seesaw_reference(args.n, args.d)
    finals = report.restart_objectives
    stats = {
        "min": min(finals),
        "mean": sum(finals) / len(finals),
        "max": max(finals),
        "within_1e-6_of_best": sum(1 for v in finals if report.best - v < 1e-6),
    }
    payload = {"command": "seesaw", "n": args.n, "d": args.d, "max_iters": args.iters,
               **report.as_dict(), "reference": ref, "reference_kind": ref_kind,
               "gap": None if ref is None else report.best - ref, "restart_stats": stats}
    if args.format == "json":
        return _json(payload)
    if args.format == "csv":
        return _csv(
            ["n", "d", "restarts", "iterations", "seed", "best", "reference", "gap"],
            [[args.n, args.d, args.restarts, report.iterations, args.seed, report.best,
              "" if ref is None else ref, "" if ref is None else report.best - ref]],
        )
    lines = [
        f"seesaw n={args.n} d={args.d} restarts={args.restarts} max_iters={args.iters} seed={args.seed}",
        f"best objective: {report.best:.10f} after {report.iterations} iterations",
    ]
    if ref is not None:
        lines.append(f"{ref_kind}: {ref:.10f}  gap: {report.best - ref:+.3e}")
    lines.append(
        f"restarts: min {stats['min']:.6f}  mean {stats['mean']:.6f}  max {stats['max']:.6f}  "
        f"within 1e-6 of best: {stats['within_1e-6_of_best']}/{args.restarts}"
    )
    return "\n".join(lines) + "\n"


def cmd_experiment(args):
    report = analyze(load_table2(args.data))
    if args.format == "json":
        return _json({"command": "experiment", **report.as_dict()})
    if args.format == "csv":
        return _csv(
            ["label", "x0", "x1", "dev_z", "dev_x", "fidelity"],
            [[r.label, r.x0, r.x1, r.dev_z, r.dev_x, r.fidelity] for r in report.rows],
        )
    return report.to_text()


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
    common.add_argument("--out", metavar="PATH", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="qudit-rac", description="Classical and quantum random access codes on d-level systems."
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--format", choices=FORMATS, default="text")
    parser.add_argument("--out", metavar="PATH", default=None)
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classical", parents=[common], help="exact classical success probability")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="also run the exhaustive search")

    sub.add_parser("table1", parents=[common], help="classical comparison for the reference codes")

    for name, help_ in (("q2", "two-symbol quantum family"), ("q3", "three-symbol quantum family")):
        p = sub.add_parser(name, parents=[common], help=help_)
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--d", type=int)
        g.add_argument("--d-range", type=parse_range, metavar="LO..HI")

    p = sub.add_parser("seesaw", parents=[common], help="seesaw lower bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--iters", type=int, default=1000)

    p = sub.add_parser("experiment", parents=[common], help="analyze the four-level experiment data")
    p.add_argument("--data", metavar="PATH", default=None)
    return parser


def run(argv=None):
    """Execute the CLI; returns ``(exit_code, output_text, out_path)``."""
    args = build_parser().parse_args(argv)
    code = 0
    if args.command == "classical":
        out = cmd_classical(args)
    elif args.command == "table1":
        out = cmd_table1(args)
    elif args.command in ("q2", "q3"):
        out, code = cmd_quantum(args, int(args.command[1]))
    elif args.command == "seesaw":
        out = cmd_seesaw(args)
    else:
        out = cmd_experiment(args)
    return code, out, args.out


def main(argv=None):
    try:
        code, out, path = run(argv)
        if path:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
    except (NumericalFailure, Infeasible) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())

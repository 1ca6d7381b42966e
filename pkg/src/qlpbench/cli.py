"""Command-line interface.

Subcommands: gen, solve, bench, report, fetch, qcost (eval | verify).
Exit codes: 0 success, 1 runtime failure, 2 usage error (argparse default).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from qlpbench import __version__
from qlpbench.bench import (
    fetch,
    make_report,
    report_json,
    run_bench,
)
from qlpbench.instances import FAMILIES, InstanceSpec, emit_instance
from qlpbench.lp import standardize
from qlpbench.mc import McConfig, mc_qmin, mc_qsearch
from qlpbench.mps import MpsParseError, read_mps
from qlpbench.qcost import (
    GateCosts,
    QlsParams,
    n_qsearch,
    qls_lb,
    qmin_expected_queries,
)
from qlpbench.simplex import PivotRule, solve


def _pivot_rule(args) -> PivotRule:
    return PivotRule(args.pivot, getattr(args, "seed", 0) or 0)


def _add_solver_flags(p: argparse.ArgumentParser):
    p.add_argument("--pivot", choices=["dantzig", "steepest", "random"],
                   default="dantzig")
    p.add_argument("--eps", type=float, default=1e-3,
                   help="pricing precision (default 1e-3)")
    p.add_argument("--delta", type=float, default=1e-3,
                   help="unboundedness/ratio precision (default 1e-3)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-limit", type=float, default=1800.0,
                   help="per-instance wall-clock budget in seconds")


def cmd_gen(args) -> int:
    spec = InstanceSpec(args.family, args.n, args.p, args.seed)
    path = emit_instance(spec, args.out)
    print(path)
    return 0


def cmd_solve(args) -> int:
    try:
        lp = read_mps(args.instance)
    except (OSError, MpsParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    out = solve(standardize(lp), _pivot_rule(args), eps_opt=args.eps,
                time_budget=args.time_limit)
    print(f"status: {out.status.value}")
    if math.isfinite(out.objective):
        print(f"objective: {out.objective!r}")
    print(f"iterations: {out.iterations} (+{out.phase1_iterations} phase-1)")
    return 0 if out.status.value in ("optimal", "unbounded", "infeasible") else 1


def cmd_bench(args) -> int:
    summary = run_bench(args.instances, _pivot_rule(args), args.out,
                        eps=args.eps, delta=args.delta,
                        time_limit=args.time_limit, eps_opt=args.eps,
                        fmt=args.format)
    for err in summary["errors"]:
        print(f"skipped {err['instance']}: {err['reason']}", file=sys.stderr)
    print(f"benchmarked {len(summary['instances'])} instance(s), "
          f"{len(summary['errors'])} skipped -> {args.out}")
    return 1 if summary["all_failed"] else 0


def cmd_report(args) -> int:
    try:
        rep = make_report(args.csv_dir)
    except (FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    text = report_json(rep)
    if args.out:
        Path(args.out).write_text(text)
        print(args.out)
    else:
        sys.stdout.write(text)
    return 0


def cmd_fetch(args) -> int:
    try:
        results = fetch(args.manifest, args.out)
    except (OSError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    for f in results["failed"]:
        print(f"failed {f['file']}: {f['reason']}", file=sys.stderr)
    print(f"fetched {len(results['fetched'])}, "
          f"skipped {len(results['skipped'])}, "
          f"failed {len(results['failed'])}")
    return 1 if results["failed"] else 0


def cmd_qcost_eval(args) -> int:
    if args.subroutine == "qls":
        p = QlsParams(norm1=args.norm1, norm_max=args.norm_max, d=args.d,
                      kappa=args.kappa, eps=args.eps)
        b = qls_lb(p, GateCosts())
        print(repr(b.value))
        if b.flags:
            print("flags: " + ";".join(sorted(b.flags)), file=sys.stderr)
        return 0
    if args.subroutine == "qsearch":
        b = n_qsearch(args.n, args.t)
        print(repr(b.value))
        return 0
    if args.subroutine == "qmin":
        b = qmin_expected_queries(args.n, args.eps)
        print(repr(b.value))
        if b.flags:
            print("flags: " + ";".join(sorted(b.flags)), file=sys.stderr)
        return 0
    raise AssertionError(args.subroutine)


def cmd_qcost_verify(args) -> int:
    cfg = McConfig(trials=args.trials, seed=args.seed)
    if args.subroutine == "qsearch":
        formula = n_qsearch(args.n, args.t).value
        mc = mc_qsearch(args.n, args.t, cfg)
    else:
        from qlpbench.qcost import qmin_inner_sum
        formula = qmin_inner_sum(args.n)
        mc = mc_qmin(args.n, cfg)
    z = ((mc.mean - formula) / mc.std_error
         if mc.std_error > 0 else 0.0)
    print(json.dumps({"formula": formula, "mc_mean": mc.mean,
                      "std_error": mc.std_error, "z_score": z}, indent=2))
    return 0 if abs(z) < 5.0 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qlpbench",
        description="Classical simplex benchmarking against quantum "
                    "gate-count lower bounds.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random LP instance")
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--n", type=int, required=True, help="vertex count")
    g.add_argument("--p", type=float, required=True, help="edge probability")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=".", help="output directory")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve one MPS instance")
    s.add_argument("instance")
    _add_solver_flags(s)
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run the hybrid benchmark")
    b.add_argument("instances", nargs="+")
    _add_solver_flags(b)
    b.add_argument("--out", required=True, help="output directory")
    b.add_argument("--format", choices=["csv", "json"], default="csv",
                   help="per-instance record format (csv default)")
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("report", help="aggregate bench CSVs into a report")
    r.add_argument("csv_dir")
    r.add_argument("--out", help="report JSON path (stdout when omitted)")
    r.set_defaults(func=cmd_report)

    f = sub.add_parser("fetch", help="download instances from a manifest")
    f.add_argument("manifest")
    f.add_argument("--out", required=True, help="output directory")
    f.set_defaults(func=cmd_fetch)

    q = sub.add_parser("qcost", help="evaluate or verify gate-count bounds")
    qsub = q.add_subparsers(dest="qcost_command", required=True)

    qe = qsub.add_parser("eval", help="evaluate a closed-form bound")
    qe.add_argument("subroutine", choices=["qls", "qsearch", "qmin"])
    qe.add_argument("--kappa", type=float, default=1.0)
    qe.add_argument("--eps", type=float, default=1e-3)
    qe.add_argument("--d", type=int, default=1)
    qe.add_argument("--norm1", type=float, default=1.0)
    qe.add_argument("--norm-max", type=float, default=1.0)
    qe.add_argument("--n", type=int, default=16, help="search-space size")
    qe.add_argument("--t", type=int, default=1, help="marked-item count")
    qe.set_defaults(func=cmd_qcost_eval)

    qv = qsub.add_parser("verify",
                         help="Monte-Carlo check of a search expectation")
    qv.add_argument("subroutine", choices=["qsearch", "qmin"])
    qv.add_argument("--n", type=int, default=16)
    qv.add_argument("--t", type=int, default=1)
    qv.add_argument("--trials", type=int, default=100_000)
    qv.add_argument("--seed", type=int, default=0)
    qv.set_defaults(func=cmd_qcost_verify)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: simulate (Monte Carlo report), exact (rational laws as JSON),
enumerate (stream standard deals), urn (urn reports), graph (one attachment
graph), constants (named constants and covariance minors), verify (the full
acceptance suite; exits nonzero on any failure).
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import exact, limits
from .acceptance import DEFAULT_SEED, AcceptanceSuite
from .harness import ALL_STATISTICS, Report, TrialPlan, run_trials
from .pagraph import build_graph, degree_histogram
from .sampler import (
    RngStream,
    blocks,
    enumerate_standard_deals,
    sample_chord_diagram,
    sample_deal_insertion,
)
from .urn import UrnState, apply_draw, urn_counts_batch


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _cmd_simulate(args) -> int:
    stats = ALL_STATISTICS if args.stats == "all" else tuple(args.stats.split(","))
    plan = TrialPlan(
        n=args.n,
        trials=args.trials,
        seed=args.seed,
        statistics=stats,
        threads=args.threads,
        fmt=args.format,
        out=args.out,
    )
    report = run_trials(plan)
    _write(report.render(), args.out)
    return 0


def _cmd_exact(args) -> int:
    n = args.n
    if args.law == "first_match":
        values = {
            str(t): str(exact.first_match_pmf(n, t)) for t in range(2, n + 2)
        }
    elif args.law == "blocks":
        values = {
            str(i): str(exact.block_count_mean(n, i)) for i in range(1, n + 2)
        }
    elif args.law == "mean":
        values = {"mean": str(exact.first_match_mean(n))}
    elif args.law == "variance":
        values = {"variance": str(exact.first_match_var(n))}
    else:  # moment
        values = {
            f"moment_{args.r}": str(exact.first_match_factorial_moment(n, args.r))
        }
    _write(json.dumps({"n": n, "law": args.law, "values": values},
                      indent=2, sort_keys=True), args.out)
    return 0


def _cmd_enumerate(args) -> int:
    lines = []
    count = 0
    for deal in enumerate_standard_deals(args.n, cap=args.cap):
        lines.append(json.dumps(deal.to_json()))
        count += 1
    lines.append(json.dumps({"n": args.n, "count": count}))
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_urn(args) -> int:
    n, trials = args.n, args.trials
    if args.report == "counts":
        counts = urn_counts_batch(n, trials, args.seed, max_type=args.max_type)
        rows = [
            {
                "type": i,
                "mean_fraction": float((counts[:, i] / n).mean()),
                "target": limits.block_fraction_limit(i),
            }
            for i in range(1, 9)
        ]
        payload = {"n": n, "trials": trials, "report": "counts", "rows": rows}
    elif args.report == "fluctuations":
        counts = urn_counts_batch(n, trials, args.seed, max_type=args.max_type)
        rows = []
        for i in range(1, 4):
            z = (counts[:, i] - limits.block_fraction_limit(i) * n) / math.sqrt(n)
            rows.append(
                {
                    "type": i,
                    "variance": float(z.var(ddof=1)),
                    "target": limits.block_cov(i, i),
                }
            )
        payload = {"n": n, "trials": trials, "report": "fluctuations", "rows": rows}
    else:  # coupling
        ok = True
        for t in range(trials):
            _, trace, rows_ = sample_deal_insertion(
                n, RngStream(args.seed, t), keep_rows=True
            )
            state = UrnState()
            for k, typ in enumerate(trace.drawn_types, start=1):
                state = apply_draw(state, typ)
                want = dict(blocks(rows_[k - 1]).counts)
                want[0] = 1
                if state.as_dict() != want:
                    ok = False
        payload = {"n": n, "trials": trials, "report": "coupling", "exact_match": ok}
    _write(json.dumps(payload, indent=2, sort_keys=True), args.out)
    return 0


def _cmd_graph(args) -> int:
    cd = sample_chord_diagram(args.n, RngStream(args.seed, 0))
    g = build_graph(cd)
    _write(json.dumps(g.to_json(), sort_keys=True), args.out)
    if args.histogram:
        hist = degree_histogram(g)
        lines = ["degree,count"] + [f"{d},{c}" for d, c in sorted(hist.items())]
        with open(args.histogram, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0


def _cmd_constants(args) -> int:
    payload = {
        "constants": limits.named_constants(),
        "block_fractions": {
            str(i): limits.block_fraction_limit(i) for i in range(1, 9)
        },
        "covariance_minor": limits.block_cov_matrix(args.k).tolist(),
    }
    _write(json.dumps(payload, indent=2, sort_keys=True), args.out)
    return 0


def _cmd_verify(args) -> int:
    only = {int(x) for x in args.only.split(",")} if args.only else None
    suite = AcceptanceSuite(seed=args.seed, threads=args.threads)
    outcomes = suite.run_all(only=only)
    for oc in outcomes:
        print(oc.line())
    failed = [oc for oc in outcomes if not oc.passed]
    print(f"{len(outcomes) - len(failed)}/{len(outcomes)} criteria passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chordstat",
        description="Memory-game statistics: exact laws, samplers, urn and "
        "graph equivalences, and Monte Carlo verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_default=None):
        p.add_argument("--n", type=int, required=n_default is None, default=n_default)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("simulate", help="Monte Carlo report for one (n, trials)")
    common(p)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--stats", type=str, default="all",
                   help=f"comma list from {','.join(ALL_STATISTICS)}")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("exact", help="exact rational laws as JSON")
    common(p)
    p.add_argument("--law", choices=("first_match", "blocks", "mean", "variance", "moment"),
                   default="first_match")
    p.add_argument("--r", type=int, default=1, help="moment order for --law moment")
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("enumerate", help="stream every standard deal (JSON lines)")
    common(p)
    p.add_argument("--cap", type=int, default=8)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("urn", help="urn simulation reports")
    common(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--report", choices=("counts", "fluctuations", "coupling"),
                   default="counts")
    p.add_argument("--max-type", type=int, default=1024)
    p.set_defaults(func=_cmd_urn)

    p = sub.add_parser("graph", help="sample one preferential-attachment graph")
    common(p)
    p.add_argument("--histogram", type=str, default=None,
                   help="also write a degree,count CSV here")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("constants", help="named constants and covariance minor")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--only", type=str, default=None,
                   help="comma list of criterion ids, e.g. 1,2,5")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point (``strategyproof-review``).

Exit codes: 0 ok, 2 parse error, 3 infeasible partition, 4 contract
violation, 5 budget refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .aggregate import borda_aggregate, divide_and_rank_aggregate
from .assign import divide_and_rank_assign
from .components import prune_top_degree
from .errors import ContractViolation, ReviewError
from .impossibility import count_total_ranking_rules, verify_chain_gu_wsp
from .misplacement import misplacement_monte_carlo
from .model import AssignmentParams
from .partition import partition
from .pipeline import (
    PipelineConfig,
    StageError,
    format_rows,
    prune_rows,
    read_conflicts,
    report,
    run_pipeline,
    stats_rows,
)
from .properties import check_gu, check_pu, check_sp_exhaustive, check_sp_randomized


def _read(path):
    return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _graph(args):
    return read_conflicts(args.graph, args.format)


def _params(args):
    return AssignmentParams(args.mu, args.lam)


def cmd_stats(args):
    graph = _graph(args)
    _emit(format_rows(stats_rows(graph), tsv=args.tsv), args.output)


def cmd_prune(args):
    graph = _graph(args)
    checkpoints = [int(k) for k in args.checkpoints.split(",")] if args.checkpoints else [args.remove]
    trace = prune_top_degree(graph, args.remove, [0] + checkpoints, adaptive=not args.static)
    rows = prune_rows(trace)
    if args.json:
        _emit(io.dumps({"header": rows[0], "rows": rows[1:], "removed": [graph.reviewer_ids[i] for i in trace.removed]}), args.output)
    else:
        _emit(format_rows(rows, tsv=args.tsv), args.output)


def cmd_partition(args):
    graph = _graph(args)
    _emit(io.serialize(partition(graph, _params(args)), graph), args.output)


def cmd_assign(args):
    graph = _graph(args)
    rg, _ = divide_and_rank_assign(graph, _params(args), args.strategy)
    _emit(io.serialize(rg, graph), args.output)


def cmd_aggregate(args):
    graph = _graph(args)
    parts = io.parse_partition(_read(args.partition), graph)
    profile = io.parse_profile(_read(args.profile), graph)
    _emit(io.serialize(divide_and_rank_aggregate(profile, parts, args.strategy), graph), args.output)


def cmd_check(args):
    graph = _graph(args)
    rg = io.parse_assignment(_read(args.assignment), graph)
    if args.property in ("gu", "pu"):
        if not (args.profile and args.ranking):
            raise ContractViolation(f"check {args.property} needs --profile and --ranking")
        profile = io.parse_profile(_read(args.profile), graph)
        ranking = io.parse_ranking(_read(args.ranking), graph)
        rep = (check_gu if args.property == "gu" else check_pu)(rg, profile, ranking)
    else:
        if args.rule == "divide-and-rank":
            if not args.partition:
                raise ContractViolation("check sp with the divide-and-rank rule needs --partition")
            parts = io.parse_partition(_read(args.partition), graph)
            agg = lambda prof: divide_and_rank_aggregate(prof, parts)
        else:
            agg = lambda prof: borda_aggregate(prof, rg.num_papers)
        if args.exhaustive:
            rep = check_sp_exhaustive(rg, graph, agg, budget=args.budget)
        else:
            if args.seed is None:
                raise ContractViolation("--seed is required with --trials")
            rep = check_sp_randomized(rg, graph, agg, args.trials, args.seed)
    _emit(rep.to_json(), args.output)
    return 0


def cmd_simulate(args):
    rep = misplacement_monte_carlo(args.n, args.n1, args.delta, args.trials, args.seed)
    _emit(io.dumps(rep.to_dict()), args.output)


def cmd_verify(args):
    if args.which in ("theorem7", "total-ranking"):
        rep = count_total_ranking_rules(args.n, args.m)
    else:
        rep = verify_chain_gu_wsp()
    _emit(io.dumps(rep), args.output)


def cmd_pipeline(args):
    config = PipelineConfig(
        conflicts=args.graph,
        conflicts_format=args.format,
        mu=args.mu,
        lam=args.lam,
        out_dir=args.out,
        profile=args.profile,
        assign_strategy=args.assign_strategy,
        aggregate_strategy=args.aggregate_strategy,
        seed=args.seed,
        sp_trials=args.trials,
    )
    written = run_pipeline(config)
    sys.stdout.write(io.dumps(written))


def cmd_report(args):
    sys.stdout.write(report(args.paths))


def build_parser():
    p = argparse.ArgumentParser(prog="strategyproof-review", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp):
        sp.add_argument("--graph", "-g", required=True, help="conflicts: pairs-csv (.csv) or graph-json")
        sp.add_argument("--format", choices=["pairs-csv", "graph-json"], help="override format detection")
        sp.add_argument("--output", "-o", help="write here instead of stdout")

    def load_args(sp):
        sp.add_argument("--mu", type=int, required=True, help="max papers per reviewer")
        sp.add_argument("--lambda", dest="lam", type=int, required=True, help="min reviews per paper")

    sp = sub.add_parser("stats", help="connected-component table")
    graph_args(sp)
    sp.add_argument("--tsv", action="store_true")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("prune", help="remove max-degree authors and tabulate components")
    graph_args(sp)
    sp.add_argument("--remove", type=int, required=True)
    sp.add_argument("--checkpoints", help="comma-separated removal counts, e.g. 5,10,15")
    sp.add_argument("--static", action="store_true", help="rank authors by initial degree")
    sp.add_argument("--tsv", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_prune)

    sp = sub.add_parser("partition", help="conflict-free two-sided split (partition-json)")
    graph_args(sp)
    load_args(sp)
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("assign", help="cross-partition assignment (assignment-json)")
    graph_args(sp)
    load_args(sp)
    sp.add_argument("--strategy", default="rr", choices=["rr", "round-robin"])
    sp.set_defaults(func=cmd_assign)

    sp = sub.add_parser("aggregate", help="Divide-and-Rank aggregation (ranking-json)")
    graph_args(sp)
    sp.add_argument("--partition", required=True)
    sp.add_argument("--profile", required=True)
    sp.add_argument("--strategy", default="borda", choices=["borda"])
    sp.set_defaults(func=cmd_aggregate)

    sp = sub.add_parser("check", help="property report for GU, PU or SP")
    sp.add_argument("property", choices=["gu", "pu", "sp"])
    graph_args(sp)
    sp.add_argument("--assignment", required=True)
    sp.add_argument("--profile")
    sp.add_argument("--ranking")
    sp.add_argument("--partition")
    sp.add_argument("--rule", default="divide-and-rank", choices=["divide-and-rank", "borda"])
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--budget", type=int, default=200_000)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("simulate", help="Monte-Carlo displacement study")
    sp.add_argument("experiment", choices=["misplacement"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--n1", type=int, required=True)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify-impossibility", help="finite certificates for the negative results")
    sp.add_argument("which", choices=["theorem7", "total-ranking", "prop6", "chain"])
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("pipeline", help="partition, assign, aggregate and audit in one go")
    sp.add_argument("--graph", "-g", required=True)
    sp.add_argument("--format", choices=["pairs-csv", "graph-json"])
    load_args(sp)
    sp.add_argument("--profile")
    sp.add_argument("--assign-strategy", default="rr")
    sp.add_argument("--aggregate-strategy", default="borda")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--trials", type=int, default=1000, help="sampled SP trials (0 disables)")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("report", help="summarize artifacts")
    sp.add_argument("paths", nargs="+")
    sp.set_defaults(func=cmd_report)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except StageError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
        return exc.exit_code
    except ReviewError as exc:
        sys.stderr.write(json.dumps({"code": exc.code, "exit_code": exc.exit_code, "message": str(exc)}, sort_keys=True) + "\n")
        return exc.exit_code
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(json.dumps({"code": "parse", "exit_code": 2, "message": str(exc)}) + "\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

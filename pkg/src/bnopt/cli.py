"""Command-line front end: score, learn, verify.

Exit codes: 0 success, 2 input error, 3 flag/usage error, 4 memory budget
exceeded, 5 verification failure. Reports go to stdout (and --out) as JSON
with a fixed key order; wall-clock timings go to stderr so identical inputs
and seeds produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time

from .bitset import bits
from .dataset import DEFAULT_MISSING_TOKENS, DataError, load_dataset
from .heuristics import (DynamicHeuristic, SimpleHeuristic, StaticHeuristic,
                         parse_grouping)
from .scoring import (ScoreSet, build_score_tables, format_score_file,
                      parent_limit, read_score_file, write_score_file)
from .search import (DEFAULT_MEM_BUDGET, LearnedNetwork, MemoryBudgetError,
                     SearchStats, astar, bfbnb, dp_oracle, initial_upper_bound)
from .verify import run_all

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_USAGE = 3
EXIT_MEMORY = 4
EXIT_VERIFY = 5

_SCORE_HEADER = re.compile(r"^n\s+\d+\s*$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to the usage exit code
        raise UsageError(message)


def _is_score_file(path) -> bool:
    try:
        with open(path) as f:
            for line in f:
                if line.strip():
                    return bool(_SCORE_HEADER.match(line))
    except OSError as e:
        raise DataError(f"{path}: {e.strerror}") from e
    return False


def _mem_budget_default() -> int:
    env = os.environ.get("BNOPT_MEM_BUDGET")
    return int(env) if env else DEFAULT_MEM_BUDGET


def emit_dot(net: LearnedNetwork, names: list[str]) -> str:
    """DOT text with one edge per parent relation; nodes and edges in
    ascending index order, no layout hints."""
    q = lambda s: '"' + s.replace('"', '\\"') + '"'
    lines = ["digraph bn {"]
    lines += [f"  {q(nm)};" for nm in names]
    for x in range(net.n):
        for y in bits(net.parents[x]):
            lines.append(f"  {q(names[y])} -> {q(names[x])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _build_report(scores: ScoreSet, net: LearnedNetwork, stats: SearchStats,
                  config: dict, N, pdb_size) -> str:
    report = {
        "dataset": {"n": scores.n, "N": N, "names": scores.names},
        "config": config,
        "total_score": net.total_score,
        "parents": {
            scores.names[x]: [scores.names[y] for y in bits(net.parents[x])]
            for x in range(scores.n)
        },
        "stats": {
            "nodes_expanded": stats.nodes_expanded,
            "nodes_generated": stats.nodes_generated,
            "reopened": stats.reopened,
            "peak_open_size": stats.peak_open_size,
            "pdb_size": pdb_size,
        },
    }
    return json.dumps(report, indent=2) + "\n"


def cmd_score(args) -> int:
    missing = (frozenset(args.missing_token) if args.missing_token
               else DEFAULT_MISSING_TOKENS)
    data = load_dataset(args.input, delimiter=args.delimiter,
                        missing_tokens=missing,
                        header=not args.no_header)
    limit = parent_limit(data.N)
    if args.max_parents is not None and args.max_parents > limit:
        raise UsageError(
            f"--max-parents {args.max_parents} is above the record-count "
            f"limit {limit}; the limit may only be tightened")
    print(f"# {data.n} variables, {data.N} records, parent limit "
          f"{args.max_parents if args.max_parents is not None else limit}",
          file=sys.stderr)
    scores = build_score_tables(data, max_parents=args.max_parents)
    if args.out:
        write_score_file(args.out, scores)
    else:
        sys.stdout.write(format_score_file(scores))
    return EXIT_OK


def _load_scores(args) -> tuple[ScoreSet, int | None, int | None]:
    """(scores, N, derived parent limit); N and limit are None for
    score-file input."""
    if _is_score_file(args.input):
        return read_score_file(args.input), None, None
    data = load_dataset(args.input)
    limit = parent_limit(data.N)
    print(f"# scoring {args.input}: {data.n} variables, {data.N} records, "
          f"parent limit {limit}", file=sys.stderr)
    return build_score_tables(data), data.N, limit


def cmd_learn(args) -> int:
    if args.k is not None and args.heuristic != "dynamic":
        raise UsageError("--k only makes sense with --heuristic dynamic")
    if args.groups is not None and args.heuristic != "static":
        raise UsageError("--groups only makes sense with --heuristic static")
    scores, N, limit = _load_scores(args)
    tables = scores.tables

    t0 = time.perf_counter()
    heuristic = None
    if args.algorithm != "dp":
        try:
            if args.heuristic == "simple":
                heuristic = SimpleHeuristic(tables)
            elif args.heuristic == "dynamic":
                heuristic = DynamicHeuristic(tables, args.k if args.k else 3)
            else:
                grouping = parse_grouping(args.groups or "auto", scores.n)
                heuristic = StaticHeuristic(tables, grouping)
        except ValueError as e:  # bad --k range, bad --groups syntax or cap
            raise UsageError(str(e)) from e
    pdb_time = time.perf_counter() - t0

    t0 = time.perf_counter()
    if args.algorithm == "dp":
        net, _ = dp_oracle(tables)
        stats = SearchStats(nodes_expanded=1 << scores.n,
                            nodes_generated=1 << scores.n)
    elif args.algorithm == "astar":
        net, stats = astar(tables, heuristic, mem_budget=args.mem_budget)
    else:
        incumbent = initial_upper_bound(tables, args.seed, args.restarts)
        net, stats = bfbnb(tables, heuristic, incumbent,
                           mem_budget=args.mem_budget)
    stats.pdb_build_time = pdb_time
    stats.search_time = time.perf_counter() - t0
    print(f"# pdb build {stats.pdb_build_time:.3f}s, "
          f"search {stats.search_time:.3f}s", file=sys.stderr)

    config = {
        "algorithm": args.algorithm,
        "heuristic": args.heuristic if args.algorithm != "dp" else None,
        "k": (args.k or 3) if args.heuristic == "dynamic"
             and args.algorithm != "dp" else None,
        "groups": (args.groups or "auto") if args.heuristic == "static"
                  and args.algorithm != "dp" else None,
        "seed": args.seed,
        "restarts": args.restarts,
        "parent_limit": limit,
    }
    text = _build_report(scores, net, stats, config, N,
                         heuristic.size if heuristic else None)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    if args.dot:
        with open(args.dot, "w") as f:
            f.write(emit_dot(net, scores.names))
    return EXIT_OK


def cmd_verify(args) -> int:
    if _is_score_file(args.input):
        scores, data = read_score_file(args.input), None
    else:
        data = load_dataset(args.input)
        scores = build_score_tables(data)
    try:
        ok, lines = run_all(scores, data, max_n=args.max_n)
    except ValueError as e:
        raise UsageError(str(e)) from e
    for line in lines:
        print(line)
    return EXIT_OK if ok else EXIT_VERIFY


def _make_parser() -> _Parser:
    p = _Parser(prog="bnopt",
                description="Exact Bayesian network structure learning by "
                            "shortest-path search over the order graph.")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("score", help="compute local scores for a data file")
    ps.add_argument("input")
    ps.add_argument("--out", help="score file path (default: stdout)")
    ps.add_argument("--max-parents", type=int,
                    help="tighten the in-degree limit (downward only)")
    ps.add_argument("--delimiter", default=",")
    ps.add_argument("--missing-token", action="append", default=None,
                    help="token treated as a missing cell (repeatable; "
                         "replaces the default set of '?' and empty)")
    ps.add_argument("--no-header", action="store_true",
                    help="headerless input; variables named X1..Xn")
    ps.set_defaults(func=cmd_score)

    pl = sub.add_parser("learn", help="learn an optimal network from a data "
                                      "or score file")
    pl.add_argument("input")
    pl.add_argument("--algorithm", choices=["astar", "bfbnb", "dp"],
                    default="astar")
    pl.add_argument("--heuristic", choices=["simple", "dynamic", "static"],
                    default="simple")
    pl.add_argument("--k", type=int, help="pattern size cap (dynamic only, "
                                          "default 3)")
    pl.add_argument("--groups", help="static grouping, e.g. '1-4,5-8' "
                                     "(1-based) or 'auto'")
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--restarts", type=int, default=8)
    pl.add_argument("--mem-budget", type=int, default=_mem_budget_default(),
                    help="search memory budget in bytes "
                         "(default $BNOPT_MEM_BUDGET or 4 GiB)")
    pl.add_argument("--out", help="also write the JSON report here")
    pl.add_argument("--dot", help="write the network in DOT format here")
    pl.set_defaults(func=cmd_learn)

    pv = sub.add_parser("verify", help="run exhaustive invariant checks")
    pv.add_argument("input")
    pv.add_argument("--max-n", type=int, default=10,
                    help="refuse exhaustive checks above this variable count")
    pv.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"bnopt: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError, ValueError) as e:
        print(f"bnopt: {e}", file=sys.stderr)
        return EXIT_INPUT
    except MemoryBudgetError as e:
        s = e.stats
        print(f"bnopt: {e} (expanded {s.nodes_expanded}, generated "
              f"{s.nodes_generated})", file=sys.stderr)
        return EXIT_MEMORY


if __name__ == "__main__":
    sys.exit(main())

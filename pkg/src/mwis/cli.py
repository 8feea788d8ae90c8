"""Batch command-line front end.

Subcommands:
  solve     run the full metaheuristic on a graph file
  exact     brute-force optimum for small graphs (n <= 30)
  generate  write a synthetic instance in edge-list format
  report    cross-run t* statistic from trace CSV files

Exit codes: 0 success, 1 input error, 2 infeasible initial solution.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import driver, generate, oracle
from .graph import GraphFormatError, load_graph, save_graph
from .greedy import GreedyConfig
from .local_search import LocalSearchParams
from .relink import RelinkParams
from .solution import InfeasibleSolutionError, load_solution

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2


def _add_solve_parser(sub) -> None:
    p = sub.add_parser("solve", help="run the metaheuristic solver")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", default="edge-list", choices=["edge-list", "metis"])
    p.add_argument("--time-limit", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", type=str, default=None,
                   help="comma-separated seeds, run concurrently (overrides --seed)")
    p.add_argument("--initial", default=None, help="initial solution file")
    p.add_argument("--relaxed", default=None, help="relaxed LP solution file")
    p.add_argument("--trace", default=None, help="trace CSV output path")
    p.add_argument("--solution-out", default=None, help="write best solution node IDs here")
    p.add_argument("--elite-size", type=int, default=1)
    p.add_argument("--ls-before-relinking", action="store_true")
    p.add_argument("--greedy-mode", default="adaptive",
                   choices=["deterministic", "randomized", "adaptive"])
    p.add_argument("--greedy-k-fraction", type=float, default=0.10)
    p.add_argument("--num-iterations", type=int, default=64)
    p.add_argument("--exact-recursion-limit", type=int, default=7)
    p.add_argument("--aap-max-len", type=int, default=32)
    p.add_argument("--aap-gain-floor", type=float, default=None)
    p.add_argument("--aap-delta", type=float, default=50.0)
    p.add_argument("--perturb-count", type=int, default=1)
    p.add_argument("--relink-f0", type=float, default=0.9998)
    p.add_argument("--relink-cn0", type=float, default=1.0)
    p.add_argument("--relink-cp0", type=float, default=0.1)
    p.add_argument("--relink-f-decay", type=float, default=0.9998)
    p.add_argument("--relink-budget-growth", type=float, default=1.5)
    p.add_argument("--relink-budget-mode", default="absolute",
                   choices=["absolute", "fraction"])
    p.add_argument("--lp-epsilon", type=float, default=0.005)
    p.add_argument("--check-interstate-every", type=int, default=0,
                   help="debug: verify the interstate graph every N committed moves")


def _config_for(args, seed: int) -> driver.RunConfig:
    return driver.RunConfig(
        time_limit=args.time_limit,
        seed=seed,
        ls_before_relinking=args.ls_before_relinking,
        elite_capacity=args.elite_size,
        greedy=GreedyConfig(k_fraction=args.greedy_k_fraction, mode=args.greedy_mode),
        ls_params=LocalSearchParams(
            num_iterations=args.num_iterations,
            exact_recursion_limit=args.exact_recursion_limit,
            aap_max_len=args.aap_max_len,
            aap_gain_floor=args.aap_gain_floor,
            aap_delta=args.aap_delta,
            perturb_count=args.perturb_count),
        relink_params=RelinkParams(
            f=args.relink_f0, c_n=args.relink_cn0, c_p=args.relink_cp0,
            f0=args.relink_f0, c_n0=args.relink_cn0, c_p0=args.relink_cp0,
            f_decay=args.relink_f_decay, budget_growth=args.relink_budget_growth,
            budget_mode=args.relink_budget_mode),
        initial_path=args.initial,
        relaxed_path=args.relaxed,
        lp_epsilon=args.lp_epsilon,
        check_interstate_every=args.check_interstate_every,
    )


def _trace_path_for(base: str, seed: int, multi: bool) -> str:
    if not multi:
        return base
    p = Path(base)
    return str(p.with_name(f"{p.stem}-seed{seed}{p.suffix or '.csv'}"))


def _cmd_solve(args) -> int:
    g = load_graph(args.graph, args.format)
    initial = None
    if args.initial:
        # infeasibility is its own exit code; surface it before solving
        try:
            initial = load_solution(args.initial, g)
        except InfeasibleSolutionError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_INFEASIBLE
    seeds = ([int(t) for t in args.seeds.split(",")] if args.seeds else [args.seed])
    configs = [_config_for(args, seed) for seed in seeds]

    results = []
    if len(configs) == 1:
        results.append(driver.run(g, configs[0], initial=initial))
    else:
        with ThreadPoolExecutor(max_workers=len(configs)) as pool:
            futures = [pool.submit(driver.run, g, cfg, None, initial)
                       for cfg in configs]
            results = [f.result() for f in futures]

    summaries = []
    best_overall = None
    for cfg, (best, trace) in zip(configs, results):
        if args.trace:
            driver.write_trace_csv(
                trace, _trace_path_for(args.trace, cfg.seed, len(configs) > 1))
        summaries.append(driver.summarize(g, cfg, best, trace))
        if best_overall is None or best.total_weight > best_overall.total_weight:
            best_overall = best
    if args.solution_out:
        with open(args.solution_out, "w", encoding="utf-8") as f:
            for v in sorted(best_overall.members()):
                f.write(f"{v}\n")
    if len(summaries) == 1:
        print(driver.summary_json(summaries[0]), end="")
    else:
        merged = {"schema": 1, "best_weight": best_overall.total_weight,
                  "runs": summaries}
        print(json.dumps(merged, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_exact(args) -> int:
    g = load_graph(args.graph, args.format)
    if g.n > oracle.BB_NODE_LIMIT:
        print(f"error: exact solving limited to n <= {oracle.BB_NODE_LIMIT}, "
              f"got n={g.n}", file=sys.stderr)
        return EXIT_INPUT
    res = oracle.exact_mwis(g, method=args.method)
    print(json.dumps({"weight": res.weight, "witness": sorted(res.witness),
                      "explored": res.explored}, sort_keys=True))
    return EXIT_OK


def _parse_weight_rule(text: str) -> dict:
    parts = text.split(":")
    if parts[0] == "uniform-int" and len(parts) == 3:
        return {"weight_rule": "uniform-int", "w_lo": int(parts[1]), "w_hi": int(parts[2])}
    if parts[0] == "id-mod" and len(parts) == 2:
        return {"weight_rule": "id-mod", "mod": int(parts[1])}
    raise ValueError(f"bad weight rule {text!r} (use uniform-int:LO:HI or id-mod:C)")


def _cmd_generate(args) -> int:
    spec = generate.GenSpec(model=args.model, n=args.n, p=args.p,
                            rows=args.rows, cols=args.cols, seed=args.seed,
                            **_parse_weight_rule(args.weights))
    g = generate.generate_graph(spec)
    save_graph(g, args.out, "edge-list")
    print(f"wrote {args.out}: n={g.n} m={g.m}")
    return EXIT_OK


def _cmd_report(args) -> int:
    runs = []
    for path in args.traces:
        rows = []
        with open(path, newline="", encoding="utf-8") as f:
            for row in csv.DictReader(f):
                rows.append((float(row["elapsed_s"]), float(row["best_weight"])))
        if not rows:
            print(f"error: empty trace {path}", file=sys.stderr)
            return EXIT_INPUT
        runs.append((path, rows))
    best_path, best_rows = max(runs, key=lambda r: r[1][-1][1])
    t_star = next((t for t, w in best_rows if w >= args.threshold), None)
    print(json.dumps({
        "threshold": args.threshold,
        "best_run": best_path,
        "best_final": best_rows[-1][1],
        "t_star": t_star,
        "runs": len(runs),
    }, sort_keys=True))
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="mwis",
                                     description="maximum-weight independent set solver")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_solve_parser(sub)

    p = sub.add_parser("exact", help="brute-force optimum (n <= 30)")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", default="edge-list", choices=["edge-list", "metis"])
    p.add_argument("--method", default="branch-and-bound",
                   choices=["branch-and-bound", "enumerate"])

    p = sub.add_parser("generate", help="write a synthetic instance")
    p.add_argument("--model", required=True,
                   choices=["gnp", "path", "cycle", "star", "grid"])
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--rows", type=int, default=0)
    p.add_argument("--cols", type=int, default=0)
    p.add_argument("--weights", default="uniform-int:1:200")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("report", help="compute t* across trace files")
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("traces", nargs="+")

    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "exact":
            return _cmd_exact(args)
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "report":
            return _cmd_report(args)
    except (GraphFormatError, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

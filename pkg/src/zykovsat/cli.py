"""``color`` command line: solve, decide, bench, generate.

Exit codes: 0 solved, 10 k-colorable, 20 not k-colorable, 30 budget
exhausted, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bench
from .driver import MODES, SolveConfig, decide_k, solve_chromatic
from .encodings import build_assignment, build_full_zykov
from .graph_io import DimacsError, erdos_renyi, read_dimacs_file, write_dimacs

EXIT_SOLVED = 0
EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_TIMEOUT = 30
EXIT_USAGE = 2

MODE_ALIASES = {"full": "full-zykov"}


def _mode(text: str) -> str:
    text = MODE_ALIASES.get(text, text)
    if text not in MODES:
        raise argparse.ArgumentTypeError(f"mode must be one of {', '.join(MODES)} (or 'full')")
    return text


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", type=_mode, default="zykov",
                   help="zykov | assignment | full (full-zykov) | transitivity-only")
    p.add_argument("--no-mnts", action="store_true", help="no tabu clique search inside the propagator")
    p.add_argument("--decision", choices=("default", "clique"), default="default")
    p.add_argument("--no-dominated", action="store_true", help="no dominated-vertex decision hints")
    p.add_argument("--non-incremental", action="store_true", help="fresh solver for every k")
    p.add_argument("--top-down", action="store_true", help="search k downwards from the upper bound")
    p.add_argument("--no-preprocess", action="store_true", help="skip vertex reductions")
    p.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    p.add_argument("--conflict-limit", type=int, default=None, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--debug", action="store_true", help="enable runtime contract checks")


def _config(args) -> SolveConfig:
    return SolveConfig(
        mode=args.mode,
        search="top-down" if args.top_down else "bottom-up",
        incremental=not args.non_incremental,
        mnts=not args.no_mnts,
        dominated=not args.no_dominated,
        decision=args.decision,
        preprocess=not args.no_preprocess,
        time_limit=args.time_limit,
        conflict_limit=args.conflict_limit,
        seed=args.seed,
        debug=args.debug,
    )


def _load(path):
    try:
        return read_dimacs_file(path, renumber=True)
    except (OSError, DimacsError) as exc:
        raise SystemExit(_usage_error(f"cannot read {path}: {exc}"))


def _usage_error(msg: str) -> int:
    print(f"color: error: {msg}", file=sys.stderr)
    return EXIT_USAGE


def _coloring_lines(g, coloring):
    for v in sorted(coloring):
        label = g.label(v)
        yield f"v {label} {coloring[v]}"


def _print_stats(stats: dict, as_json: bool, extra: dict) -> None:
    if as_json:
        print(json.dumps({**extra, **stats}, sort_keys=True))
        return
    for key, val in extra.items():
        print(f"{key}: {val}")
    for key in sorted(stats):
        print(f"  {key}: {stats[key]}")


def cmd_solve(args) -> int:
    g = _load(args.file)
    rep = solve_chromatic(g, _config(args))
    if rep.solved:
        print(f"chromatic number: {rep.chi}")
    else:
        print("timeout")
    print(f"bounds: {rep.lb} {rep.ub}")
    if args.print_coloring and rep.coloring:
        for line in _coloring_lines(g, rep.coloring):
            print(line)
    extra = {"time": round(rep.seconds, 4), "n": g.n, "m": g.m, "reduced_n": rep.reduced_n,
             "steps": [[s.k, s.result, s.conflicts] for s in rep.steps]}
    _print_stats(rep.stats, args.stats_json, extra)
    return EXIT_SOLVED if rep.solved else EXIT_TIMEOUT


def cmd_decide(args) -> int:
    g = _load(args.file)
    if args.k < 1:
        return _usage_error("--k must be >= 1")
    if args.dump_cnf:
        if args.mode == "assignment":
            cnf = build_assignment(g, args.k)
        else:
            cnf = build_full_zykov(g, args.k).cnf
        Path(args.dump_cnf).write_text(cnf.to_dimacs())
    res = decide_k(g, args.k, _config(args))
    print(res.status)
    if args.print_coloring and res.coloring:
        for line in _coloring_lines(g, res.coloring):
            print(line)
    _print_stats(res.stats, args.stats_json, {"k": args.k, "result": res.status})
    return {"SAT": EXIT_SAT, "UNSAT": EXIT_UNSAT}.get(res.status, EXIT_TIMEOUT)


def cmd_generate(args) -> int:
    g = erdos_renyi(args.n, args.p, args.seed)
    text = write_dimacs(g, f"G({args.n},{args.p:g}) seed {args.seed}")
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_SOLVED


def cmd_bench(args) -> int:
    if args.dir:
        if not Path(args.dir).is_dir():
            return _usage_error(f"{args.dir} is not a directory")
        instances = bench.dir_instances(args.dir)
    else:
        ns = bench.parse_int_spec(args.n) if args.n else list(bench.DEFAULT_ER_N)
        ps = [float(x) for x in args.p.split(",")] if args.p else list(bench.DEFAULT_ER_P)
        instances = bench.er_instances(ns, ps, args.seeds, args.seed_base)
    if args.configs:
        specs = bench.expand_configs(args.configs.split(","))
    else:
        cfg = _config(args)
        specs = [cfg.mode if cfg.flags() == "default" else f"{cfg.mode}+{cfg.flags()}"]
    base = dict(time_limit=args.time_limit, conflict_limit=args.conflict_limit,
                seed=args.seed, debug=args.debug)
    try:
        rows = bench.run_benchmark(instances, specs, args.out, jobs=args.jobs, base=base,
                                   summary_csv=args.summary)
    except ValueError as exc:
        return _usage_error(str(exc))
    solved = sum(r["outcome"] == "solved" for r in rows)
    print(f"{len(rows)} runs, {solved} solved -> {args.out}")
    return EXIT_SOLVED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="color", description="Exact graph coloring via SAT.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute the chromatic number")
    p.add_argument("file")
    _add_solver_flags(p)
    p.add_argument("--print-coloring", action="store_true")
    p.add_argument("--stats-json", action="store_true", help="statistics as one JSON line")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("decide", help="decide k-colorability")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    _add_solver_flags(p)
    p.add_argument("--print-coloring", action="store_true")
    p.add_argument("--stats-json", action="store_true")
    p.add_argument("--dump-cnf", metavar="PATH",
                   help="write the CNF of the chosen encoding (assignment, else full Zykov)")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("generate", help="write a G(n, p) graph in DIMACS format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="run a benchmark matrix and write CSV")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--dir", help="directory of DIMACS files")
    src.add_argument("--n", help="ER sizes, e.g. 70..110:10 or 70,80 (default: 70..110:10)")
    p.add_argument("--p", help="comma-separated ER edge probabilities (default: 0.05 to 0.9, ten values)")
    p.add_argument("--seeds", type=int, default=100, help="graphs per (n, p)")
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--configs", help="comma list of mode[+flag...] or a preset: " + ", ".join(bench.PRESETS))
    p.add_argument("--out", required=True, help="CSV file (rows are appended)")
    p.add_argument("--summary", help="solved-within-t summary CSV")
    p.add_argument("--jobs", type=int, default=1)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

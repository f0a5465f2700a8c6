"""Benchmark harness: instance enumeration, config matrix, CSV output.

Every (instance, config) pair yields one CSV row. Rows are produced in
input order even with several worker processes, and apart from the
``wall_time`` column they depend only on the instances, configs and seeds
(as long as runs are limited by conflicts rather than time).
"""

from __future__ import annotations

import csv
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .driver import SolveConfig, solve_chromatic
from .graph_io import erdos_renyi, is_proper_coloring, num_colors, read_dimacs_file

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
COLUMNS = [
    "schema_version", "instance", "n", "m", "mode", "flags", "seed", "outcome",
    "chi", "lb", "ub", "colors", "wall_time", "conflicts", "decisions",
    "propagations", "prune_clique", "prune_mnts", "prune_mycielski",
    "positive", "hints", "reduced_n", "message",
]
TIME_COLUMNS = ("wall_time",)
SUMMARY_TIMES = (1, 10, 60, 600, 3600)
SUMMARY_COLUMNS = ["mode", "flags", "instances", "solved"] + [f"solved_within_{t}s" for t in SUMMARY_TIMES]

DEFAULT_ER_N = (70, 80, 90, 100, 110)
DEFAULT_ER_P = (0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.7, 0.9)

PRESETS = {
    "modes": ["zykov", "assignment", "full-zykov", "transitivity-only"],
    "ablation": [
        "zykov", "zykov+no-mnts", "zykov+decision-clique", "zykov+no-dominated",
        "zykov+non-incremental", "zykov+top-down", "full-zykov", "transitivity-only",
    ],
}

_FLAG_FIELDS = {
    "no-mnts": ("mnts", False),
    "no-dominated": ("dominated", False),
    "decision-clique": ("decision", "clique"),
    "non-incremental": ("incremental", False),
    "top-down": ("search", "top-down"),
    "no-preprocess": ("preprocess", False),
}


def config_from_spec(spec: str, **base) -> SolveConfig:
    """``mode[+flag...]`` with flags named as in ``SolveConfig.flags``."""
    parts = spec.split("+")
    kw = dict(base)
    kw["mode"] = parts[0]
    for flag in parts[1:]:
        if flag == "default":
            continue
        if flag not in _FLAG_FIELDS:
            raise ValueError(f"unknown flag {flag!r} in config {spec!r}")
        key, value = _FLAG_FIELDS[flag]
        kw[key] = value
    return SolveConfig(**kw)


def expand_configs(specs) -> list[str]:
    out = []
    for s in specs:
        out.extend(PRESETS.get(s, [s]))
    return out


@dataclass(frozen=True)
class Instance:
    name: str
    path: str | None = None
    n: int = 0
    p: float = 0.0
    seed: int = 0

    def load(self):
        if self.path is not None:
            return read_dimacs_file(self.path, renumber=True)
        return erdos_renyi(self.n, self.p, self.seed)


def parse_int_spec(text: str) -> list[int]:
    """``70..110:10``, ``6..14`` or ``70,80,90``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            rng, _, step = part.partition(":")
            lo, hi = (int(x) for x in rng.split(".."))
            out.extend(range(lo, hi + 1, int(step) if step else 1))
        elif part:
            out.append(int(part))
    return out


def er_instances(ns, ps, seeds: int, seed_base: int = 0) -> list[Instance]:
    return [
        Instance(f"er_n{n}_p{p:g}_s{s}", None, n, p, seed_base + s)
        for n in ns for p in ps for s in range(seeds)
    ]


def dir_instances(path) -> list[Instance]:
    root = Path(path)
    files = sorted(f for f in root.iterdir() if f.is_file() and f.suffix in (".col", ".clq", ".dimacs"))
    return [Instance(f.stem, str(f)) for f in files]


def run_instance(task) -> dict:
    inst, spec, base = task
    cfg = config_from_spec(spec, **base)
    row = {c: "" for c in COLUMNS}
    row.update(schema_version=SCHEMA_VERSION, instance=inst.name, mode=cfg.mode,
               flags=cfg.flags(), seed=cfg.seed)
    try:
        g = inst.load()
    except (OSError, ValueError) as exc:
        row.update(outcome="error", message=str(exc).replace("\n", " "))
        return row
    row.update(n=g.n, m=g.m)
    rep = solve_chromatic(g, cfg)
    if rep.coloring and not is_proper_coloring(g, rep.coloring):
        raise AssertionError(f"{inst.name}: improper coloring reported")
    st = rep.stats
    row.update(
        outcome="solved" if rep.solved else "timeout",
        chi="" if rep.chi is None else rep.chi,
        lb=rep.lb, ub=rep.ub, colors=num_colors(rep.coloring),
        wall_time=f"{rep.seconds:.4f}",
        conflicts=st.get("conflicts", 0), decisions=st.get("decisions", 0),
        propagations=st.get("propagations", 0),
        prune_clique=st.get("prune_clique", 0) + st.get("prune_model", 0),
        prune_mnts=st.get("prune_mnts", 0), prune_mycielski=st.get("prune_mycielski", 0),
        positive=st.get("positive", 0), hints=st.get("hints", 0),
        reduced_n=rep.reduced_n,
    )
    return row


def run_benchmark(instances, configs, out_csv, *, jobs: int = 1, base=None,
                  summary_csv=None) -> list[dict]:
    """Solve every instance under every config; append rows to ``out_csv``."""
    base = dict(base or {})
    tasks = [(inst, spec, base) for inst in instances for spec in configs]
    for spec in configs:
        config_from_spec(spec, **base)  # fail fast on bad specs
    out_csv = Path(out_csv)
    fresh = not out_csv.exists() or out_csv.stat().st_size == 0
    rows = []
    with open(out_csv, "a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=COLUMNS)
        if fresh:
            writer.writeheader()
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = pool.map(run_instance, tasks)
                for row in results:
                    _emit(writer, fh, rows, row)
        else:
            for task in tasks:
                _emit(writer, fh, rows, run_instance(task))
    if summary_csv is not None:
        write_summary(rows, summary_csv)
    return rows


def _emit(writer, fh, rows, row):
    if row["outcome"] == "error":
        log.warning("skipped %s: %s", row["instance"], row["message"])
    writer.writerow(row)
    fh.flush()
    rows.append(row)


def summarize(rows) -> list[dict]:
    groups: dict = {}
    for r in rows:
        groups.setdefault((r["mode"], r["flags"]), []).append(r)
    out = []
    for (mode, flags), rs in groups.items():
        solved = [float(r["wall_time"]) for r in rs if r["outcome"] == "solved"]
        rec = {"mode": mode, "flags": flags, "instances": len(rs), "solved": len(solved)}
        for t in SUMMARY_TIMES:
            rec[f"solved_within_{t}s"] = sum(1 for x in solved if x <= t)
        out.append(rec)
    return out


def write_summary(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS)
        writer.writeheader()
        writer.writerows(summarize(rows))


def read_rows(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def strip_time(rows) -> list[dict]:
    return [{k: v for k, v in r.items() if k not in TIME_COLUMNS} for r in rows]


def default_jobs() -> int:
    return max(1, os.cpu_count() or 1)


__all__ = [
    "COLUMNS", "Instance", "PRESETS", "config_from_spec", "dir_instances",
    "er_instances", "expand_configs", "parse_int_spec", "run_benchmark",
    "run_instance", "summarize", "write_summary",
]

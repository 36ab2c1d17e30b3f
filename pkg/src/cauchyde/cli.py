"""Command-line entry points for the experiment harness.

Subcommands::

    cauchyde run <config.yaml> [--seed N] [--workers N] [--out DIR]
    cauchyde run --preset <name> [--seed N] [--workers N] [--out DIR]
    cauchyde compare <archiveA> <archiveB> [--alg-a ID] [--alg-b ID] [--alpha A]
    cauchyde quantiles <archive> [--out DIR]

``run`` executes a YAML configuration (or a named preset) and writes the
archive: summary.csv, finals.csv, table.txt/csv, timings.csv, and per-run
traces. ``compare`` pairs the final error values of two archives cell by
cell and prints a signed-rank verdict table. ``quantiles`` turns each
cell's traces into median and interquartile convergence curves.
"""

from __future__ import annotations

import argparse
import csv
import sys
from collections import defaultdict
from pathlib import Path

import numpy as np

from .core import ConfigurationError
from .driver import RunRecord
from .experiments import (ExperimentConfig, PRESETS, preset, run_experiment,
                          trace_quantiles)
from .stats import PairedSample, build_comparison_table


def _load_finals(archive_dir):
    path = Path(archive_dir) / "finals.csv"
    if not path.exists():
        raise ConfigurationError(f"{archive_dir} has no finals.csv")
    cells = defaultdict(dict)
    with open(path) as fh:
        for row in csv.DictReader(fh):
            key = (row["algorithm"], row["function"], int(row["dimension"]))
            cells[key][int(row["run"])] = float(row["final_fev"])
    out = {}
    for key, runs in cells.items():
        out[key] = np.array([runs[i] for i in sorted(runs)])
    return out


def _single_algorithm(cells, flag_value, flag_name, archive):
    algorithms = sorted({alg for alg, _, _ in cells})
    if flag_value is not None:
        if flag_value not in algorithms:
            raise ConfigurationError(
                f"{archive} has no algorithm {flag_value!r} (has: "
                f"{', '.join(algorithms)})")
        return flag_value
    if len(algorithms) == 1:
        return algorithms[0]
    raise ConfigurationError(
        f"{archive} holds several algorithms ({', '.join(algorithms)}); "
        f"pick one with {flag_name}")


def _cmd_run(args) -> int:
    if args.preset:
        config = preset(args.preset)
    elif args.config:
        config = ExperimentConfig.from_yaml(args.config)
    else:
        raise ConfigurationError("give a config file or --preset")
    if args.seed is not None:
        config.seed = args.seed
    if args.workers is not None:
        config.workers = args.workers
    if args.out is not None:
        config.out = args.out
    if not config.out:
        raise ConfigurationError("no output directory; set 'out' or pass --out")
    archive = run_experiment(config)
    print(f"wrote archive to {config.out} "
          f"({len(archive.records)} cells x {config.runs} runs)")
    return 0


def _cmd_compare(args) -> int:
    finals_a = _load_finals(args.archive_a)
    finals_b = _load_finals(args.archive_b)
    alg_a = _single_algorithm(finals_a, args.alg_a, "--alg-a", args.archive_a)
    alg_b = _single_algorithm(finals_b, args.alg_b, "--alg-b", args.archive_b)
    label_b = alg_b if alg_a != alg_b else f"{alg_b} (B)"
    cells = {}
    for (alg, function, dim), values in finals_a.items():
        if alg != alg_a:
            continue
        other = finals_b.get((alg_b, function, dim))
        if other is None or len(other) != len(values):
            continue
        cells[(label_b, f"{function}/D{dim}")] = PairedSample(values, other)
    if not cells:
        raise ConfigurationError("the two archives share no matching cells")
    table = build_comparison_table(cells, baseline=alg_a, alpha=args.alpha)
    sys.stdout.write(table.to_text())
    return 0


def _cmd_quantiles(args) -> int:
    traces_dir = Path(args.archive) / "traces"
    if not traces_dir.is_dir():
        raise ConfigurationError(f"{args.archive} has no traces directory")
    by_cell = defaultdict(list)
    for path in sorted(traces_dir.glob("trace_*__r*.csv")):
        cell = path.stem[len("trace_"):].rsplit("__r", 1)[0]
        rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        trace = [(int(nfe), float(fev)) for nfe, fev in rows]
        by_cell[cell].append(RunRecord(seed=None, final_fev=trace[-1][1],
                                       trace=trace))
    out_dir = Path(args.out) if args.out else Path(args.archive)
    out_dir.mkdir(parents=True, exist_ok=True)
    for cell, records in sorted(by_cell.items()):
        q = trace_quantiles(records)
        lines = ["nfe,q25,median,q75"]
        lines += [f"{int(nfe)},{q25!r},{q50!r},{q75!r}" for nfe, q25, q50, q75 in q]
        (out_dir / f"quantiles_{cell}.csv").write_text("\n".join(lines) + "\n")
        print(f"quantiles_{cell}.csv ({len(records)} runs)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cauchyde",
        description="differential-evolution experiment harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a configuration or preset")
    p_run.add_argument("config", nargs="?", help="YAML configuration file")
    p_run.add_argument("--preset", choices=sorted(PRESETS),
                       help="named experiment grid")
    p_run.add_argument("--seed", type=int, help="override the master seed")
    p_run.add_argument("--workers", type=int, help="parallel worker count")
    p_run.add_argument("--out", help="output directory")
    p_run.set_defaults(fn=_cmd_run)

    p_cmp = sub.add_parser("compare", help="signed-rank verdicts between two archives")
    p_cmp.add_argument("archive_a")
    p_cmp.add_argument("archive_b")
    p_cmp.add_argument("--alg-a", help="algorithm id in the first archive")
    p_cmp.add_argument("--alg-b", help="algorithm id in the second archive")
    p_cmp.add_argument("--alpha", type=float, default=0.05)
    p_cmp.set_defaults(fn=_cmd_compare)

    p_q = sub.add_parser("quantiles", help="median and IQR convergence curves")
    p_q.add_argument("archive")
    p_q.add_argument("--out", help="directory for the quantile CSVs")
    p_q.set_defaults(fn=_cmd_quantiles)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigurationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

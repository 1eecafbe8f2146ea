# app.py
"""
Command-line entry point of the lab.

Behavior:
- evolve: runs every replication of a run configuration into a run directory.
- posteval: post-evaluates the evolved genotypes with protocol A or B.
- iev-report: IEV/SNR series, mean and advisory for a run or a fitness-pairs CSV.
- sweep: runs a condition grid and compares the conditions with Kruskal-Wallis.
- plot-data: collects plot-ready CSVs from run directories.

The path of the main artifact is printed on stdout. Failures print one JSON
line on stderr and exit with code 2 (1 for unexpected errors such as I/O failures).
"""

import argparse
import json
import os
import sys

from dotenv import load_dotenv

from evolab.harness import cmd_evolve
from evolab.harness import cmd_iev_report
from evolab.harness import cmd_plotdata
from evolab.harness import cmd_posteval
from evolab.harness import cmd_sweep
from evolab.utils.errors import EvolabError

load_dotenv()

DEFAULT_WORKERS = int(os.getenv("EVOLAB_WORKERS", "1"))
DEFAULT_VERBOSE = int(os.getenv("EVOLAB_VERBOSE", "0"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evolab", description="Neuroevolution under environmental variation."
    )
    parser.add_argument(
        "-v",
        "--verbose",
        type=int,
        default=DEFAULT_VERBOSE,
        help="0 silent, 1 per-generation lines, 2 adds generation banners",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    evolve = commands.add_parser("evolve", help="run an experiment")
    evolve.add_argument("--config", required=True, help="run configuration (YAML)")
    evolve.add_argument("--run-dir", help="output directory (default <output_dir>/<name>)")
    evolve.add_argument("--workers", type=int, default=DEFAULT_WORKERS)
    evolve.add_argument("--seed", type=int, help="override the configured master seed")

    posteval = commands.add_parser("posteval", help="post-evaluate evolved genotypes")
    posteval.add_argument("--run-dir", required=True)
    posteval.add_argument("--protocol", choices=("A", "B"), default="A")
    posteval.add_argument(
        "--sigma-init-override",
        type=float,
        help="initial-state perturbation instead of 0.03 (e.g. 0.1)",
    )
    posteval.add_argument("--checkpoint", choices=("best", "final"), default="best")
    posteval.add_argument("--dump-trajectories", action="store_true")
    posteval.add_argument("--workers", type=int, default=DEFAULT_WORKERS)

    report = commands.add_parser("iev-report", help="IEV/SNR series and advisory")
    source = report.add_mutually_exclusive_group(required=True)
    source.add_argument("--run-dir")
    source.add_argument("--pairs", help="CSV with generation, fitness_1, fitness_2 columns")
    report.add_argument("--output", help="report CSV path")
    report.add_argument("--window", type=int, default=20, help="generations the advisory inspects")

    sweep = commands.add_parser("sweep", help="run and compare a condition grid")
    sweep.add_argument("--config", required=True, help="sweep document (YAML)")
    sweep.add_argument("--run-dir", help="output directory (default <output_dir>/<name>)")
    sweep.add_argument("--workers", type=int, default=DEFAULT_WORKERS)

    plot = commands.add_parser("plot-data", help="collect plot-ready CSVs")
    plot.add_argument("--run-dir", action="append", required=True, help="repeat per condition")
    plot.add_argument("--output", default="plot_data", help="output directory")

    return parser


def run(args: argparse.Namespace) -> list:
    if args.command == "evolve":
        return [cmd_evolve(args.config, args.run_dir, args.workers, args.seed, args.verbose)]
    if args.command == "posteval":
        return [
            cmd_posteval(
                args.run_dir,
                args.protocol,
                args.sigma_init_override,
                args.workers,
                args.checkpoint,
                args.dump_trajectories,
                args.verbose,
            )
        ]
    if args.command == "iev-report":
        source = args.run_dir if args.run_dir is not None else args.pairs
        return [cmd_iev_report(source, args.output, args.window, args.verbose)]
    if args.command == "sweep":
        return [cmd_sweep(args.config, args.run_dir, args.workers, args.verbose)]
    return cmd_plotdata(args.run_dir, args.output)


def report_failure(exc: Exception):
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        paths = run(args)
    except EvolabError as exc:
        report_failure(exc)
        return 2
    except Exception as exc:
        report_failure(exc)
        return 1
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())

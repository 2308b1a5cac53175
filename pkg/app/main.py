"""
Command-Line Application Module

Entry point of the `trac` command. Subcommands:

    run          execute an experiment file
    aggregate    rebuild the cross-seed tables of a results directory
    plot-data    emit a plot series as CSV
    show-config  print an experiment file with every default filled in

Logs go to stderr; stdout carries only the paths and documents the command
produces. Exit status is 0 on success, 1 when runs failed (partial results are
kept) and 2 on usage or configuration errors.
"""

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from app.core.exceptions import ConfigurationError, ErrorMessages, TracError
from app.harness.aggregate import (
    AGGREGATE_COLUMNS,
    AGGREGATE_FILE,
    IMPROVEMENT_FORMULA,
    write_aggregate,
)
from app.harness.config import ExperimentConfig, get_harness_settings
from app.harness.loader import dump_experiment, load_experiment
from app.harness.pipeline import run_experiment
from app.harness.plot_data import PlotKind, emit_plot_data
from app.harness.storage import RUN_FILES, load_records
from app.harness.templates import TemplateManager
from app.logging.config import CLI, get_log_config
from app.logging.factory import logger, setup_service_logger

EXIT_OK = 0
EXIT_RUN_FAILED = 1
EXIT_USAGE = 2


def parse_seeds(text: str) -> list[int]:
    """Comma-separated seeds and inclusive ranges, e.g. "0-4,10"."""
    seeds: list[int] = []
    try:
        for part in filter(None, (p.strip() for p in text.split(","))):
            if "-" in part:
                start, stop = part.split("-", 1)
                seeds.extend(range(int(start), int(stop) + 1))
            else:
                seeds.append(int(part))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid seed list: {text!r}") from exc
    if not seeds:
        raise argparse.ArgumentTypeError("empty seed list")
    return seeds


def _epilog() -> str:
    files = [{"name": run_file.name, "columns": run_file.columns} for run_file in RUN_FILES]
    files.append({"name": "summary.json", "columns": []})
    files.append({"name": f"<experiment>/{AGGREGATE_FILE}", "columns": AGGREGATE_COLUMNS})
    return TemplateManager.render(
        "cli_epilog",
        output_root=get_harness_settings().output_root,
        files=files,
        improvement_formula=IMPROVEMENT_FORMULA,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trac",
        description=(
            "Parameter-free meta-optimizer experiments: "
            "lifelong CartPole, OCO bench, simplified recursion."
        ),
        epilog=_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Execute an experiment file")
    run.add_argument("--config", required=True, type=Path, help="Experiment markdown file")
    run.add_argument("--seeds", type=parse_seeds, help='Override the seeds, e.g. "0-4" or "0,3,7"')
    run.add_argument("--workers", type=int, help="Worker processes (default $TRAC_WORKERS)")
    run.add_argument("--steps", type=int, help="Override total_env_steps")
    run.add_argument("--output", type=Path, help="Output root (default $TRAC_OUTPUT_ROOT)")

    agg = subparsers.add_parser("aggregate", help="Rebuild aggregate tables from run directories")
    agg.add_argument("directory", type=Path)

    plot = subparsers.add_parser("plot-data", help="Emit a plot series as CSV")
    plot.add_argument("directory", type=Path)
    plot.add_argument("--kind", required=True, choices=[kind.value for kind in PlotKind])
    plot.add_argument("--out", type=Path, help="Destination (default <directory>/plot_<kind>.csv)")

    show = subparsers.add_parser(
        "show-config", help="Print an experiment with every default filled in"
    )
    show.add_argument("path", type=Path)
    return parser


def _apply_overrides(config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    updates = {}
    if args.seeds is not None:
        updates["seeds"] = args.seeds
    if args.steps is not None:
        updates["total_env_steps"] = args.steps
    if not updates:
        return config
    try:
        return ExperimentConfig.model_validate({**config.model_dump(mode="json"), **updates})
    except ValidationError as exc:
        raise ConfigurationError(ErrorMessages.invalid_config("command line", str(exc))) from exc


def cmd_run(args: argparse.Namespace) -> int:
    if args.workers is not None and args.workers < 1:
        raise ConfigurationError(ErrorMessages.invalid_config("--workers", "must be at least 1"))
    config, notes = load_experiment(args.config)
    config = _apply_overrides(config, args)
    run_context = run_experiment(config, output_root=args.output, workers=args.workers, notes=notes)

    print(run_context.experiment_dir)
    for failure in run_context.failures:
        logger.error(failure)
    return EXIT_OK if run_context.succeeded else EXIT_RUN_FAILED


def cmd_aggregate(args: argparse.Namespace) -> int:
    records = load_records(args.directory)
    for path in write_aggregate(args.directory, records):
        print(path)
    return EXIT_OK


def cmd_plot_data(args: argparse.Namespace) -> int:
    kind = PlotKind(args.kind)
    out = args.out or args.directory / f"plot_{kind.value}.csv"
    print(emit_plot_data(load_records(args.directory), kind, out))
    return EXIT_OK


def cmd_show_config(args: argparse.Namespace) -> int:
    config, notes = load_experiment(args.path)
    sys.stdout.write(dump_experiment(config, notes))
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "aggregate": cmd_aggregate,
    "plot-data": cmd_plot_data,
    "show-config": cmd_show_config,
}


def main(argv: Sequence[str] | None = None) -> int:
    # stdout carries command output
    setup_service_logger(CLI, get_log_config().model_copy(update={"console_stream": "stderr"}))
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except TracError as e:
        logger.error(str(e))
        return EXIT_RUN_FAILED


if __name__ == "__main__":
    sys.exit(main())

# This code is part of FuXi-Rec.
#
# (C) Copyright FuXi-Rec Developers 2026.
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Command-line entry point: ``fuxi-rec <command> [options]``."""

import argparse
import logging
import sys
from typing import List, Optional

from . import commands
from ..bias.bias_functions import valid_kinds
from ..datasets.split_io import MAGIC
from ..exceptions import (
    ConfigurationError,
    DatasetParseError,
    EmptyDatasetError,
    FuxiRecError,
)
from ..version import __version__

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def _add_config(parser: argparse.ArgumentParser, required: bool = False) -> None:
    parser.add_argument(
        "--config",
        required=required,
        help="JSON config file, or the name of a shipped config "
        "(small, large, ml20m, synthetic); default: small",
    )


def _add_run_dir(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--run-dir",
        help="directory for the manifest and outputs; "
        "default: <output root>/<command>/<timestamp>",
    )


def _add_data(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--data", help=f"split file written by 'prepare' ({MAGIC.decode()})")
    group.add_argument(
        "--synthetic",
        action="store_true",
        help="generate the cyclic synthetic dataset from the config's data section",
    )


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("model overrides (win over the config file)")
    group.add_argument("--max-len", type=int, help="sequence length n")
    group.add_argument("--embed-dim", type=int, help="embedding width d")
    group.add_argument("--num-blocks", type=int, help="number of blocks L")
    group.add_argument("--num-negatives", type=int, help="sampled negatives per position")
    group.add_argument(
        "--bias-function", help=f"temporal bias function: {', '.join(valid_kinds())}"
    )
    group.add_argument("--mixer-mode", choices=["aftm", "qk_baseline"], help="token mixer")
    group.add_argument("--learning-rate", type=float, help="peak learning rate")
    group.add_argument("--seed", type=int, help="seed of initialization, shuffling and negatives")


def _add_trainer_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("trainer overrides (win over the config file)")
    group.add_argument("--batch-size", type=int, help="users per mini-batch")
    group.add_argument("--max-epochs", type=int, help="epoch budget")
    group.add_argument("--patience", type=int, help="epochs without improvement before stopping")
    group.add_argument("--num-workers", type=int, help="evaluation threads")
    group.add_argument(
        "--cutoffs", type=commands.parse_int_list, help="metric cutoffs, e.g. 10,50"
    )


def build_parser() -> argparse.ArgumentParser:
    """The argument parser of every subcommand."""
    parser = argparse.ArgumentParser(
        prog="fuxi-rec",
        description="Sequential recommendation with functional relative attention bias "
        "and an attention-free token mixer.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        type=str.upper,
        choices=LOG_LEVELS,
        help="logging threshold (default: WARNING)",
    )
    parser.add_argument(
        "--output-root",
        help="root of default run directories; default: $FUXI_REC_OUTPUT_ROOT or ./runs",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True

    prepare = subparsers.add_parser(
        "prepare", help="parse an interaction log into a leave-one-out split file"
    )
    source = prepare.add_mutually_exclusive_group()
    source.add_argument("--input", help="MovieLens ratings.dat (::) or ratings.csv")
    source.add_argument(
        "--synthetic", action="store_true", help="write the cyclic synthetic dataset"
    )
    prepare.add_argument("--output", help="split file path; default: <run dir>/split.fxb")
    prepare.add_argument("--max-len", type=int, help="sequence length n (default 200)")
    prepare.add_argument(
        "--min-interactions", type=int, help="drop users with fewer interactions (default 5)"
    )
    _add_config(prepare)
    _add_run_dir(prepare)
    prepare.set_defaults(handler=commands.cmd_prepare)

    train = subparsers.add_parser("train", help="train a model to early stopping")
    _add_config(train)
    _add_data(train)
    _add_run_dir(train)
    _add_model_flags(train)
    _add_trainer_flags(train)
    train.add_argument(
        "--dry-run", action="store_true", help="print the parameter audit and exit"
    )
    train.set_defaults(handler=commands.cmd_train)

    evaluate = subparsers.add_parser("eval", help="evaluate a checkpoint")
    _add_config(evaluate)
    _add_data(evaluate)
    _add_run_dir(evaluate)
    _add_model_flags(evaluate)
    evaluate.add_argument("--checkpoint", required=True, help="epoch{k}.fxb checkpoint")
    evaluate.add_argument("--split", choices=["validation", "test"], default="test")
    evaluate.add_argument(
        "--cutoffs", type=commands.parse_int_list, help="metric cutoffs, e.g. 10,50"
    )
    evaluate.add_argument("--num-workers", type=int, help="evaluation threads")
    evaluate.add_argument(
        "--tie-policy", choices=["optimistic", "pessimistic"], default="optimistic"
    )
    evaluate.set_defaults(handler=commands.cmd_eval)

    bench = subparsers.add_parser("bench", help="run the microbenchmarks")
    _add_config(bench)
    _add_run_dir(bench)
    bench.add_argument(
        "--sweep-n",
        type=commands.parse_int_list,
        default=[128, 512, 2048],
        help="ascending sequence lengths (default 128,512,2048)",
    )
    bench.add_argument(
        "--sweep-d",
        type=commands.parse_int_list,
        default=[64],
        help="ascending embedding widths for block timings (default 64)",
    )
    bench.add_argument(
        "--suites",
        type=commands.parse_name_list,
        default=list(commands.BENCH_SUITES),
        help="any of bias,block,costs (default: all)",
    )
    bench.add_argument("--warmup", type=int, help="discarded calls (>= 5)")
    bench.add_argument("--repetitions", type=int, help="timed samples (>= 30)")
    bench.add_argument("--seed", type=int, help="seed of the benchmark inputs")
    bench.add_argument("--no-pin", action="store_true", help="do not pin the process to one CPU")
    bench.set_defaults(handler=commands.cmd_bench)

    ablate = subparsers.add_parser(
        "ablate", help="sweep temporal bias functions and attention-map switches"
    )
    _add_config(ablate)
    _add_data(ablate)
    _add_run_dir(ablate)
    _add_model_flags(ablate)
    _add_trainer_flags(ablate)
    ablate.add_argument(
        "--functions",
        type=commands.parse_name_list,
        help=f"bias function kinds, or 'all' ({', '.join(valid_kinds())})",
    )
    ablate.add_argument(
        "--maps",
        type=commands.parse_name_list,
        help="attention-map rows, or 'all' (full, no-qk, no-positional, no-temporal)",
    )
    ablate.set_defaults(handler=commands.cmd_ablate)

    plot = subparsers.add_parser("plot-bias", help="export temporal bias curves")
    _add_config(plot)
    _add_data(plot)
    _add_run_dir(plot)
    _add_model_flags(plot)
    plot.add_argument(
        "--functions",
        type=commands.parse_name_list,
        default=["pow", "exp"],
        help="bias function kinds to sample with default parameters (default pow,exp)",
    )
    plot.add_argument("--checkpoint", help="sample the learned curves of this checkpoint")
    plot.add_argument(
        "--max-delta",
        type=float,
        help=(
            "largest elapsed time, in time-scale units (default: the largest gap in the "
            "dataset given by --data or --synthetic, else 365)"
        ),
    )
    plot.add_argument("--num", type=int, default=64, help="samples per curve (default 64)")
    plot.add_argument("--render", action="store_true", help="also write a PNG (matplotlib)")
    plot.set_defaults(handler=commands.cmd_plot_bias)

    describe = subparsers.add_parser("describe", help="print the parameter audit of a config")
    _add_config(describe)
    _add_data(describe)
    _add_model_flags(describe)
    describe.add_argument(
        "--costs", action="store_true", help="also print counted cost coefficients"
    )
    describe.set_defaults(handler=commands.cmd_describe)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command; returns 0 on success, 1 on a runtime failure and 2 on a usage,
    configuration or parse error."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return ex.code if isinstance(ex.code, int) else EXIT_USAGE
    args.argv = argv
    logging.basicConfig(
        level=args.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )
    try:
        return args.handler(args)
    except (ConfigurationError, DatasetParseError, EmptyDatasetError) as ex:
        print(f"fuxi-rec {args.command}: error: {ex.message}", file=sys.stderr)
        return EXIT_USAGE
    except FuxiRecError as ex:
        print(f"fuxi-rec {args.command}: {ex.message}", file=sys.stderr)
        return EXIT_FAILURE
    except Exception as ex:  # pylint: disable=broad-except
        logger.exception("fuxi-rec %s failed", args.command)
        print(f"fuxi-rec {args.command}: {ex}", file=sys.stderr)
        return EXIT_FAILURE

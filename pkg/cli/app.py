"""Command-line front end: argument parsing, logging setup, output and exit codes."""

import argparse
import logging
import sys
from typing import List, Optional

from models.errors import (
    ButterflyToolkitError,
    CountOverflowError,
    EmptyGraphError,
    GraphParseError,
    InvalidArgumentError,
    OracleGuardError,
)
from services.config_service import get_toolkit_config, reset_toolkit_config
from services.report_service import export_workbook, render_human, to_json_line

from .commands import COMMANDS, SPARSIFY_METHODS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PARSE = 4
EXIT_OVERFLOW = 5
EXIT_GUARD = 6

SAMPLING_CHOICES = ['vertex', 'edge', 'wedge', 'fast-edge']


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _shared_options() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument('--seed', type=_seed, default=None, help="random seed (unsigned 64-bit)")
    shared.add_argument('--threads', type=_positive_int, default=None, help="worker threads")
    shared.add_argument('--human', action='store_true', help="print tables instead of JSON lines")
    shared.add_argument('--trace', action='store_true', help="include the estimate-vs-time trace")
    shared.add_argument('--exact-for-error', action='store_true',
                        help="compute the exact count to report relative errors")
    shared.add_argument('--exact', type=int, default=None, help="known exact count for relative errors")
    shared.add_argument('--no-timing', action='store_true', help="omit elapsed-time fields")
    shared.add_argument('--xlsx', default=None, metavar='PATH', help="also export an Excel workbook")
    shared.add_argument('--config', default=None, metavar='PATH', help="toolkit config JSON")
    shared.add_argument('-v', '--verbose', action='count', default=0, help="-v for INFO, -vv for DEBUG")
    return shared


def _estimator_options(parser: argparse.ArgumentParser, require_budget: bool) -> None:
    budget = parser.add_mutually_exclusive_group(required=require_budget)
    budget.add_argument('--iterations', type=_positive_int, default=None)
    budget.add_argument('--time-budget', type=float, default=None, metavar='SECONDS')
    parser.add_argument('--fast-repeats', type=_positive_int, default=None,
                        help="closure tests per sampled edge (fast-edge)")
    parser.add_argument('--groups', type=_positive_int, default=1, help="median-of-means groups (odd)")
    parser.add_argument('--group-size', type=_positive_int, default=None)


def _sparsify_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--p', type=float, default=None, help="edge retention probability")
    parser.add_argument('--colors', type=_positive_int, default=None, help="number of colors")
    parser.add_argument('--trials', type=_positive_int, default=1)


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_options()
    parser = argparse.ArgumentParser(prog='bfly', description="Butterfly counting in bipartite graphs")
    commands = parser.add_subparsers(dest='command', required=True)

    stats = commands.add_parser('stats', parents=[shared], help="graph statistics")
    stats.add_argument('path')

    exact = commands.add_parser('exact', parents=[shared], help="exact butterfly count")
    exact.add_argument('path')
    exact.add_argument('--side', choices=['auto', 'left', 'right'], default='auto')

    sample = commands.add_parser('sample', parents=[shared], help="local-sampling estimate")
    sample.add_argument('path')
    sample.add_argument('--method', choices=SAMPLING_CHOICES, required=True)
    _estimator_options(sample, require_budget=True)

    sparsify = commands.add_parser('sparsify', parents=[shared], help="one-shot sparsification estimate")
    sparsify.add_argument('path')
    sparsify.add_argument('--method', choices=['edge', 'color'], required=True)
    _sparsify_options(sparsify)
    sparsify.add_argument('--pilot', type=float, default=None,
                          help="pilot butterfly count for the retention threshold check")

    generate = commands.add_parser('generate', parents=[shared], help="write a test graph")
    generate.add_argument('kind', choices=['biclique', 'random'])
    generate.add_argument('a', type=int)
    generate.add_argument('b', type=int)
    generate.add_argument('p', type=float, nargs='?', default=None)
    generate.add_argument('-o', '--out', default=None, help="output file (default: standard output)")

    local = commands.add_parser('local', parents=[shared], help="butterflies through a vertex or an edge")
    local.add_argument('path')
    local.add_argument('--vertex', default=None, metavar='SIDE:INDEX')
    local.add_argument('--edge', type=int, nargs=2, default=None, metavar=('LEFT', 'RIGHT'))

    pairs = commands.add_parser('pairs', parents=[shared], help="butterfly pair types and variance bounds")
    pairs.add_argument('path')
    pairs.add_argument('--p', type=float, default=None, help="probability for the sparsifier bounds")
    pairs.add_argument('--max-side', type=_positive_int, default=None, help="oracle vertices-per-side guard")
    pairs.add_argument('--max-butterflies', type=_positive_int, default=None, help="oracle butterfly guard")

    compare = commands.add_parser('compare', parents=[shared], help="compare estimators over repeated runs")
    compare.add_argument('path')
    compare.add_argument('--methods', type=lambda s: [m.strip() for m in s.split(',') if m.strip()],
                         default=['edge', 'wedge', 'fast-edge'],
                         help="comma list of " + ", ".join(SAMPLING_CHOICES + list(SPARSIFY_METHODS)))
    _estimator_options(compare, require_budget=False)
    _sparsify_options(compare)
    compare.add_argument('--target-error', type=float, default=None, metavar='PCT',
                         help="report the time for the running estimate to reach this relative error")
    return parser


def configure_logging(verbosity: int) -> None:
    settings = get_toolkit_config().logging
    level = getattr(logging, settings.level, logging.WARNING)
    if verbosity == 1:
        level = min(level, logging.INFO)
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=settings.format, stream=sys.stderr, force=True)


def _exit_code(error: Exception) -> int:
    if isinstance(error, (GraphParseError, EmptyGraphError)):
        return EXIT_PARSE
    if isinstance(error, CountOverflowError):
        return EXIT_OVERFLOW
    if isinstance(error, OracleGuardError):
        return EXIT_GUARD
    if isinstance(error, InvalidArgumentError):
        return EXIT_USAGE
    if isinstance(error, OSError):
        return EXIT_IO
    return EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command; returns the process exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        reset_toolkit_config(args.config)
    configure_logging(args.verbose)

    if args.command == 'compare':
        unknown = [m for m in args.methods if m not in SAMPLING_CHOICES and m not in SPARSIFY_METHODS]
        if unknown:
            parser.error(f"unknown methods for compare: {', '.join(unknown)}")

    try:
        records = COMMANDS[args.command](args)
        if args.xlsx and records:
            export_workbook(records, args.xlsx)
    except (ButterflyToolkitError, OSError) as e:
        logger.debug("Command %s failed", args.command, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return _exit_code(e)

    for record in records:
        if args.human:
            print(render_human(record))
            print()
        else:
            print(to_json_line(record))
    return EXIT_OK

"""
Shared CLI plumbing: common flags, settings overrides, trace and finding output
"""
import argparse
import functools
import sys
from typing import Callable, Iterable

from models.schemas import SearchBudget, VerificationReport
from utils.errors import PathlinkError
from utils.logger import set_global_level, setup_logger
from utils.settings import get_settings

logger = setup_logger(__name__)


def common_parser() -> argparse.ArgumentParser:
    """Flags every subcommand accepts"""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--seed", type=int, default=None, help="search seed (default PATHLINK_SEED)")
    parent.add_argument("--jobs", type=int, default=1, help="oracle worker processes")
    parent.add_argument("--trace", action="store_true", help="print construction provenance lines")
    parent.add_argument("-o", "--output", default=None, help="output file or directory")
    parent.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR")
    parent.add_argument("--max-nodes", type=int, default=None, help="oracle node budget")
    parent.add_argument("--timeout", type=float, default=None, help="oracle time budget in seconds")
    return parent


def apply_settings(args: argparse.Namespace):
    settings = get_settings()
    if args.seed is not None:
        settings.seed = args.seed
    if args.max_nodes is not None:
        settings.oracle_max_nodes = args.max_nodes
    if args.timeout is not None:
        settings.oracle_max_seconds = args.timeout
    if args.log_level:
        settings.log_level = args.log_level
        set_global_level(args.log_level)


def budget_from(args: argparse.Namespace) -> SearchBudget:
    settings = get_settings()
    return SearchBudget(
        max_nodes=args.max_nodes or settings.oracle_max_nodes,
        max_seconds=args.timeout or settings.oracle_max_seconds,
        seed=settings.seed if args.seed is None else args.seed,
    )


def print_trace(lines: Iterable[str], args: argparse.Namespace):
    if args.trace:
        for line in lines:
            print(f"# {line}")


def print_findings(report: VerificationReport):
    for finding in report.violations:
        print(finding.render())
    for note in report.observations:
        print(f"# {note}")


def cli_errors(handler: Callable[[argparse.Namespace], int]) -> Callable[[argparse.Namespace], int]:
    """Library errors become their exit code with one line on stderr"""
    @functools.wraps(handler)
    def wrapper(args: argparse.Namespace) -> int:
        try:
            return handler(args)
        except PathlinkError as e:
            logger.error(f"{handler.__name__}: {type(e).__name__}: {e}")
            print(f"error: {e}", file=sys.stderr)
            return e.exit_code
    return wrapper

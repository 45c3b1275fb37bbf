"""
pathlink - command-line entry point
Subcommands: construct, verify, downlink, embed, oracle, spectrum
Exit codes: 0 success/valid, 1 invalid/infeasible, 2 budget exhausted, 3 usage/parse error
"""
import argparse
import sys
from typing import List, Optional

from routers import construct, downlink, embed, oracle, spectrum, verify
from routers.common import apply_settings
from utils.logger import setup_logger

logger = setup_logger(__name__)

ROUTERS = (construct, verify, downlink, embed, oracle, spectrum)


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; usage errors are 3 here"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(3)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pathlink", description="Path designs, down-links and P4 embeddings")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for router in ROUTERS:
        router.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 3
    apply_settings(args)
    logger.debug(f"command {args.command}: {vars(args)}")
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())

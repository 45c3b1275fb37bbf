"""
verify: design files, down-link files and witness bundles
"""
import argparse
from pathlib import Path

from routers.common import cli_errors, common_parser, print_findings
from services.graph_core import verify_design, verify_downlink
from services.spectrum_service import load_witness
from services.linker import verify_spectrum_membership
from utils.design_io import is_bundle, read_design, read_downlink
from utils.errors import UsageError


def register(subparsers):
    p = subparsers.add_parser("verify", parents=[common_parser()], help="check a design, link file or witness bundle")
    p.add_argument("path", help=".pld design, .pll down-link or a witness bundle directory")
    p.set_defaults(handler=run_verify)


@cli_errors
def run_verify(args: argparse.Namespace) -> int:
    path = Path(args.path)
    if is_bundle(path):
        witness = load_witness(path)
        report = verify_spectrum_membership(witness)
        what = f"witness ({witness.gamma}, v={witness.v}) -> n={witness.n}"
    elif path.is_file() and path.suffix == ".pll":
        report = verify_downlink(read_downlink(path))
        what = "down-link"
    elif path.is_file():
        design = read_design(path)
        report = verify_design(design)
        what = f"({design.host},{design.shape})-design, {len(design)} blocks"
    else:
        raise UsageError(f"{path} is neither a file nor a witness bundle")

    print_findings(report)
    print(f"{'valid' if report.valid else 'INVALID'}: {what}")
    return 0 if report.valid else 1

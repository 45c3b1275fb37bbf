"""
downlink: witness bundles from the boundary constructions or from a given design
"""
import argparse
from pathlib import Path

from models.graph import BlockShape, HostSpec, C4, P5
from routers.common import cli_errors, common_parser, print_trace
from services.design_catalog import design_catalog
from services.linker import downlink_c4, downlink_cycle_system, downlink_generic, downlink_pk_design
from services.p5_gluing import downlink_p5
from services.spectrum_service import bundle_name, save_and_reverify
from utils.design_io import read_design
from utils.errors import UsageError

METHODS = ("auto", "generic", "reserved")


def register(subparsers):
    p = subparsers.add_parser("downlink", parents=[common_parser()], help="down-link to a P4-design")
    p.add_argument("--gamma", help="C4, P5, C<k> or P<k>; the domain is the base (K_v, gamma)-design")
    p.add_argument("--v", type=int, help="domain order for --gamma")
    p.add_argument("--design", help="domain design file instead of --gamma/--v")
    p.add_argument("--target", type=int, default=None, help="codomain order")
    p.add_argument("--method", choices=METHODS, default="auto", help="construction for other shapes")
    p.set_defaults(handler=run_downlink)


def _link_design(d, args: argparse.Namespace):
    """Reserved-vertex down-link for C_k (k >= 9) and P_k (k >= 12), else the generic one"""
    method = args.method
    reserved_capable = (d.shape.is_path and d.shape.k >= 12) or (not d.shape.is_path and d.shape.k >= 9)
    if method == "auto":
        method = "reserved" if reserved_capable else "generic"
    if method == "generic":
        if args.target is None:
            raise UsageError("the generic down-link needs --target")
        return downlink_generic(d, args.target)
    if d.shape.is_path:
        return downlink_pk_design(d, args.target)
    return downlink_cycle_system(d, args.target)


@cli_errors
def run_downlink(args: argparse.Namespace) -> int:
    if args.design:
        witness = _link_design(read_design(Path(args.design)), args)
    else:
        if not args.gamma or args.v is None or args.target is None:
            raise UsageError("give --design, or --gamma, --v and --target")
        gamma = BlockShape.parse(args.gamma)
        if gamma == C4:
            witness = downlink_c4(args.v, args.target)
        elif gamma == P5:
            witness = downlink_p5(args.v, args.target)
        else:
            witness = _link_design(design_catalog.base_design(gamma, HostSpec.complete(args.v)), args)

    out = Path(args.output) if args.output else Path(bundle_name(witness.gamma, witness.v, witness.n))
    path = save_and_reverify(witness, out)
    print(f"wrote {path}: ({witness.gamma}, v={witness.v}) -> n={witness.n}, "
          f"{len(witness.domain)} -> {len(witness.codomain)} blocks [{witness.construction}]")
    print_trace(witness.trace, args)
    return 0

"""
embed: P_k-designs into larger complete graphs, partial P_4-designs into K_n
"""
import argparse
from pathlib import Path

from models.graph import BlockShape, HostKind, PartialDesign
from routers.common import cli_errors, common_parser, print_trace
from services.graph_core import verify_design
from services.linker import embed_partial_p4, embed_pk_traced
from utils.design_io import read_design, write_design
from utils.errors import UsageError


def register(subparsers):
    p = subparsers.add_parser("embed", parents=[common_parser()], help="embed a design into K_m")
    p.add_argument("--shape", required=True, help="P<k>, k even")
    p.add_argument("--design", required=True, help="design file on a complete host")
    p.add_argument("--m", type=int, required=True, help="order of the enclosing complete graph")
    p.add_argument("--partial", action="store_true", help="the blocks need not cover the host (P4 only)")
    p.set_defaults(handler=run_embed)


@cli_errors
def run_embed(args: argparse.Namespace) -> int:
    shape = BlockShape.parse(args.shape)
    d = read_design(Path(args.design))
    if d.shape != shape:
        raise UsageError(f"{args.design} holds a {d.shape}-design, not {shape}")
    if d.host.kind != HostKind.COMPLETE:
        raise UsageError("embedding needs a design on a complete host")

    if args.partial:
        out = embed_partial_p4(PartialDesign(d.order, shape, d.blocks), args.m)
        trace = [f"partial embedding of {len(d)} blocks, two-apex residual"]
    else:
        out, trace = embed_pk_traced(d, args.m)

    if not verify_design(out).valid:
        return 1
    if args.output:
        write_design(Path(args.output), out, comments=trace if args.trace else ())
        print(f"wrote {args.output}: {len(out)} blocks on K_{args.m}, {len(d)} from the input")
    else:
        print(f"(K_{args.m},{shape}): {len(out)} blocks, {len(d)} from the input")
    print_trace(trace, args)
    return 0

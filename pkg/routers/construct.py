"""
construct: base designs from the catalog, a recipe or the oracle
"""
import argparse
from pathlib import Path
from typing import List, Optional, Tuple

from models.graph import BlockShape, HostKind, HostSpec, C4, P4
from routers.common import cli_errors, common_parser, print_trace
from services.apex_decomposer import p4_decompose_with_apexes
from services.bipartite_paths import bipartite_path_design, row_provenance
from services.cyclic_designs import c4_difference_family, develop
from services.design_catalog import design_catalog
from utils.design_io import parse_host_arg, write_design
from utils.errors import UsageError

METHODS = ("auto", "difference-family")


def register(subparsers):
    p = subparsers.add_parser("construct", parents=[common_parser()], help="build a (host, shape)-design")
    p.add_argument("--shape", required=True, help="P<k> or C<k>")
    p.add_argument("--host", required=True, help="K<n>, K<m>,<n> or edges:<file>")
    p.add_argument("--apex", default=None, help="<a>,<b>: two-apex P4 partition of the host")
    p.add_argument("--method", choices=METHODS, default="auto", help="difference-family: develop the C4 base cycles")
    p.set_defaults(handler=run_construct)


def _apex_pair(text: str) -> Tuple[int, int]:
    parts = text.split(",")
    try:
        alpha, beta = (int(p) for p in parts)
    except ValueError:
        raise UsageError(f"--apex expects <a>,<b>, got '{text}'")
    return alpha, beta


def _row_matrix_order(shape: BlockShape, host: HostSpec) -> Optional[int]:
    """x when the host is K_{k-1,x} (either way round) with x = k-2 or k"""
    if not shape.is_path or shape.k % 2 or host.kind != HostKind.BIPARTITE:
        return None
    k = shape.k
    a, b = host.params
    for side, other in ((a, b), (b, a)):
        if side == k - 1 and other in (k - 2, k):
            return other
    return None


def _apex_partition(args: argparse.Namespace, shape: BlockShape, host: HostSpec):
    if shape != P4:
        raise UsageError(f"--apex partitions into P4 blocks, not {shape}")
    alpha, beta = _apex_pair(args.apex)
    result = p4_decompose_with_apexes(host.graph, alpha, beta)
    trace = list(result.case_trace)
    comments = [f"leftover {u} {v}" for u, v in result.leftover]
    summary = f"{host.graph.size} edges, {len(result.blocks)} blocks, {len(result.leftover)} leftover"
    return result.design, trace, comments, summary


def _difference_family(shape: BlockShape, host: HostSpec):
    if shape != C4 or host.kind != HostKind.COMPLETE:
        raise UsageError("the difference-family method builds C4 systems on K<v>")
    df = c4_difference_family(host.params[0])
    design = develop(df)
    trace = [f"base cycle {b}" for b in df.base_blocks]
    return design, trace, [], f"{len(df.base_blocks)} base cycles developed mod {df.v}, {len(design)} blocks"


def _catalog(shape: BlockShape, host: HostSpec):
    x = _row_matrix_order(shape, host)
    if x is not None:
        design = bipartite_path_design(shape.k, *host.params)
        rows = row_provenance(shape.k, x)
        comments = [f"block {i + 1}: {row}" for i, row in enumerate(rows)]
        return design, [f"({host},{shape}) row matrices, x={x}"], comments, f"{len(design)} blocks"
    design = design_catalog.base_design(shape, host)
    provenance = design_catalog.provenance(shape, host) or "constructed"
    return design, [f"({host},{shape}) {provenance}"], [], f"{host.graph.size} edges, {len(design)} blocks"


@cli_errors
def run_construct(args: argparse.Namespace) -> int:
    shape = BlockShape.parse(args.shape)
    host = parse_host_arg(args.host)

    if args.apex is not None:
        built = _apex_partition(args, shape, host)
    elif args.method == "difference-family":
        built = _difference_family(shape, host)
    else:
        built = _catalog(shape, host)
    design, trace, comments, summary = built
    trace = trace + [summary]

    if args.output:
        file_comments: List[str] = (trace if args.trace else []) + comments
        path = write_design(Path(args.output), design, comments=file_comments)
        print(f"wrote {path}: {len(design)} blocks")
    else:
        print(f"({host},{shape}): {len(design)} blocks")
        for line in comments:
            print(f"# {line}")
    print_trace(trace, args)
    return 0

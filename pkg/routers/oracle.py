"""
oracle: exhaustive search on a small host
"""
import argparse

from models.graph import BlockShape
from routers.common import budget_from, cli_errors, common_parser, print_trace
from services.oracle_solver import OracleStatus, decomposition_oracle
from utils.design_io import parse_graph_arg, parse_host_arg, read_edge_host, write_design
from utils.errors import UsageError

EXIT_BY_STATUS = {OracleStatus.FOUND: 0, OracleStatus.INFEASIBLE: 1, OracleStatus.EXHAUSTED: 2}


def register(subparsers):
    p = subparsers.add_parser("oracle", parents=[common_parser()], help="decide decomposability by search")
    p.add_argument("--shape", required=True, help="P<k> or C<k>")
    p.add_argument("--graph", help="K<n>, K<m>,<n>, or an edge-list or design file")
    p.add_argument("--host", help="K<n> or K<m>,<n> (same as --graph)")
    p.add_argument("--edges", help="edge-list or design file (same as --graph); blocks are ignored")
    p.add_argument("--skips", type=int, default=0, help="edges the cover may leave out")
    p.set_defaults(handler=run_oracle)


def _host(args: argparse.Namespace):
    given = [a for a in (args.graph, args.host, args.edges) if a]
    if len(given) != 1:
        raise UsageError("give exactly one of --graph, --host and --edges")
    if args.graph:
        return parse_graph_arg(args.graph)
    if args.host:
        return parse_host_arg(args.host)
    return read_edge_host(args.edges)


@cli_errors
def run_oracle(args: argparse.Namespace) -> int:
    shape = BlockShape.parse(args.shape)
    host = _host(args)
    if args.skips < 0:
        raise UsageError("--skips must be non-negative")

    outcome = decomposition_oracle.find_decomposition(host.graph, shape, budget=budget_from(args),
                                                      jobs=args.jobs, skips=args.skips)
    print(f"{outcome.status.value}: ({host},{shape}) after {outcome.nodes_explored} nodes")
    trace = [f"{host.graph.size} edges, {host.graph.order} vertices, jobs={args.jobs}"]
    if outcome.skipped:
        trace.append(f"skipped edges {outcome.skipped}")
    if outcome.found and args.output:
        write_design(args.output, outcome.witness, comments=trace if args.trace else ())
        print(f"wrote {args.output}: {len(outcome.witness)} blocks")
    print_trace(trace, args)
    return EXIT_BY_STATUS[outcome.status]

"""
Graph core
Host generators, residual-graph algebra and the design / down-link verifiers.
"""
from collections import Counter
from typing import Dict, Iterable, List, Set

from models.graph import Block, Design, DownLink, Edge, Graph, HostSpec
from models.schemas import Finding, FindingKind, VerificationReport
from utils.errors import PreconditionError, UsageError


# ===================
# Generators
# ===================

def complete_graph(n: int) -> Graph:
    if n < 1:
        raise UsageError(f"complete graph needs n >= 1, got {n}")
    return HostSpec.complete(n).graph


def complete_bipartite(m: int, n: int) -> Graph:
    if m < 1 or n < 1:
        raise UsageError(f"complete bipartite graph needs positive parts, got ({m},{n})")
    return HostSpec.bipartite(m, n).graph


def complete_on(vertices: Iterable[int]) -> Graph:
    vs = sorted(set(vertices))
    return Graph(tuple(vs), frozenset((vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))))


def bipartite_on(left: Iterable[int], right: Iterable[int]) -> Graph:
    left, right = list(left), list(right)
    return Graph.from_edges(((u, v) for u in left for v in right), vertices=left + right)


# ===================
# Graph algebra
# ===================

def graph_union(*graphs: Graph) -> Graph:
    vertices: Set[int] = set()
    edges: Set[Edge] = set()
    for g in graphs:
        vertices.update(g.vertices)
        edges.update(g.edges)
    return Graph(tuple(vertices), frozenset(edges))


def graph_subtract(g: Graph, blocks: Iterable[Block]) -> Graph:
    """g minus the union of block edges; vertex set unchanged"""
    remaining = set(g.edges)
    for block in blocks:
        for e in block.edges:
            if e not in remaining:
                raise PreconditionError(f"edge {e} of block {block} is not in the graph")
            remaining.discard(e)
    return Graph(g.vertices, frozenset(remaining))


def remove_edges(g: Graph, edges: Iterable[Edge]) -> Graph:
    remaining = set(g.edges)
    for e in edges:
        if e not in remaining:
            raise PreconditionError(f"edge {e} is not in the graph")
        remaining.discard(e)
    return Graph(g.vertices, frozenset(remaining))


def induced_without(g: Graph, dropped: Iterable[int]) -> Graph:
    dropped = set(dropped)
    return Graph(
        tuple(v for v in g.vertices if v not in dropped),
        frozenset(e for e in g.edges if e[0] not in dropped and e[1] not in dropped),
    )


# ===================
# Verifiers
# ===================

def verify_design(d: Design) -> VerificationReport:
    """Exact edge-multiset partition check; reports under- and over-coverage"""
    findings: List[Finding] = []
    host_edges = d.host.graph.edges
    counts: Counter = Counter()
    first_block: Dict[Edge, int] = {}

    for idx, block in enumerate(d.blocks):
        if block.shape != d.shape:
            findings.append(Finding(
                kind=FindingKind.BAD_BLOCK_SHAPE,
                message=f"block {idx} {block} is a {block.shape}, design shape is {d.shape}",
                block_index=idx,
            ))
        for e in block.edges:
            counts[e] += 1
            first_block.setdefault(e, idx)

    for e in sorted(counts):
        if e not in host_edges:
            findings.append(Finding(
                kind=FindingKind.FOREIGN_EDGE,
                message=f"edge {e} of block {first_block[e]} is not a host edge",
                edge=e, block_index=first_block[e],
            ))
        elif counts[e] > 1:
            findings.append(Finding(
                kind=FindingKind.DUPLICATE_EDGE,
                message=f"edge {e} covered {counts[e]} times (first in block {first_block[e]})",
                edge=e, block_index=first_block[e],
            ))
    for e in sorted(host_edges - set(counts)):
        findings.append(Finding(kind=FindingKind.MISSING_EDGE, message=f"host edge {e} is not covered", edge=e))

    return VerificationReport(violations=findings)


def downlink_is_injective(dl: DownLink) -> bool:
    targets = [j for _, j in dl.mapping]
    return len(targets) == len(set(targets))


def verify_downlink(dl: DownLink) -> VerificationReport:
    """Map totality plus the subgraph condition; injectivity is only observed"""
    report = VerificationReport()
    report = report.merged(verify_design(dl.domain), scope="domain")
    report = report.merged(verify_design(dl.codomain), scope="codomain")

    findings: List[Finding] = []
    n_dom, n_cod = len(dl.domain.blocks), len(dl.codomain.blocks)
    seen: Counter = Counter()
    for i, j in dl.mapping:
        if not (0 <= i < n_dom) or not (0 <= j < n_cod):
            findings.append(Finding(kind=FindingKind.BAD_LINK_INDEX, message=f"link {i} -> {j} is out of range", block_index=i))
            continue
        seen[i] += 1
        if not dl.codomain.blocks[j].edge_set <= dl.domain.blocks[i].edge_set:
            findings.append(Finding(
                kind=FindingKind.NOT_SUBGRAPH,
                message=f"codomain block {j} {dl.codomain.blocks[j]} is not inside domain block {i} {dl.domain.blocks[i]}",
                block_index=i,
            ))
    for i in range(n_dom):
        if seen[i] == 0:
            findings.append(Finding(kind=FindingKind.UNMAPPED_BLOCK, message=f"domain block {i} has no image", block_index=i))
        elif seen[i] > 1:
            findings.append(Finding(kind=FindingKind.DUPLICATE_LINK, message=f"domain block {i} is linked {seen[i]} times", block_index=i))

    observations = ["injective" if downlink_is_injective(dl) else "not injective"]
    return VerificationReport(violations=report.violations + findings, observations=report.observations + observations)


def deletable_vertices(d: Design) -> List[int]:
    """Vertices that are an endpoint of every block through them (path designs only)"""
    if not d.shape.is_path:
        return []
    interior: Set[int] = set()
    touched: Set[int] = set()
    for block in d.blocks:
        touched.update(block.vertices)
        interior.update(block.vertices[1:-1])
    return sorted(touched - interior)

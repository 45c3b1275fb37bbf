"""
Two-apex P_4 decomposer
Partitions a graph with two universal vertices alpha, beta into P_4 blocks plus |E| mod 3
leftover edges.

Pipeline: greedy P_4 extraction from G = g - {alpha, beta}, classification of the P_4-free
residual into isolated vertices, stars and triangles, the per-component gadgets joined to the
apexes, and a small composite graph (alpha-beta plus the unmatched remnants) handed to the
oracle. Case-table composites must be certified; composites with leftover edges that resist
the search take gadget bundles back into them one at a time.
"""
import random
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx

from models.graph import Block, Design, Edge, Graph, HostSpec, P4, canonical_edge
from services.graph_core import induced_without, remove_edges, verify_design
from services.oracle_solver import decomposition_oracle
from utils.errors import InternalConsistencyError, UsageError
from utils.logger import setup_logger

logger = setup_logger(__name__)


# ===================
# Types
# ===================

@dataclass(frozen=True)
class ApexInput:
    g: Graph
    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha == self.beta:
            raise UsageError("apexes must be distinct")
        full = self.g.order - 1
        for apex in (self.alpha, self.beta):
            if apex not in self.g.adjacency:
                raise UsageError(f"apex {apex} is not a vertex of the graph")
            if self.g.degree(apex) != full:
                raise UsageError(f"apex {apex} has degree {self.g.degree(apex)}, expected {full}")


@dataclass(frozen=True)
class StarComponent:
    center: int
    leaves: Tuple[int, ...]

    @property
    def vertex_count(self) -> int:
        return len(self.leaves) + 1

    @property
    def odd(self) -> bool:
        return self.vertex_count % 2 == 1


@dataclass
class RemnantClassification:
    isolated: List[int] = field(default_factory=list)
    stars_odd: List[StarComponent] = field(default_factory=list)
    stars_even: List[StarComponent] = field(default_factory=list)
    triangles: List[Tuple[int, int, int]] = field(default_factory=list)


@dataclass
class PartitionResult:
    design: Design
    leftover: List[Edge]
    case_trace: List[str]

    @property
    def blocks(self) -> Tuple[Block, ...]:
        return self.design.blocks


@dataclass
class _Bundle:
    kind: str
    blocks: List[Block]
    owner: Optional[int] = None  # star center for star-pair bundles

    @property
    def edges(self) -> Set[Edge]:
        out: Set[Edge] = set()
        for b in self.blocks:
            out.update(b.edges)
        return out


# (|I| mod 3, |S1| mod 3, |S2| mod 3) for composites with |E| = 0 (mod 3)
CASE_TABLE: Dict[Tuple[int, int, int], str] = {
    (0, 0, 1): "a_1",
    (0, 2, 2): "a_2",
    (0, 1, 0): "a_3",
    (1, 0, 0): "a_4",
    (1, 2, 1): "a_5",
    (1, 1, 2): "a_6",
    (2, 0, 2): "a_7",
    (2, 2, 0): "a_8",
    (2, 1, 1): "a_9",
}

REPAIR_LABELS = (
    "repair-star-radii",
    "repair-isolated-triple",
    "repair-triangle",
    "repair-lone-star-radii",
    "repair-edge-triples",
)


# ===================
# Extraction and classification
# ===================

def _find_p4_through(adj: Dict[int, Set[int]], u: int, v: int) -> Optional[List[int]]:
    for a, b in ((u, v), (v, u)):
        for x in sorted(adj[a] - {b}):
            ys = sorted(adj[b] - {a, x})
            if ys:
                return [x, a, b, ys[0]]
    return None


def extract_maximal_p4(g: Graph) -> Tuple[List[Block], Graph]:
    """Greedy edge-disjoint P_4s until the residual is P_4-free; lowest edge, lowest neighbours first"""
    adj: Dict[int, Set[int]] = {v: set(ns) for v, ns in g.adjacency.items()}
    blocks: List[Block] = []
    changed = True
    while changed:
        changed = False
        for u, v in sorted({canonical_edge(a, b) for a in adj for b in adj[a]}):
            if v not in adj[u]:
                continue
            path = _find_p4_through(adj, u, v)
            if path is None:
                continue
            block = Block(P4, tuple(path))
            for a, b in block.edges:
                adj[a].discard(b)
                adj[b].discard(a)
            blocks.append(block)
            changed = True

    residual = Graph(g.vertices, frozenset(canonical_edge(a, b) for a in adj for b in adj[a]))
    return blocks, residual


def classify_remnant(residual: Graph) -> RemnantClassification:
    nxg = residual.to_networkx()
    out = RemnantClassification()
    for comp in sorted((sorted(c) for c in nx.connected_components(nxg)), key=lambda c: c[0]):
        sub = nxg.subgraph(comp)
        nodes, size = sub.number_of_nodes(), sub.number_of_edges()
        if nodes == 1:
            out.isolated.append(comp[0])
            continue
        if nodes == 3 and size == 3:
            out.triangles.append(tuple(comp))
            continue
        if size == nodes - 1:
            centers = [v for v in comp if sub.degree(v) == nodes - 1]
            if centers:
                center = min(centers)
                star = StarComponent(center, tuple(v for v in comp if v != center))
                (out.stars_odd if star.odd else out.stars_even).append(star)
                continue
        raise InternalConsistencyError(f"residual component {comp} with {size} edges contains a P_4")
    return out


# ===================
# Gadgets
# ===================

def _apex_edges(vertices: Sequence[int], alpha: int, beta: int) -> Set[Edge]:
    out: Set[Edge] = set()
    for h in vertices:
        out.add(canonical_edge(alpha, h))
        out.add(canonical_edge(h, beta))
    return out


def _triple_blocks(triple: Sequence[int], alpha: int, beta: int) -> List[Block]:
    """K_{{alpha,beta},{h1,h2,h3}}"""
    h1, h2, h3 = triple
    return [Block(P4, (h1, alpha, h2, beta)), Block(P4, (h1, beta, h3, alpha))]


def _triangle_blocks(tri: Sequence[int], alpha: int, beta: int) -> List[Block]:
    c1, c2, c3 = tri
    return [Block(P4, (alpha, c1, c2, beta)), Block(P4, (alpha, c2, c3, beta)), Block(P4, (alpha, c3, c1, beta))]


def _even_star_triple_blocks(triple: Sequence[Tuple[int, int]], alpha: int, beta: int) -> List[Block]:
    """Three (alpha,c,beta,v) + [c,v] remnants, 15 edges"""
    (c1, v1), (c2, v2), (c3, v3) = triple
    return [
        Block(P4, (beta, v1, alpha, c1)),
        Block(P4, (alpha, v2, beta, c2)),
        Block(P4, (v1, c1, beta, c3)),
        Block(P4, (v2, c2, alpha, v3)),
        Block(P4, (alpha, c3, v3, beta)),
    ]


def decompose_star_gadget(star: StarComponent, alpha: int, beta: int) -> Tuple[List[Block], Graph]:
    """Pair the leaves two at a time; the remnant is [alpha,c,beta] or (alpha,c,beta,v) + [c,v]"""
    if not star.leaves:
        raise UsageError(f"star at {star.center} has no leaves")
    c = star.center
    blocks: List[Block] = []
    paired = star.leaves if star.odd else star.leaves[:-1]
    for i in range(0, len(paired), 2):
        l1, l2 = paired[i], paired[i + 1]
        blocks += [Block(P4, (alpha, l1, c, l2)), Block(P4, (l1, beta, l2, alpha))]

    remnant = {canonical_edge(alpha, c), canonical_edge(c, beta)}
    if not star.odd:
        v = star.leaves[-1]
        remnant |= {canonical_edge(beta, v), canonical_edge(v, alpha), canonical_edge(c, v)}
    return blocks, Graph.from_edges(remnant)


def _star_pair_bundles(star: StarComponent, alpha: int, beta: int) -> Tuple[List[_Bundle], Graph]:
    blocks, remnant = decompose_star_gadget(star, alpha, beta)
    bundles = [_Bundle("star-pair", blocks[i:i + 2], owner=star.center) for i in range(0, len(blocks), 2)]
    return bundles, remnant


# ===================
# Driver
# ===================

def _choose_repair(label: str, cls: RemnantClassification, bundles: List[_Bundle]) -> Tuple[Optional[str], Optional[_Bundle]]:
    def last(kind: str) -> Optional[_Bundle]:
        found = [b for b in bundles if b.kind == kind]
        return found[-1] if found else None

    if label == "a_3":
        leftover_center = cls.stars_odd[-1].center
        pairs = [b for b in bundles if b.kind == "star-pair" and b.owner == leftover_center]
        return "repair-star-radii", pairs[0]
    if label != "a_4":
        return None, None
    if len(cls.isolated) > 1:
        return "repair-isolated-triple", last("isolated-triple")
    if cls.triangles:
        return "repair-triangle", last("triangle")
    pairs = [b for b in bundles if b.kind == "star-pair"]
    if pairs:
        return "repair-lone-star-radii", pairs[0]
    return "repair-edge-triples", last("even-star-triple")


def _decompose_composite(composite: Set[Edge], leftover: int, bundles: List[_Bundle],
                         trace: List[str]) -> Tuple[List[Block], List[Edge]]:
    if leftover == 0:
        # case-table gadgets are claimed decomposable; a refutation is fatal
        certified = decomposition_oracle.certify_claimed_graph(Graph.from_edges(composite), P4)
        return list(certified.blocks), []
    solved = decomposition_oracle.solve(Graph.from_edges(composite), P4, skips=leftover)
    if solved is not None:
        return solved
    edges = set(composite)
    for bundle in reversed(list(bundles)):
        edges |= bundle.edges
        bundles.remove(bundle)
        trace.append(f"absorb-{bundle.kind}")
        logger.debug(f"composite resisted; absorbing a {bundle.kind} bundle ({len(edges)} edges)")
        solved = decomposition_oracle.solve(Graph.from_edges(edges), P4, skips=leftover)
        if solved is not None:
            return solved
    raise InternalConsistencyError(f"composite gadget {sorted(composite)} has no P_4 decomposition with {leftover} leftover")


def p4_decompose_two_apex(inp: ApexInput) -> PartitionResult:
    g, alpha, beta = inp.g, inp.alpha, inp.beta
    if g.order == 3:
        raise UsageError("K_3 has three edges but no P_4")

    core = induced_without(g, (alpha, beta))
    fixed, residual = extract_maximal_p4(core)
    cls = classify_remnant(residual)
    trace: List[str] = []
    bundles: List[_Bundle] = []
    composite: Set[Edge] = {canonical_edge(alpha, beta)}

    # isolated vertices, grouped in ascending triples
    iso = cls.isolated
    r_iso = len(iso) % 3
    full = len(iso) - r_iso
    for j in range(0, full, 3):
        bundles.append(_Bundle("isolated-triple", _triple_blocks(iso[j:j + 3], alpha, beta)))
    composite |= _apex_edges(iso[full:], alpha, beta)
    if iso:
        trace.append(f"i_{r_iso + 1}")

    # stars with an odd number of vertices leave [alpha, c, beta]
    odd_centers = []
    for star in cls.stars_odd:
        pair_bundles, _ = _star_pair_bundles(star, alpha, beta)
        bundles += pair_bundles
        odd_centers.append(star.center)
    r_odd = len(odd_centers) % 3
    full = len(odd_centers) - r_odd
    for j in range(0, full, 3):
        bundles.append(_Bundle("odd-star-triple", _triple_blocks(odd_centers[j:j + 3], alpha, beta)))
    composite |= _apex_edges(odd_centers[full:], alpha, beta)
    if odd_centers:
        trace.append(f"iii_1{r_odd + 1}")

    # stars with an even number of vertices leave (alpha, c, beta, v) + [c, v]
    even_remnants: List[Tuple[int, int]] = []
    for star in cls.stars_even:
        pair_bundles, remnant = _star_pair_bundles(star, alpha, beta)
        bundles += pair_bundles
        even_remnants.append((star.center, star.leaves[-1]))
    r_even = len(even_remnants) % 3
    full = len(even_remnants) - r_even
    for j in range(0, full, 3):
        bundles.append(_Bundle("even-star-triple", _even_star_triple_blocks(even_remnants[j:j + 3], alpha, beta)))
    for c, v in even_remnants[full:]:
        composite |= _apex_edges((c, v), alpha, beta) | {canonical_edge(c, v)}
    if even_remnants:
        trace.append(f"iii_2{r_even + 1}")

    for tri in cls.triangles:
        bundles.append(_Bundle("triangle", _triangle_blocks(tri, alpha, beta)))

    t = len(composite)
    leftover_count = t % 3
    if leftover_count != g.size % 3:
        raise InternalConsistencyError(f"composite has {t} edges but the graph has {g.size}")

    if leftover_count == 0:
        label = CASE_TABLE[(r_iso, r_odd, r_even)]
        trace.append(label)
        repair, bundle = _choose_repair(label, cls, bundles)
        if repair is not None:
            if bundle is None:
                raise InternalConsistencyError(f"case {label} has no bundle to withhold")
            trace.append(repair)
            bundles.remove(bundle)
            composite |= bundle.edges
    else:
        trace.append(f"t{leftover_count}-leftover")

    logger.debug(f"two-apex: {len(fixed)} greedy blocks, {len(bundles)} bundles, composite {len(composite)} edges, "
                 f"trace {trace}")
    tail, skipped = _decompose_composite(composite, leftover_count, bundles, trace)

    blocks = list(fixed)
    for bundle in bundles:
        blocks += bundle.blocks
    blocks += tail
    leftover = sorted(skipped)

    host = HostSpec.edges(remove_edges(g, leftover) if leftover else g)
    design = Design(host, P4, tuple(blocks))
    report = verify_design(design)
    if not report.valid or len(leftover) != g.size % 3:
        detail = report.violations[0].render() if report.violations else f"{len(leftover)} leftover edges"
        raise InternalConsistencyError(f"two-apex partition failed verification: {detail}")
    return PartitionResult(design, leftover, trace)


def p4_decompose_with_apexes(g: Graph, alpha: int, beta: int) -> PartitionResult:
    return p4_decompose_two_apex(ApexInput(g, alpha, beta))


def random_two_apex_graph(order: int, p: float, seed: int) -> Graph:
    """G(order-2, p) joined to the universal vertices order-2 and order-1"""
    if order < 4:
        raise UsageError(f"two-apex graphs need at least 4 vertices, got {order}")
    inner = nx.gnp_random_graph(order - 2, p, seed=seed)
    edges = list(inner.edges())
    for apex in (order - 2, order - 1):
        edges += [(v, apex) for v in range(apex)]
    return Graph.from_edges(edges, range(order))


# ===================
# Test corpus
# ===================

COVERAGE_LABELS: Tuple[str, ...] = (
    ("i_1", "i_2", "i_3")
    + tuple(f"iii_{a}{b}" for a in (1, 2) for b in (1, 2, 3))
    + tuple(sorted(CASE_TABLE.values()))
    + REPAIR_LABELS
)


def two_apex_join(core_edges: Sequence[Edge], core_order: int) -> Tuple[Graph, int, int]:
    """A core on 0..core_order-1 joined to the apexes core_order and core_order+1"""
    alpha, beta = core_order, core_order + 1
    edges = list(core_edges) + [(alpha, beta)]
    for v in range(core_order):
        edges += [(v, alpha), (v, beta)]
    return Graph.from_edges(edges, range(core_order + 2)), alpha, beta


def p4_free_core(isolated: int, odd_stars: int, single_edges: int) -> Tuple[List[Edge], int]:
    """Isolated vertices, then P_3 components, then K_2 components"""
    edges: List[Edge] = []
    nxt = isolated
    for _ in range(odd_stars):
        edges += [(nxt, nxt + 1), (nxt, nxt + 2)]
        nxt += 3
    for _ in range(single_edges):
        edges.append((nxt, nxt + 1))
        nxt += 2
    return edges, nxt


def structured_two_apex_graphs() -> List[Tuple[Graph, int, int]]:
    """One graph per case-table entry (every residue class nonempty) and one per a_4 repair"""
    cores = [p4_free_core(r_iso + 3, r_odd + 3, r_even + 3) for r_iso, r_odd, r_even in sorted(CASE_TABLE)]
    cores += [
        ([(1, 2), (2, 3), (1, 3)], 4),   # triangle beside one isolated vertex
        p4_free_core(1, 3, 0),           # star radii, no triangle
        p4_free_core(1, 0, 3),           # single edges only
    ]
    return [two_apex_join(edges, order) for edges, order in cores]


def seeded_two_apex_corpus(count: int, max_order: int, seed: int) -> Iterator[Tuple[Graph, int, int]]:
    """The structured graphs, then G(n,p) two-apex graphs up to count in total"""
    structured = structured_two_apex_graphs()
    yield from structured
    rng = random.Random(seed)
    for i in range(max(0, count - len(structured))):
        order = rng.randint(4, max_order)
        yield random_two_apex_graph(order, rng.random(), seed=seed + i), order - 2, order - 1

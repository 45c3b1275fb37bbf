"""
Decomposition oracle
Exhaustive backtracking search for (G, shape)-designs on small graphs.

Edges are indexed canonically and edge sets are Python int bitmaps. The search always
extends on the lowest-indexed uncovered edge and tries every placement covering it, so an
Infeasible verdict means the whole space was exhausted.
"""
import random
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from models.graph import Block, BlockShape, Design, Edge, Graph, HostSpec
from models.schemas import SearchBudget
from services.graph_core import remove_edges, verify_design
from utils.errors import BudgetExhaustedError, InternalConsistencyError
from utils.logger import setup_logger
from utils.settings import get_settings

logger = setup_logger(__name__)


class OracleStatus(str, Enum):
    FOUND = "Found"
    INFEASIBLE = "Infeasible"
    EXHAUSTED = "Exhausted"


@dataclass
class OracleOutcome:
    status: OracleStatus
    witness: Optional[Design] = None
    nodes_explored: int = 0
    skipped: List[Edge] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status == OracleStatus.FOUND


def default_budget(seed: Optional[int] = None) -> SearchBudget:
    settings = get_settings()
    return SearchBudget(
        max_nodes=settings.oracle_max_nodes,
        max_seconds=settings.oracle_max_seconds,
        seed=settings.seed if seed is None else seed,
    )


# ===================
# Placements
# ===================

def enumerate_placements(g: Graph, shape: BlockShape) -> List[Tuple[int, ...]]:
    """Every copy of the shape in g, one canonical orientation each"""
    adj = {v: sorted(ns) for v, ns in g.adjacency.items()}
    k = shape.k
    found: List[Tuple[int, ...]] = []

    if shape.is_path:
        def extend(path: List[int], used: set):
            if len(path) == k:
                if path[0] < path[-1]:
                    found.append(tuple(path))
                return
            for w in adj[path[-1]]:
                if w not in used:
                    path.append(w)
                    used.add(w)
                    extend(path, used)
                    path.pop()
                    used.discard(w)

        for s in g.vertices:
            extend([s], {s})
        return found

    for s in g.vertices:
        # cycles are rooted at their smallest vertex, second vertex < last vertex
        def extend_cycle(path: List[int], used: set):
            if len(path) == k:
                if s in g.adjacency[path[-1]] and path[1] < path[-1]:
                    found.append(tuple(path))
                return
            for w in adj[path[-1]]:
                if w > s and w not in used:
                    path.append(w)
                    used.add(w)
                    extend_cycle(path, used)
                    path.pop()
                    used.discard(w)

        extend_cycle([s], {s})
    return found


# ===================
# Search engine
# ===================

class _BudgetExceeded(Exception):
    pass


class _ExactCoverSearch:
    """Lowest-uncovered-edge backtracking with an optional number of skippable edges"""

    def __init__(self, edges: Sequence[Edge], placements: Sequence[Tuple[int, ...]], shape: BlockShape,
                 budget: SearchBudget, skips: int = 0):
        self.edges = list(edges)
        self.placements = list(placements)
        self.shape = shape
        self.budget = budget
        self.skips = skips
        index = {e: i for i, e in enumerate(self.edges)}
        self.full = (1 << len(self.edges)) - 1
        self.masks: List[int] = []
        self.by_edge: List[List[int]] = [[] for _ in self.edges]
        for p, verts in enumerate(self.placements):
            mask = 0
            for e in Block(shape, verts).edges:
                bit = index[e]
                mask |= 1 << bit
                self.by_edge[bit].append(p)
            self.masks.append(mask)
        rng = random.Random(budget.seed)
        for options in self.by_edge:
            rng.shuffle(options)
        self.nodes = 0
        self.chosen: List[int] = []
        self.skipped: List[int] = []
        self._deadline = 0.0

    def run(self, covered: int = 0, skips: Optional[int] = None) -> Optional[bool]:
        """True found, False infeasible, None budget exhausted"""
        self._deadline = time.monotonic() + self.budget.max_seconds
        try:
            return self._search(covered, self.skips if skips is None else skips)
        except _BudgetExceeded:
            return None

    def _search(self, covered: int, skips_left: int) -> bool:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _BudgetExceeded()
        if (self.nodes & 1023) == 0 and time.monotonic() > self._deadline:
            raise _BudgetExceeded()

        free = self.full & ~covered
        if not free:
            return True
        low = free & -free
        e = low.bit_length() - 1
        for p in self.by_edge[e]:
            mask = self.masks[p]
            if mask & covered:
                continue
            self.chosen.append(p)
            if self._search(covered | mask, skips_left):
                return True
            self.chosen.pop()
        if skips_left:
            self.skipped.append(e)
            if self._search(covered | low, skips_left - 1):
                return True
            self.skipped.pop()
        return False

    def solution(self) -> Tuple[List[Tuple[int, ...]], List[Edge]]:
        return [self.placements[p] for p in self.chosen], [self.edges[e] for e in self.skipped]


def _run_branch(payload) -> Tuple[Optional[bool], int, list, list]:
    """Process-pool worker: one first-level branch"""
    edges, placements, shape, budget, skips, first = payload
    search = _ExactCoverSearch(edges, placements, shape, budget, skips)
    if first is None:
        # the skip branch: lowest edge set aside
        search.skipped.append(0)
        outcome = search.run(covered=1, skips=skips - 1)
    else:
        search.chosen.append(first)
        outcome = search.run(covered=search.masks[first])
    chosen, skipped = search.solution() if outcome else ([], [])
    return outcome, search.nodes, chosen, skipped


# ===================
# Oracle
# ===================

class DecompositionOracle:
    """Exact oracle plus a memo of gadget decompositions keyed by relabeled edge lists"""

    def __init__(self):
        self._memo: Dict[tuple, Optional[tuple]] = {}
        self._lock = threading.Lock()

    def find_decomposition(self, g: Graph, shape: BlockShape, budget: Optional[SearchBudget] = None,
                           jobs: int = 1, skips: int = 0) -> OracleOutcome:
        budget = budget or default_budget()
        edge_count = shape.edge_count

        if (g.size - skips) % edge_count or g.size < skips:
            return OracleOutcome(OracleStatus.INFEASIBLE)
        if g.size == 0:
            return OracleOutcome(OracleStatus.FOUND, Design(HostSpec.edges(g), shape, ()), 0)
        if skips == 0 and not self._components_divisible(g, edge_count):
            return OracleOutcome(OracleStatus.INFEASIBLE)

        edges = g.edge_list
        placements = enumerate_placements(g, shape)
        logger.debug(f"oracle: {g.size} edges, {len(placements)} placements of {shape}, skips={skips}")

        if jobs > 1:
            outcome, nodes, chosen, skipped = self._parallel(edges, placements, shape, budget, skips, jobs)
        else:
            search = _ExactCoverSearch(edges, placements, shape, budget, skips)
            outcome = search.run()
            nodes = search.nodes
            chosen, skipped = search.solution() if outcome else ([], [])

        if outcome is None:
            return OracleOutcome(OracleStatus.EXHAUSTED, nodes_explored=nodes)
        if not outcome:
            return OracleOutcome(OracleStatus.INFEASIBLE, nodes_explored=nodes)

        host = HostSpec.edges(remove_edges(g, skipped) if skipped else g)
        witness = Design(host, shape, tuple(Block(shape, p) for p in chosen))
        report = verify_design(witness)
        if not report.valid:
            raise InternalConsistencyError(f"oracle witness failed verification: {report.violations[0].render()}")
        return OracleOutcome(OracleStatus.FOUND, witness, nodes, list(skipped))

    @staticmethod
    def _components_divisible(g: Graph, edge_count: int) -> bool:
        nxg = nx.Graph()
        nxg.add_edges_from(g.edge_list)
        return all(nxg.subgraph(comp).number_of_edges() % edge_count == 0 for comp in nx.connected_components(nxg))

    @staticmethod
    def _parallel(edges, placements, shape, budget, skips, jobs):
        first_search = _ExactCoverSearch(edges, placements, shape, budget, skips)
        firsts: List[Optional[int]] = list(first_search.by_edge[0]) if edges else []
        if skips:
            firsts.append(None)
        if not firsts:
            return False, 1, [], []
        share = SearchBudget(max_nodes=max(1, budget.max_nodes // len(firsts)), max_seconds=budget.max_seconds,
                             seed=budget.seed)
        payloads = [(edges, placements, shape, share, skips, first) for first in firsts]
        total_nodes = 0
        exhausted = False
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for outcome, nodes, chosen, skipped in pool.map(_run_branch, payloads):
                total_nodes += nodes
                if outcome:
                    return True, total_nodes, chosen, skipped
                if outcome is None:
                    exhausted = True
        return (None if exhausted else False), total_nodes, [], []

    # ---------- memoized gadget solving ----------

    def solve(self, g: Graph, shape: BlockShape, skips: int = 0,
              budget: Optional[SearchBudget] = None) -> Optional[Tuple[List[Block], List[Edge]]]:
        """Blocks and skipped edges, or None when infeasible; memoized"""
        order = list(g.vertices)
        forward = {v: i for i, v in enumerate(order)}
        key = (shape.label, skips, len(order), tuple(sorted((forward[u], forward[v]) for u, v in g.edges)))

        with self._lock:
            hit = key in self._memo
            cached = self._memo.get(key)
        if not hit:
            local = Graph(tuple(range(len(order))), frozenset(key[3]))
            outcome = self.find_decomposition(local, shape, budget=budget, skips=skips)
            if outcome.status == OracleStatus.EXHAUSTED:
                raise BudgetExhaustedError(f"oracle budget exhausted on a {g.size}-edge graph ({shape})")
            cached = None
            if outcome.found:
                cached = (tuple(b.vertices for b in outcome.witness.blocks), tuple(outcome.skipped))
            with self._lock:
                self._memo[key] = cached

        if cached is None:
            return None
        blocks = [Block(shape, tuple(order[i] for i in verts)) for verts in cached[0]]
        skipped = [tuple(sorted((order[u], order[v]))) for u, v in cached[1]]
        return blocks, skipped

    def certify_claimed_graph(self, g: Graph, shape: BlockShape) -> Design:
        """Decomposition of a gadget the case machinery claims decomposable"""
        solved = self.solve(g, shape)
        if solved is None:
            raise InternalConsistencyError(f"oracle refutes a claimed {shape}-decomposable gadget with edges {g.edge_list}")
        return Design(HostSpec.edges(g), shape, tuple(solved[0]))


decomposition_oracle = DecompositionOracle()


def find_decomposition(g: Graph, shape: BlockShape, budget: Optional[SearchBudget] = None,
                       jobs: int = 1) -> OracleOutcome:
    return decomposition_oracle.find_decomposition(g, shape, budget=budget, jobs=jobs)


def certify_claimed_graph(g: Graph, shape: BlockShape) -> Design:
    return decomposition_oracle.certify_claimed_graph(g, shape)

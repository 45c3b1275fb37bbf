"""
Graph, block and design types
All types are immutable after construction.
"""
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

from utils.errors import PreconditionError, UsageError

Edge = Tuple[int, int]


def canonical_edge(u: int, v: int) -> Edge:
    """Smaller id first"""
    if u == v:
        raise UsageError(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


# ===================
# Shapes and blocks
# ===================

class ShapeKind(str, Enum):
    PATH = "P"
    CYCLE = "C"


_SHAPE_RE = re.compile(r"^\s*([PCpc])_?(\d+)\s*$")


@dataclass(frozen=True)
class BlockShape:
    """P_k (k vertices, k-1 edges) or C_k (k edges)"""
    kind: ShapeKind
    k: int

    def __post_init__(self):
        minimum = 2 if self.kind == ShapeKind.PATH else 3
        if self.k < minimum:
            raise UsageError(f"{self.kind.value}_{self.k} is not a valid shape (k >= {minimum})")

    @classmethod
    def path(cls, k: int) -> "BlockShape":
        return cls(ShapeKind.PATH, k)

    @classmethod
    def cycle(cls, k: int) -> "BlockShape":
        return cls(ShapeKind.CYCLE, k)

    @classmethod
    def parse(cls, text: str) -> "BlockShape":
        """Accepts P4, P_4, C13, c_9"""
        match = _SHAPE_RE.match(text)
        if not match:
            raise UsageError(f"unknown shape '{text}' (expected P<k> or C<k>)")
        return cls(ShapeKind(match.group(1).upper()), int(match.group(2)))

    @property
    def is_path(self) -> bool:
        return self.kind == ShapeKind.PATH

    @property
    def edge_count(self) -> int:
        return self.k - 1 if self.is_path else self.k

    @property
    def contains_p4(self) -> bool:
        return self.k >= 4

    @property
    def label(self) -> str:
        return f"{self.kind.value}{self.k}"

    def __str__(self) -> str:
        return self.label


P4 = BlockShape.path(4)
P5 = BlockShape.path(5)
C4 = BlockShape.cycle(4)


@dataclass(frozen=True)
class Block:
    """Ordered vertex sequence; a path [a_1..a_k] or a cycle (a_1..a_k)"""
    shape: BlockShape
    vertices: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        if len(self.vertices) != self.shape.k:
            raise UsageError(
                f"block {list(self.vertices)} has {len(self.vertices)} vertices, {self.shape} needs {self.shape.k}"
            )
        if len(set(self.vertices)) != len(self.vertices):
            raise UsageError(f"block {list(self.vertices)} repeats a vertex")
        if any(v < 0 for v in self.vertices):
            raise UsageError(f"block {list(self.vertices)} has a negative vertex id")

    @classmethod
    def path(cls, vertices: Sequence[int]) -> "Block":
        return cls(BlockShape.path(len(vertices)), tuple(vertices))

    @classmethod
    def cycle(cls, vertices: Sequence[int]) -> "Block":
        return cls(BlockShape.cycle(len(vertices)), tuple(vertices))

    @cached_property
    def edges(self) -> Tuple[Edge, ...]:
        vs = self.vertices
        pairs = [canonical_edge(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]
        if not self.shape.is_path:
            pairs.append(canonical_edge(vs[-1], vs[0]))
        return tuple(pairs)

    @cached_property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges)

    def canonical(self) -> "Block":
        """Lexicographically smallest orientation (and rotation, for cycles)"""
        vs = self.vertices
        if self.shape.is_path:
            rev = tuple(reversed(vs))
            return self if vs <= rev else Block(self.shape, rev)
        candidates = []
        n = len(vs)
        for seq in (vs, tuple(reversed(vs))):
            for r in range(n):
                candidates.append(seq[r:] + seq[:r])
        best = min(candidates)
        return self if best == vs else Block(self.shape, best)

    def relabel(self, mapping) -> "Block":
        return Block(self.shape, tuple(mapping[v] for v in self.vertices))

    def __str__(self) -> str:
        inner = ",".join(str(v) for v in self.vertices)
        return f"[{inner}]" if self.shape.is_path else f"({inner})"


# ===================
# Graphs and hosts
# ===================

@dataclass(frozen=True)
class Graph:
    """Labeled simple undirected graph"""
    vertices: Tuple[int, ...]
    edges: FrozenSet[Edge]

    def __post_init__(self):
        verts = tuple(sorted(set(int(v) for v in self.vertices)))
        object.__setattr__(self, "vertices", verts)
        normalized = frozenset(canonical_edge(u, v) for u, v in self.edges)
        object.__setattr__(self, "edges", normalized)
        vset = set(verts)
        for u, v in normalized:
            if u not in vset or v not in vset:
                raise UsageError(f"edge ({u},{v}) has an endpoint outside the vertex set")

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], vertices: Iterable[int] = ()) -> "Graph":
        edges = [canonical_edge(u, v) for u, v in edges]
        verts = set(vertices)
        for u, v in edges:
            verts.update((u, v))
        return cls(tuple(verts), frozenset(edges))

    @cached_property
    def edge_list(self) -> Tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def adjacency(self) -> Dict[int, FrozenSet[int]]:
        adj: Dict[int, set] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(ns) for v, ns in adj.items()}

    def degree(self, v: int) -> int:
        return len(self.adjacency.get(v, ()))

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return len(self.edges)

    def to_networkx(self):
        import networkx as nx

        nxg = nx.Graph()
        nxg.add_nodes_from(self.vertices)
        nxg.add_edges_from(self.edge_list)
        return nxg


class HostKind(str, Enum):
    COMPLETE = "complete"
    BIPARTITE = "bipartite"
    EDGES = "edges"


@dataclass(frozen=True)
class HostSpec:
    """Host descriptor: K n, K m n, or an explicit edge list"""
    kind: HostKind
    params: Tuple[int, ...] = ()
    explicit: Optional[Graph] = None

    def __post_init__(self):
        if self.kind == HostKind.COMPLETE and (len(self.params) != 1 or self.params[0] < 1):
            raise UsageError(f"complete host needs one positive order, got {self.params}")
        if self.kind == HostKind.BIPARTITE and (len(self.params) != 2 or min(self.params) < 1):
            raise UsageError(f"bipartite host needs two positive part sizes, got {self.params}")
        if self.kind == HostKind.EDGES and self.explicit is None:
            raise UsageError("edge-list host needs an explicit graph")

    @classmethod
    def complete(cls, n: int) -> "HostSpec":
        return cls(HostKind.COMPLETE, (n,))

    @classmethod
    def bipartite(cls, m: int, n: int) -> "HostSpec":
        return cls(HostKind.BIPARTITE, (m, n))

    @classmethod
    def edges(cls, graph: Graph) -> "HostSpec":
        return cls(HostKind.EDGES, (), graph)

    @cached_property
    def graph(self) -> Graph:
        if self.kind == HostKind.COMPLETE:
            n = self.params[0]
            return Graph(tuple(range(n)), frozenset((u, v) for u in range(n) for v in range(u + 1, n)))
        if self.kind == HostKind.BIPARTITE:
            m, n = self.params
            return Graph(tuple(range(m + n)), frozenset((u, v) for u in range(m) for v in range(m, m + n)))
        return self.explicit

    @property
    def descriptor(self) -> str:
        if self.kind == HostKind.COMPLETE:
            return f"K {self.params[0]}"
        if self.kind == HostKind.BIPARTITE:
            return f"K {self.params[0]} {self.params[1]}"
        return "edges"

    @property
    def order(self) -> int:
        if self.kind == HostKind.COMPLETE:
            return self.params[0]
        if self.kind == HostKind.BIPARTITE:
            return sum(self.params)
        return self.explicit.order

    def __str__(self) -> str:
        return self.descriptor


# ===================
# Designs and down-links
# ===================

@dataclass(frozen=True)
class Design:
    """A host plus a list of blocks claimed to partition its edges"""
    host: HostSpec
    shape: BlockShape
    blocks: Tuple[Block, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))

    @property
    def order(self) -> int:
        return self.host.order

    def canonical(self) -> "Design":
        return Design(self.host, self.shape, tuple(b.canonical() for b in self.blocks))

    def block_keys(self) -> FrozenSet[Tuple[int, ...]]:
        return frozenset(b.canonical().vertices for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class DownLink:
    """map pairs (domain block index, codomain block index)"""
    domain: Design
    codomain: Design
    mapping: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple((int(i), int(j)) for i, j in self.mapping))


@dataclass(frozen=True)
class PartialDesign:
    """Edge-disjoint blocks inside K_order, not necessarily spanning"""
    order: int
    shape: BlockShape
    blocks: Tuple[Block, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        seen = set()
        for idx, block in enumerate(self.blocks):
            if block.shape != self.shape:
                raise PreconditionError(f"block {idx} is a {block.shape}, expected {self.shape}")
            for u, v in block.edges:
                if v >= self.order:
                    raise PreconditionError(f"block {idx} leaves K_{self.order}")
                if (u, v) in seen:
                    raise PreconditionError(f"blocks overlap on edge ({u},{v})")
                seen.add((u, v))


@dataclass(frozen=True)
class DifferenceFamily:
    """Base blocks over Z_v"""
    v: int
    shape: BlockShape
    base_blocks: Tuple[Block, ...]

    def __post_init__(self):
        object.__setattr__(self, "base_blocks", tuple(self.base_blocks))

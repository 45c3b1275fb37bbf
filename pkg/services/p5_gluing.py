"""
P_5 gluing
Down-links from (K_v, P_5)-designs to (K_{v+delta}, P_4)-designs at the boundary offsets the residue of
v mod 24 allows. K_v is cut into an optional head, blocks of 24 vertices and the complete bipartite
slabs between them. Every component carries a small local down-link (a recipe); recipes are glued
along shared vertices, the deleted vertex x = v-1 or the added vertex alpha = v included.
"""
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from models.graph import Block, Design, DownLink, Graph, HostSpec, canonical_edge, P4, P5
from services.apex_decomposer import p4_decompose_with_apexes
from services.cyclic_designs import path_design
from services.design_catalog import design_catalog
from services.graph_core import deletable_vertices, verify_downlink
from services.linker import SpectrumWitness, identity_witness, cycle_split_blocks, wheel_blocks
from utils.admissibility import P5_TARGETS, p5_boundary_allowed
from utils.errors import InternalConsistencyError, UsageError
from utils.logger import setup_logger

logger = setup_logger(__name__)

BLOCK = 24
SHIPPED_CROSS_LINK = "K24x9-P5-to-K24x10-P4"


# ===================
# Local recipes
# ===================

@dataclass(frozen=True)
class LocalLink:
    """Down-link on one component in local ids; image i belongs to domain block i"""
    name: str
    domain_host: HostSpec
    codomain_host: HostSpec
    domain: Tuple[Block, ...]
    images: Tuple[Block, ...]
    completion: Tuple[Block, ...] = ()
    deleted: Optional[int] = None

    @property
    def local_order(self) -> int:
        return max(self.domain_host.order, self.codomain_host.order)

    def downlink(self) -> DownLink:
        domain = Design(self.domain_host, P5, self.domain)
        codomain = Design(self.codomain_host, P4, self.images + self.completion)
        return DownLink(domain, codomain, tuple((i, i) for i in range(len(self.domain))))

    def check(self) -> "LocalLink":
        dl = self.downlink()
        report = verify_downlink(dl)
        if not report.valid:
            raise InternalConsistencyError(f"recipe {self.name} fails: {report.violations[0].render()}")
        if self.deleted is not None and self.deleted not in deletable_vertices(dl.domain):
            raise InternalConsistencyError(f"recipe {self.name}: vertex {self.deleted} is interior to some block")
        return self


def _truncate(design: Design, drops: Sequence[str]) -> Tuple[List[Block], List[Tuple[int, int]]]:
    """Per base orbit, every P_5 loses its 'first' or 'last' edge"""
    per_orbit = len(design.blocks) // len(drops)
    images, dropped = [], []
    for idx, block in enumerate(design.blocks):
        vs = block.vertices
        if drops[idx // per_orbit] == "first":
            images.append(Block(P4, vs[1:]))
            dropped.append(canonical_edge(vs[0], vs[1]))
        else:
            images.append(Block(P4, vs[:-1]))
            dropped.append(canonical_edge(vs[-2], vs[-1]))
    return images, dropped


def _difference_cycle(modulus: int, diff: int) -> List[int]:
    return [(diff * j) % modulus for j in range(modulus)]


def _k8_del() -> LocalLink:
    d = path_design(8, 5)
    images, _ = _truncate(d, ["first"])
    return LocalLink("K8-del", d.host, HostSpec.complete(7), d.blocks, tuple(images), deleted=7)


def _k9(add: bool) -> LocalLink:
    d = path_design(9, 5)
    images, _ = _truncate(d, ["last"])
    cycle = _difference_cycle(9, 1)
    if add:
        return LocalLink("K9-add", d.host, HostSpec.complete(10), d.blocks, tuple(images), tuple(wheel_blocks(cycle, 9)))
    return LocalLink("K9-same", d.host, d.host, d.blocks, tuple(images), tuple(cycle_split_blocks(cycle)))


def _k16(delete: bool) -> LocalLink:
    d = path_design(16, 5)
    if delete:
        images, _ = _truncate(d, ["first", "last"])
        completion = cycle_split_blocks(_difference_cycle(15, 4))
        return LocalLink("K16-del", d.host, HostSpec.complete(15), d.blocks, tuple(images), tuple(completion), deleted=15)
    images, _ = _truncate(d, ["last", "last"])
    completion = cycle_split_blocks(_difference_cycle(15, 1)) + cycle_split_blocks(_difference_cycle(15, 4))
    return LocalLink("K16-same", d.host, d.host, d.blocks, tuple(images), tuple(completion))


def _k24(add: bool) -> LocalLink:
    d = path_design(BLOCK, 5)
    if not add:
        images, _ = _truncate(d, ["last", "last", "last"])
        # differences 1, 4, 8 over Z_23
        completion = [Block(P4, (i, (i + 1) % 23, (i + 5) % 23, (i + 13) % 23)) for i in range(23)]
        return LocalLink("K24-same", d.host, d.host, d.blocks, tuple(images), tuple(completion))

    images, dropped = _truncate(d, ["first", "last", "last"])
    alpha = BLOCK
    residual = Graph.from_edges(dropped + [(v, alpha) for v in range(BLOCK)])
    result = p4_decompose_with_apexes(residual, BLOCK - 1, alpha)
    if result.leftover:
        raise InternalConsistencyError(f"K24-add residual left {len(result.leftover)} edges")
    return LocalLink("K24-add", d.host, HostSpec.complete(BLOCK + 1), d.blocks, tuple(images), result.blocks)


def _k34(delete: bool) -> LocalLink:
    # three-side 0..2, four-side 3..6
    if delete:
        rows = [(6, i, 3 + i, (i + 1) % 3, 3 + (i - 1) % 3) for i in range(3)]
        domain = tuple(Block(P5, r) for r in rows)
        images = tuple(Block(P4, r[1:]) for r in rows)
        return LocalLink("K34-del", HostSpec.bipartite(3, 4), HostSpec.bipartite(3, 3), domain, images, deleted=6)
    rows = [(3, 0, 5, 1, 6), (4, 0, 6, 2, 3), (3, 1, 4, 2, 5)]
    domain = tuple(Block(P5, r) for r in rows)
    images = tuple(Block(P4, r[1:]) for r in rows)
    return LocalLink("K34-same", HostSpec.bipartite(3, 4), HostSpec.bipartite(3, 4), domain, images,
                     (Block(P4, (4, 0, 3, 1)),))


def _k9x24_add() -> LocalLink:
    """Shipped K_{24,9} down-link; alpha joins the 9-side"""
    dl = design_catalog.downlink(SHIPPED_CROSS_LINK)
    image_of = dict(dl.mapping)
    images = tuple(dl.codomain.blocks[image_of[i]] for i in range(len(dl.domain.blocks)))
    used = set(image_of.values())
    completion = tuple(b for j, b in enumerate(dl.codomain.blocks) if j not in used)
    return LocalLink("K9x24-add", dl.domain.host, dl.codomain.host, dl.domain.blocks, images, completion)


def _composite(name: str, small: str, large: str, n_small: int, n_large: int, deleted: Optional[int]) -> LocalLink:
    """Recipe on n_small + n_large vertices: two complete parts and the slabs between them"""
    n = n_small + n_large
    lower, upper = list(range(n_small)), list(range(n_small, n))
    placements = [Placement(small, tuple(lower)), Placement(large, tuple(upper))]
    placements += slab_placements(lower, upper, deleted)
    domain, images, completion = assemble(placements)
    target = n - 1 if deleted is not None else n
    return LocalLink(name, HostSpec.complete(n), HostSpec.complete(target), tuple(domain), tuple(images),
                     tuple(completion), deleted=deleted)


_RECIPES = {
    "K8-del": _k8_del,
    "K9-same": lambda: _k9(False),
    "K9-add": lambda: _k9(True),
    "K16-del": lambda: _k16(True),
    "K16-same": lambda: _k16(False),
    "K17-del": lambda: _composite("K17-del", "K9-same", "K8-del", 9, 8, 16),
    "K24-same": lambda: _k24(False),
    "K24-add": lambda: _k24(True),
    "K25-del": lambda: _composite("K25-del", "K9-same", "K16-del", 9, 16, 24),
    "K25-same": lambda: _composite("K25-same", "K9-same", "K16-same", 9, 16, None),
    "K34-same": lambda: _k34(False),
    "K34-del": lambda: _k34(True),
    "K9x24-add": _k9x24_add,
}


@lru_cache(maxsize=None)
def local_link(name: str) -> LocalLink:
    """Built and verified once per process"""
    if name not in _RECIPES:
        raise UsageError(f"unknown gluing recipe {name}; known: {sorted(_RECIPES)}")
    link = _RECIPES[name]().check()
    logger.debug(f"recipe {name}: {len(link.domain)} P5 -> {len(link.images) + len(link.completion)} P4")
    return link


def recipe_names() -> List[str]:
    return sorted(_RECIPES)


# ===================
# Placement
# ===================

@dataclass(frozen=True)
class Placement:
    """A recipe whose local vertex i lands on vertices[i]"""
    recipe: str
    vertices: Tuple[int, ...]


def _chunks(vertices: Sequence[int], size: int) -> List[Tuple[int, ...]]:
    if len(vertices) % size:
        raise InternalConsistencyError(f"{len(vertices)} vertices do not split into groups of {size}")
    return [tuple(vertices[i:i + size]) for i in range(0, len(vertices), size)]


def slab_placements(threes: Sequence[int], fours: Sequence[int], deleted: Optional[int] = None) -> List[Placement]:
    """K_{A,B} as K_{3,4} slabs: 3-groups of A against 4-groups of B"""
    out = []
    for t in _chunks(threes, 3):
        for f in _chunks(fours, 4):
            if deleted in f:
                if f[-1] != deleted:
                    raise InternalConsistencyError(f"deleted vertex {deleted} must close its group {f}")
                out.append(Placement("K34-del", t + f))
            else:
                out.append(Placement("K34-same", t + f))
    return out


def assemble(placements: Sequence[Placement]) -> Tuple[List[Block], List[Block], List[Block]]:
    """(domain, images, completion) in global ids; images[i] lies inside domain[i]"""
    domain: List[Block] = []
    images: List[Block] = []
    completion: List[Block] = []
    for p in placements:
        link = local_link(p.recipe)
        if len(p.vertices) != link.local_order:
            raise InternalConsistencyError(f"{p.recipe} needs {link.local_order} vertices, got {len(p.vertices)}")
        domain += [b.relabel(p.vertices) for b in link.domain]
        images += [b.relabel(p.vertices) for b in link.images]
        completion += [b.relabel(p.vertices) for b in link.completion]
    return domain, images, completion


# ===================
# Gluing table
# ===================

@dataclass(frozen=True)
class GluingRow:
    residue: int
    delta: int
    head3: int
    head4: int
    head_recipe: Optional[str] = None
    block_recipe: str = "K24-same"
    # replaces the head x block slabs when set
    cross_recipe: Optional[str] = None

    @property
    def head(self) -> int:
        return self.head3 + self.head4

    def describe(self) -> str:
        parts = [f"v = {self.residue} (mod 24), delta {self.delta:+d}"]
        if self.head_recipe:
            parts.append(f"head {self.head_recipe}")
        parts.append(f"blocks {self.block_recipe}")
        if self.cross_recipe:
            parts.append(f"cross {self.cross_recipe}")
        return ", ".join(parts)


GLUING_ROWS: Dict[Tuple[int, int], GluingRow] = {
    (1, -1): GluingRow(1, -1, 9, 16, "K25-del"),
    (8, -1): GluingRow(8, -1, 0, 8, "K8-del"),
    (16, -1): GluingRow(16, -1, 0, 16, "K16-del"),
    (17, -1): GluingRow(17, -1, 9, 8, "K17-del"),
    (0, 0): GluingRow(0, 0, 0, 0),
    (1, 0): GluingRow(1, 0, 9, 16, "K25-same"),
    (9, 0): GluingRow(9, 0, 9, 0, "K9-same"),
    (16, 0): GluingRow(16, 0, 0, 16, "K16-same"),
    (0, 1): GluingRow(0, 1, 0, 0, block_recipe="K24-add"),
    (9, 1): GluingRow(9, 1, 9, 0, "K9-add", cross_recipe="K9x24-add"),
}


@dataclass
class GluingPlan:
    v: int
    target: int
    row: GluingRow
    head: Tuple[int, ...]
    blocks: List[Tuple[int, ...]]
    placements: List[Placement]

    @property
    def delta(self) -> int:
        return self.target - self.v

    def recipe_counts(self) -> Dict[str, int]:
        return dict(Counter(p.recipe for p in self.placements))


def build_gluing_plan(v: int, target: int) -> GluingPlan:
    if not p5_boundary_allowed(v, target):
        allowed = [v + off for off in P5_TARGETS.get(v % 24, ())]
        raise UsageError(f"P5 boundary down-link from v={v} (v = {v % 24} mod 24) reaches targets {allowed}, not {target}")
    row = GLUING_ROWS[(v % 24, target - v)]
    if (v - row.head) % BLOCK or v < row.head:
        raise InternalConsistencyError(f"v={v} does not split into a head of {row.head} and blocks of {BLOCK}")

    t = (v - row.head) // BLOCK
    blocks = [tuple(range(BLOCK * j, BLOCK * (j + 1))) for j in range(t)]
    head = tuple(range(BLOCK * t, v))
    head3, head4 = head[:row.head3], head[row.head3:]
    alpha = (v,) if row.delta == 1 else ()
    deleted = v - 1 if row.delta == -1 else None

    placements: List[Placement] = []
    if row.head_recipe:
        placements.append(Placement(row.head_recipe, head + (alpha if row.head_recipe.endswith("add") else ())))
    for b in blocks:
        placements.append(Placement(row.block_recipe, b + (alpha if row.block_recipe.endswith("add") else ())))
    for i in range(t):
        for j in range(i + 1, t):
            placements += slab_placements(blocks[i], blocks[j])
    for b in blocks:
        if row.cross_recipe:
            placements.append(Placement(row.cross_recipe, b + head + alpha))
            continue
        placements += slab_placements(head3, b)
        placements += slab_placements(b, head4, deleted)
    return GluingPlan(v, target, row, head, blocks, placements)


def downlink_p5(v: int, target: int) -> SpectrumWitness:
    plan = build_gluing_plan(v, target)
    domain_blocks, images, completion = assemble(plan.placements)
    domain = Design(HostSpec.complete(v), P5, tuple(domain_blocks))
    codomain = Design(HostSpec.complete(target), P4, tuple(images + completion))

    if plan.delta == -1 and v - 1 not in deletable_vertices(domain):
        raise InternalConsistencyError(f"vertex {v - 1} is interior to a block of the glued P5-design")

    trace = [plan.row.describe(), f"head {len(plan.head)} vertices, {len(plan.blocks)} blocks of {BLOCK}"]
    trace += [f"{name} x{count}" for name, count in sorted(plan.recipe_counts().items())]
    return identity_witness(P5, domain, codomain, "p5-gluing", trace)

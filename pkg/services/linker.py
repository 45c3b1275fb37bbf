"""
Linker
Embeddings of partial P_4-designs and of P_k-designs, and the down-links from Gamma-designs to
P_4-designs: generic (choose a P_4 in each block, embed two orders up), reserved-vertex
(long cycles and paths, codomain close to v) and the C_4 difference-family construction.
"""
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from models.graph import Block, BlockShape, Design, DownLink, HostKind, HostSpec, PartialDesign, C4, P4, P5
from models.schemas import Finding, FindingKind, VerificationReport, WitnessManifest
from services.apex_decomposer import ApexInput, p4_decompose_two_apex
from services.bipartite_paths import bipartite_path_design, place_slab
from services.cyclic_designs import c4_difference_family, develop
from services.design_catalog import design_catalog
from services.graph_core import complete_graph, complete_on, bipartite_on, graph_subtract, graph_union, verify_design, verify_downlink
from services.oracle_solver import decomposition_oracle
from utils.admissibility import (
    C4_TARGETS,
    c4_boundary_allowed,
    p4_admissible,
    pk_order_class,
    reserved_branch_orders,
)
from utils.errors import InternalConsistencyError, NotCatalogedError, PreconditionError, UsageError
from utils.logger import setup_logger

logger = setup_logger(__name__)


# ===================
# Witness
# ===================

@dataclass
class SpectrumWitness:
    gamma: BlockShape
    v: int
    n: int
    downlink: DownLink
    construction: str
    trace: List[str] = field(default_factory=list)

    @property
    def domain(self) -> Design:
        return self.downlink.domain

    @property
    def codomain(self) -> Design:
        return self.downlink.codomain

    def to_manifest(self) -> WitnessManifest:
        return WitnessManifest(gamma=self.gamma.label, v=self.v, n=self.n, construction=self.construction,
                               trace=list(self.trace))


def identity_witness(gamma: BlockShape, domain: Design, codomain: Design, construction: str,
                      trace: Sequence[str] = ()) -> SpectrumWitness:
    """Domain block i maps to codomain block i"""
    dl = DownLink(domain, codomain, tuple((i, i) for i in range(len(domain.blocks))))
    witness = SpectrumWitness(gamma, domain.order, codomain.order, dl, construction, list(trace))
    report = verify_spectrum_membership(witness)
    if not report.valid:
        raise InternalConsistencyError(f"{construction} produced an invalid witness: {report.violations[0].render()}")
    logger.info(f"{construction}: ({gamma}, v={witness.v}) -> n={witness.n}, {len(codomain.blocks)} codomain blocks")
    return witness


def verify_spectrum_membership(w: SpectrumWitness) -> VerificationReport:
    report = verify_downlink(w.downlink)
    findings: List[Finding] = []
    if w.domain.shape != w.gamma:
        findings.append(Finding(kind=FindingKind.BAD_BLOCK_SHAPE, message=f"domain is a {w.domain.shape}-design, witness claims {w.gamma}"))
    if w.codomain.shape != P4:
        findings.append(Finding(kind=FindingKind.BAD_BLOCK_SHAPE, message=f"codomain is a {w.codomain.shape}-design, expected P4"))
    if w.domain.order != w.v:
        findings.append(Finding(kind=FindingKind.ORDER_MISMATCH, message=f"domain order {w.domain.order} != v={w.v}"))
    if w.codomain.order != w.n:
        findings.append(Finding(kind=FindingKind.ORDER_MISMATCH, message=f"codomain order {w.codomain.order} != n={w.n}"))
    if w.gamma == P5 and w.n < w.v - 1:
        findings.append(Finding(kind=FindingKind.ORDER_BOUND, message=f"P5 witness with n={w.n} < v-1={w.v - 1}"))
    if w.gamma == C4 and w.n < w.v:
        findings.append(Finding(kind=FindingKind.ORDER_BOUND, message=f"C4 witness with n={w.n} < v={w.v}"))
    return VerificationReport(violations=report.violations + findings, observations=report.observations)


# ===================
# Partial P_4 embedding and generic down-link
# ===================

def embed_partial_p4(p: PartialDesign, n: int) -> Design:
    """Blocks of p, then a two-apex decomposition of K_n - E(p) with apexes n-2, n-1"""
    if p.shape != P4:
        raise UsageError(f"partial design has shape {p.shape}, expected P4")
    if n < p.order + 2:
        raise UsageError(f"embedding needs n >= v+2 = {p.order + 2}, got {n}")
    if not p4_admissible(n):
        raise UsageError(f"no (K_{n},P4)-design: n must be 0 or 1 (mod 3)")

    residual = graph_subtract(complete_graph(n), p.blocks)
    result = p4_decompose_two_apex(ApexInput(residual, n - 2, n - 1))
    if result.leftover:
        raise InternalConsistencyError(f"embedding residual left {len(result.leftover)} edges")
    design = Design(HostSpec.complete(n), P4, tuple(p.blocks) + result.design.blocks)
    report = verify_design(design)
    if not report.valid:
        raise InternalConsistencyError(f"embedding into K_{n} fails: {report.violations[0].render()}")
    logger.debug(f"embedded {len(p.blocks)} blocks into K_{n}; apex trace {result.case_trace}")
    return design


def _require_valid(d: Design, what: str):
    report = verify_design(d)
    if not report.valid:
        raise PreconditionError(f"{what} is not a valid design: {report.violations[0].render()}")


def downlink_generic(d: Design, n: int) -> SpectrumWitness:
    """First four vertices of every block as its P_4, then embed into K_n"""
    if not d.shape.contains_p4:
        raise UsageError(f"{d.shape} contains no P4")
    if d.host.kind != HostKind.COMPLETE:
        raise UsageError("generic down-links need a design on a complete graph")
    _require_valid(d, "domain")
    v = d.order
    if n < v + 2 or not p4_admissible(n):
        raise UsageError(f"generic down-link needs n >= {v + 2} with n = 0,1 (mod 3), got {n}")

    partial = PartialDesign(v, P4, tuple(Block(P4, b.vertices[:4]) for b in d.blocks))
    codomain = embed_partial_p4(partial, n)
    return identity_witness(d.shape, d, codomain, "generic", [f"P4 per block, embedded into K_{n}"])


def extend_witness(w: SpectrumWitness, m: int) -> SpectrumWitness:
    """Compose with a P_4 embedding of the codomain: m >= n+2, m = 0,1 (mod 3)"""
    codomain, trace = embed_pk_traced(w.codomain, m)
    dl = DownLink(w.domain, codomain, w.downlink.mapping)
    witness = SpectrumWitness(w.gamma, w.v, m, dl, f"{w.construction}+closure", list(w.trace) + [f"closure from n={w.n}"] + trace)
    report = verify_spectrum_membership(witness)
    if not report.valid:
        raise InternalConsistencyError(f"closure to m={m} failed: {report.violations[0].render()}")
    return witness


# ===================
# P_k embedding
# ===================

@dataclass
class EmbedPlan:
    k: int
    n: int
    m: int
    bullet: int
    old_groups: List[List[int]]
    new_groups: List[List[int]]
    complete_part: List[int]

    @property
    def degenerate(self) -> bool:
        return len(self.complete_part) < self.k


def _groups(vertices: Sequence[int], sizes: Sequence[int]) -> List[List[int]]:
    out, start = [], 0
    for size in sizes:
        out.append(list(vertices[start:start + size]))
        start += size
    return out


def _split(total: int, first: int, unit: int) -> List[int]:
    """[first] followed by copies of unit; first is skipped when total is a multiple of unit"""
    if total % unit == 0:
        return [unit] * (total // unit)
    return [first] + [unit] * ((total - first) // unit)


def build_embed_plan(k: int, n: int, m: int) -> EmbedPlan:
    q = k - 1
    s = m - n
    old = list(range(n))
    new = list(range(n, m))
    key = (n % q, s % q)
    if key == (0, 0):
        return EmbedPlan(k, n, m, 1, _groups(old, [q] * (n // q)), _groups(new, [q] * (s // q)), new)
    if key == (0, 1):
        return EmbedPlan(k, n, m, 2, _groups(old, [q] * (n // q)), _groups(new, _split(s, k, q)), new)
    if key == (1, 0):
        return EmbedPlan(k, n, m, 3, _groups(old, _split(n, k, q)), _groups(new, [q] * (s // q)), new)
    if key == (1, k - 2):
        pivot = n - 1
        return EmbedPlan(k, n, m, 4, _groups(old[:-1], [q] * ((n - 1) // q)), _groups(new, _split(s, k - 2, q)),
                         new + [pivot])
    raise UsageError(f"no embedding rule for n={n}, s={s} (mod {q})")


def pk_complete_design(c: int, k: int) -> Design:
    """(K_c, P_k) from the catalog, else embedded from K_k when c = k-1, k (mod 2(k-1))"""
    shape = BlockShape.path(k)
    try:
        return design_catalog.base_design(shape, HostSpec.complete(c))
    except NotCatalogedError:
        if k % 2 or c <= k or pk_order_class(c, k) is None:
            raise
    logger.debug(f"(K_{c},P_{k}) built by embedding a Hamiltonian design of K_{k}")
    return embed_pk(design_catalog.base_design(shape, HostSpec.complete(k)), c)


def _degenerate_blocks(plan: EmbedPlan, shape: BlockShape) -> List[Block]:
    """The complete part merged with its first slab"""
    first_old = plan.old_groups[0]
    first_new = plan.new_groups[0]
    merged = graph_union(complete_on(plan.complete_part), bipartite_on(first_old, first_new))
    if shape == P4:
        alpha, beta = sorted(first_new)[-2:]
        result = p4_decompose_two_apex(ApexInput(merged, alpha, beta))
        if result.leftover:
            raise InternalConsistencyError("degenerate embedding left uncovered edges")
        return list(result.design.blocks)
    return list(decomposition_oracle.certify_claimed_graph(merged, shape).blocks)


def embed_pk_traced(d: Design, m: int) -> Tuple[Design, List[str]]:
    shape = d.shape
    k = shape.k
    if not shape.is_path or k % 2 or k < 4:
        raise UsageError(f"embedding needs an even path shape P_k with k >= 4, got {shape}")
    if d.host.kind != HostKind.COMPLETE:
        raise UsageError("embedding needs a design on a complete graph")
    n = d.order
    if pk_order_class(n, k) is None or pk_order_class(m, k) is None:
        raise UsageError(f"n={n} and m={m} must both be 0 or 1 (mod {k - 1})")
    if m <= n + 1:
        raise UsageError(f"embedding needs m > n+1, got n={n}, m={m}")
    _require_valid(d, "input design")

    if n == 1:
        target = pk_complete_design(m, k)
        return Design(HostSpec.complete(m), shape, target.blocks), [f"n=1: base (K_{m},P_{k})"]

    plan = build_embed_plan(k, n, m)
    trace = [f"bullet {plan.bullet}: n={n} = {n % (k - 1)}, s={m - n} = {(m - n) % (k - 1)} (mod {k - 1})"]
    blocks: List[Block] = []
    skip_first_slab = plan.degenerate
    if plan.degenerate:
        blocks += _degenerate_blocks(plan, shape)
        trace.append(f"K_{len(plan.complete_part)} merged with slab K_{len(plan.old_groups[0])},{len(plan.new_groups[0])}")
    else:
        part = sorted(plan.complete_part)
        base = pk_complete_design(len(part), k)
        blocks += [b.relabel(part) for b in base.blocks]
        trace.append(f"complete part K_{len(part)}")

    for gi, og in enumerate(plan.old_groups):
        for ni, ng in enumerate(plan.new_groups):
            if skip_first_slab and gi == 0 and ni == 0:
                continue
            slab = bipartite_path_design(k, len(og), len(ng))
            blocks += place_slab(slab, og, ng)
    sizes = sorted({(len(og), len(ng)) for og in plan.old_groups for ng in plan.new_groups})
    trace.append("slabs " + ", ".join(f"K_{a},{b}" for a, b in sizes))

    out = Design(HostSpec.complete(m), shape, tuple(d.blocks) + tuple(blocks))
    report = verify_design(out)
    if not report.valid:
        raise InternalConsistencyError(f"embedding (K_{n},{shape}) into K_{m} fails: {report.violations[0].render()}")
    logger.info(f"embedded (K_{n},{shape}) into K_{m}: {' | '.join(trace)}")
    return out, trace


def embed_pk(d: Design, m: int) -> Design:
    return embed_pk_traced(d, m)[0]


# ===================
# Reserved-vertex down-links
# ===================

def _cycle_windows(block: Block) -> List[Tuple[int, ...]]:
    vs, k = block.vertices, len(block.vertices)
    return [tuple(vs[(i + j) % k] for j in range(4)) for i in range(k)]


def _path_windows(block: Block) -> List[Tuple[int, ...]]:
    vs = block.vertices
    return [tuple(vs[i:i + 4]) for i in range(len(vs) - 3)]


def _reserved_downlink(d: Design, t: int, windows: Callable[[Block], List[Tuple[int, ...]]],
                       target: Optional[int], construction: str) -> SpectrumWitness:
    _require_valid(d, "domain")
    if d.host.kind != HostKind.COMPLETE:
        raise UsageError("reserved-vertex down-links need a design on a complete graph")
    v = d.order
    base = v - t
    if base < 4:
        raise UsageError(f"order {v} is too small to reserve {t + 2} vertices")
    orders = reserved_branch_orders(base)
    n = orders[0] if target is None else target
    if n not in orders:
        raise UsageError(f"with v={v}, t={t} the codomain order must be one of {list(orders)}, got {n}")

    reserved_x = list(range(v - 1, v - t - 1, -1))
    y1, y2 = v - t - 2, v - t - 1
    reserved = set(reserved_x) | {y1, y2}

    chosen: List[Block] = []
    for idx, block in enumerate(d.blocks):
        window = next((w for w in windows(block) if not reserved & set(w)), None)
        if window is None:
            raise InternalConsistencyError(f"block {idx} {block} has no P4 window avoiding {sorted(reserved)}")
        chosen.append(Block(P4, window))
    for block in chosen:
        if reserved & set(block.vertices):
            raise InternalConsistencyError(f"extracted P4 {block} touches a reserved vertex")

    residual = graph_subtract(complete_graph(n), chosen)
    result = p4_decompose_two_apex(ApexInput(residual, y1, y2))
    if result.leftover:
        raise InternalConsistencyError(f"K_{n} residual left {len(result.leftover)} edges")
    codomain = Design(HostSpec.complete(n), P4, tuple(chosen) + result.design.blocks)
    trace = [f"t={t}", f"reserved x={reserved_x}", f"apexes y=({y1},{y2})", f"branch orders {list(orders)}"]
    return identity_witness(d.shape, d, codomain, construction, trace)


def downlink_cycle_system(d: Design, target: Optional[int] = None) -> SpectrumWitness:
    """(K_v, C_k), k >= 9: codomain order v - t (+1, +2) with t = floor((k-9)/4)"""
    k = d.shape.k
    if d.shape.is_path or k < 9:
        raise UsageError(f"cycle-system down-link needs C_k with k >= 9, got {d.shape}")
    return _reserved_downlink(d, (k - 9) // 4, _cycle_windows, target, "cycle-reserved")


def downlink_pk_design(d: Design, target: Optional[int] = None) -> SpectrumWitness:
    """(K_v, P_k), k >= 12: t = floor((k-12)/4)"""
    k = d.shape.k
    if not d.shape.is_path or k < 12:
        raise UsageError(f"path-design down-link needs P_k with k >= 12, got {d.shape}")
    return _reserved_downlink(d, (k - 12) // 4, _path_windows, target, "path-reserved")


# ===================
# C_4
# ===================

def cycle_split_blocks(cycle: Sequence[int]) -> List[Block]:
    """A cycle of length 0 (mod 3) cut into consecutive P_4s"""
    L = len(cycle)
    return [Block(P4, tuple(cycle[(j + i) % L] for i in range(4))) for j in range(0, L, 3)]


def wheel_blocks(cycle: Sequence[int], hub: int) -> List[Block]:
    """Cycle plus spokes to hub, two P_4s per three rim vertices"""
    L = len(cycle)
    out = []
    for j in range(0, L, 3):
        c0, c1, c2, c3 = (cycle[(j + i) % L] for i in range(4))
        out += [Block(P4, (c0, c1, c2, hub)), Block(P4, (c2, c3, hub, c1))]
    return out


def _difference_triple_paths(v: int, low: int) -> List[Block]:
    """Differences low, low+1, low+2 as the paths [i+1, d+i+1, i, d+i+2]"""
    return [Block(P4, ((i + 1) % v, (low + i + 1) % v, i, (low + i + 2) % v)) for i in range(v)]


def downlink_c4(v: int, target: int) -> SpectrumWitness:
    if not c4_boundary_allowed(v, target):
        allowed = [v + off for off in C4_TARGETS.get(v % 24, ())]
        raise UsageError(f"C4 down-link from v={v} (v = {v % 24} mod 24) reaches targets {allowed}, not {target}")

    df = c4_difference_family(v)
    domain = develop(df)
    q = (v - 1) // 8
    half = (v + 1) // 2
    r = v % 24
    alpha = v

    # cycle (g, a+g, h+g, q+a+g) loses its difference-a edge
    blocks = [Block(P4, ((a + g) % v, (half + g) % v, (q + a + g) % v, g)) for a in range(1, q + 1) for g in range(v)]
    trace = [f"v = {r} (mod 24), q={q}"]

    first = {1: 1, 9: 2, 17: 2}[r]
    last = q if r != 17 else q - 1
    for low in range(first, last + 1, 3):
        blocks += _difference_triple_paths(v, low)
        trace.append(f"differences {low},{low + 1},{low + 2}")

    if r == 9 and target == v:
        blocks += cycle_split_blocks(list(range(v)))
        trace.append("difference-1 cycle split into P4s")
    elif r == 9:
        blocks += wheel_blocks(list(range(v)), alpha)
        trace.append(f"wheel on the difference-1 cycle with hub {alpha}")
    elif r == 17:
        blocks += [Block(P4, (alpha, (1 + i) % v, i, (q + i) % v)) for i in range(v)]
        trace.append(f"hub {alpha} with differences 1 and {q}")

    codomain = Design(HostSpec.complete(target), P4, tuple(blocks))
    return identity_witness(C4, domain, codomain, "c4-difference-family", trace)

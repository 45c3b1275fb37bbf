"""
Cyclic designs
Difference families over Z_v, their development, the C_4 family for v = 1 (mod 8) and the
direct path / Hamiltonian constructions the catalog builds on.
"""
from collections import Counter
from typing import List, Sequence

from models.graph import Block, BlockShape, Design, DifferenceFamily, HostSpec, C4
from models.schemas import Finding, FindingKind, VerificationReport
from services.graph_core import verify_design
from utils.admissibility import c4_system_admissible
from utils.errors import InternalConsistencyError, PreconditionError, UsageError
from utils.logger import setup_logger

logger = setup_logger(__name__)


# ===================
# Differences
# ===================

def differences(block: Block, v: int) -> List[int]:
    """Ordered differences x-y and y-x over every adjacent pair, reduced mod v"""
    out = []
    for x, y in zip(block.vertices, block.vertices[1:] + ((block.vertices[0],) if not block.shape.is_path else ())):
        out.append((x - y) % v)
        out.append((y - x) % v)
    return out


def verify_difference_family(df: DifferenceFamily) -> VerificationReport:
    counts: Counter = Counter()
    findings: List[Finding] = []
    for idx, block in enumerate(df.base_blocks):
        if block.shape != df.shape:
            findings.append(Finding(kind=FindingKind.BAD_BLOCK_SHAPE, message=f"base block {idx} {block} is not a {df.shape}",
                                    block_index=idx))
        counts.update(differences(block, df.v))

    for d in range(df.v):
        seen = counts.get(d, 0)
        if d == 0:
            if seen:
                findings.append(Finding(kind=FindingKind.REPEATED_DIFFERENCE, message=f"difference 0 appears {seen} times"))
        elif seen == 0:
            findings.append(Finding(kind=FindingKind.MISSING_DIFFERENCE, message=f"difference {d} is not covered"))
        elif seen > 1:
            findings.append(Finding(kind=FindingKind.REPEATED_DIFFERENCE, message=f"difference {d} appears {seen} times"))
    return VerificationReport(violations=findings)


def c4_difference_family(v: int) -> DifferenceFamily:
    """Base cycles C^a = (0, a, (v+1)/2, (v-1)/8 + a) for a = 1..(v-1)/8"""
    if not c4_system_admissible(v):
        raise UsageError(f"C_4 difference family needs v = 1 (mod 8), v > 1; got {v}")
    q = (v - 1) // 8
    half = (v + 1) // 2
    blocks = tuple(Block(C4, (0, a, half, q + a)) for a in range(1, q + 1))
    df = DifferenceFamily(v, C4, blocks)
    report = verify_difference_family(df)
    if not report.valid:
        raise InternalConsistencyError(f"C_4 family fails coverage at v={v}: {report.violations[0].render()}")
    return df


def develop(df: DifferenceFamily) -> Design:
    """Orbit of every base block under +1 mod v; base blocks outermost"""
    report = verify_difference_family(df)
    if not report.valid:
        raise PreconditionError(f"cannot develop an invalid family: {report.violations[0].render()}")
    blocks: List[Block] = []
    seen = set()
    for base in df.base_blocks:
        for g in range(df.v):
            block = Block(df.shape, tuple((x + g) % df.v for x in base.vertices))
            key = block.canonical().vertices
            if key in seen:
                raise PreconditionError(f"development of {base} repeats block {block} (short orbit)")
            seen.add(key)
            blocks.append(block)
    return Design(HostSpec.complete(df.v), df.shape, tuple(blocks))


def develop_rotational(base_blocks: Sequence[Block], modulus: int, shape: BlockShape) -> Design:
    """Develop over Z_modulus with the point at infinity (id = modulus) fixed"""
    infinity = modulus
    blocks = []
    for base in base_blocks:
        for g in range(modulus):
            blocks.append(Block(shape, tuple(x if x == infinity else (x + g) % modulus for x in base.vertices)))
    return Design(HostSpec.complete(modulus + 1), shape, tuple(blocks))


# ===================
# Path families
# ===================

def zigzag_path(k: int, low: int) -> List[int]:
    """k vertices whose consecutive differences are low+k-2, ..., low+1, low"""
    top = low + k - 2
    return [p // 2 if p % 2 == 0 else top - p // 2 for p in range(k)]


def cyclic_path_family(v: int, k: int) -> DifferenceFamily:
    """Zig-zag P_k family over Z_v for v = 1 (mod 2(k-1))"""
    if v < k or v % (2 * (k - 1)) != 1:
        raise UsageError(f"cyclic P_{k} family needs v = 1 (mod {2 * (k - 1)}), v >= {k}; got {v}")
    shape = BlockShape.path(k)
    windows = (v - 1) // (2 * (k - 1))
    return DifferenceFamily(v, shape, tuple(Block(shape, tuple(zigzag_path(k, 1 + j * (k - 1)))) for j in range(windows)))


def rotational_path_base(v: int, k: int) -> List[Block]:
    """Base blocks over Z_{v-1} plus infinity for v = 0 (mod 2(k-1))"""
    if v < k or v % (2 * (k - 1)):
        raise UsageError(f"1-rotational P_{k} family needs v = 0 (mod {2 * (k - 1)}), v >= {k}; got {v}")
    shape = BlockShape.path(k)
    infinity = v - 1
    windows = v // (2 * (k - 1))
    bases = [Block(shape, tuple([infinity] + zigzag_path(k - 1, 1)))]
    for j in range(1, windows):
        bases.append(Block(shape, tuple(zigzag_path(k, j * (k - 1)))))
    return bases


def path_design(v: int, k: int) -> Design:
    """(K_v, P_k)-design for v = 0, 1 (mod 2(k-1))"""
    m = 2 * (k - 1)
    if v % m == 1:
        design = develop(cyclic_path_family(v, k))
    elif v % m == 0:
        design = develop_rotational(rotational_path_base(v, k), v - 1, BlockShape.path(k))
    else:
        raise UsageError(f"no difference construction for (K_{v},P_{k}): v must be 0 or 1 mod {m}")
    if not verify_design(design).valid:
        raise InternalConsistencyError(f"path family construction fails for (K_{v},P_{k})")
    logger.debug(f"path design (K_{v},P_{k}): {len(design)} blocks")
    return design


def hamiltonian_path_design(v: int) -> Design:
    """K_{2m} into m Hamiltonian paths g, g+1, g-1, g+2, ..., g+m"""
    if v < 2 or v % 2:
        raise UsageError(f"Hamiltonian path decomposition needs even v, got {v}")
    m = v // 2
    seq = [0]
    for j in range(1, m):
        seq += [j, -j]
    seq.append(m)
    shape = BlockShape.path(v)
    blocks = tuple(Block(shape, tuple((x + g) % v for x in seq)) for g in range(m))
    return Design(HostSpec.complete(v), shape, blocks)


def walecki_cycle_design(v: int) -> Design:
    """(K_v, C_v) for odd v: infinity closed onto each Hamiltonian path of K_{v-1}"""
    if v < 3 or v % 2 == 0:
        raise UsageError(f"Hamiltonian cycle systems need odd v >= 3, got {v}")
    if v == 3:
        return Design(HostSpec.complete(3), BlockShape.cycle(3), (Block.cycle((0, 1, 2)),))
    paths = hamiltonian_path_design(v - 1)
    shape = BlockShape.cycle(v)
    blocks = tuple(Block(shape, (v - 1,) + b.vertices) for b in paths.blocks)
    return Design(HostSpec.complete(v), shape, blocks)

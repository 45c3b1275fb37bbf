"""
Bipartite path designs
P_k-decompositions of K_{k-1,x} (x = k-2, k) by the row-matrix construction, of the square
K_{k-1,k-1}, and P_4-decompositions of any K_{m,n} with 3 | mn.

Matrix indexing is 1-based (I = 1..x, a_1..a_{k-1}) and converted to ids only when blocks
are emitted: I-value i -> id i-1, a_j -> id x+j-1.
"""
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from models.graph import Block, BlockShape, Design, HostSpec, P4
from services.graph_core import verify_design
from utils.errors import InternalConsistencyError, UsageError
from utils.logger import setup_logger

logger = setup_logger(__name__)

Column = Tuple[str, int]  # ("P" | "Pbar" | "A" | "Abar", index)


@dataclass(frozen=True)
class MatrixPlan:
    k: int
    x: int
    m_columns: Tuple[Column, ...]
    bar_columns: Tuple[Column, ...]

    @property
    def rows(self) -> int:
        return self.x // 2


def _check_even_k(k: int):
    if k < 4 or k % 2:
        raise UsageError(f"k must be even and >= 4, got {k}")


def build_matrix_plan(k: int, x: int) -> MatrixPlan:
    _check_even_k(k)
    if x not in (k - 2, k):
        raise UsageError(f"x must be k-2 or k (k={k}), got {x}")

    m_cols: List[Column] = []
    bar_cols: List[Column] = []
    full_pairs = k // 4 if k % 4 == 0 else (k - 2) // 4
    for i in range(1, full_pairs + 1):
        m_cols += [("P", i), ("A", 2 * i - 1), ("Pbar", i), ("A", 2 * i)]
        bar_cols += [("Pbar", i), ("Abar", 2 * i - 1), ("P", i), ("Abar", 2 * i)]
    if k % 4 == 0:
        # M-bar closes on A_{k/2}, not Abar
        bar_cols[-1] = ("A", k // 2)
    else:
        half_pair = (k + 2) // 4
        m_cols += [("P", half_pair), ("A", k // 2)]
        bar_cols += [("Pbar", half_pair), ("A", k // 2)]

    return MatrixPlan(k, x, tuple(m_cols), tuple(bar_cols))


def _column_values(plan: MatrixPlan, column: Column) -> np.ndarray:
    half = plan.x // 2
    kind, idx = column
    if kind in ("P", "Pbar"):
        # P_i = (i, ..., x/2, 1, ..., i-1)
        values = np.roll(np.arange(1, half + 1), -(idx - 1))
        if kind == "Pbar":
            values = values + half
        return values - 1
    a_index = idx if kind == "A" else idx + plan.k // 2
    return np.full(half, plan.x + a_index - 1)


def _matrix(plan: MatrixPlan, columns: Sequence[Column]) -> np.ndarray:
    return np.column_stack([_column_values(plan, c) for c in columns])


def _assert_alternating(plan: MatrixPlan, rows: np.ndarray):
    i_side = rows[:, 0::2]
    a_side = rows[:, 1::2]
    if (i_side >= plan.x).any() or (a_side < plan.x).any():
        raise InternalConsistencyError(f"matrix rows for k={plan.k}, x={plan.x} do not alternate parts")


def decompose_k_bipartite(k: int, x: int) -> Design:
    """(K_{k-1,x}, P_k)-design with x blocks; I ids 0..x-1, A ids x..x+k-2"""
    plan = build_matrix_plan(k, x)
    rows = np.vstack([_matrix(plan, plan.m_columns), _matrix(plan, plan.bar_columns)])
    _assert_alternating(plan, rows)

    shape = BlockShape.path(k)
    design = Design(HostSpec.bipartite(x, k - 1), shape, tuple(Block(shape, tuple(int(v) for v in row)) for row in rows))
    report = verify_design(design)
    if not report.valid:
        logger.error(f"row-matrix construction fails for k={k}, x={x}: {report.violations[0].render()}")
        raise InternalConsistencyError(f"row-matrix construction fails partition check for k={k}, x={x}")
    return design


def row_provenance(k: int, x: int) -> List[str]:
    plan = build_matrix_plan(k, x)
    return [f"M row {r + 1}" for r in range(plan.rows)] + [f"M-bar row {r + 1}" for r in range(plan.rows)]


def decompose_square_bipartite(k: int) -> Design:
    """(K_{k-1,k-1}, P_k)-design: base path [a_0,b_0,a_1,b_-1,...] developed mod k-1"""
    _check_even_k(k)
    q = k - 1
    shape = BlockShape.path(k)
    blocks = []
    for g in range(q):
        verts = []
        for j in range(k // 2):
            verts.append((j + g) % q)
            verts.append(q + (g - j) % q)
        blocks.append(Block(shape, tuple(verts)))
    design = Design(HostSpec.bipartite(q, q), shape, tuple(blocks))
    if not verify_design(design).valid:
        raise InternalConsistencyError(f"square construction fails for k={k}")
    return design


# ===================
# Slab placement
# ===================

def transpose(design: Design) -> Design:
    """Swap the two parts of a bipartite design"""
    p, q = design.host.params
    mapping = {v: (v + q if v < p else v - p) for v in range(p + q)}
    return Design(HostSpec.bipartite(q, p), design.shape, tuple(b.relabel(mapping) for b in design.blocks))


def place_slab(design: Design, left: Sequence[int], right: Sequence[int]) -> List[Block]:
    """Relabel a K_{p,q} design onto the given left/right vertex lists"""
    p, q = design.host.params
    if len(left) != p or len(right) != q:
        raise UsageError(f"slab K_{p},{q} does not fit parts of sizes {len(left)},{len(right)}")
    mapping = {i: left[i] for i in range(p)}
    mapping.update({p + j: right[j] for j in range(q)})
    return [b.relabel(mapping) for b in design.blocks]


def bipartite_path_design(k: int, a: int, b: int) -> Design:
    """P_k slab on K_{a,b} for {a,b} = {k-1, x}, x in {k-2, k-1, k}"""
    _check_even_k(k)
    if a == k - 1 and b == k - 1:
        return decompose_square_bipartite(k)
    if b == k - 1 and a in (k - 2, k):
        return decompose_k_bipartite(k, a)
    if a == k - 1 and b in (k - 2, k):
        return transpose(decompose_k_bipartite(k, b))
    raise UsageError(f"no P_{k} slab construction for K_{a},{b}")


def _p4_group_sizes(t: int) -> List[int]:
    if t < 2:
        raise UsageError(f"P_4 slabs need parts of size >= 2, got {t}")
    if t % 3 == 0:
        return [3] * (t // 3)
    if t % 3 == 1:
        return [4] + [3] * ((t - 4) // 3)
    return [2] + [3] * ((t - 2) // 3)


def p4_bipartite_design(m: int, n: int) -> Design:
    """(K_{m,n}, P_4)-design for 3 | mn and m, n >= 2, split into K_{3,2}, K_{3,3}, K_{3,4} slabs"""
    if (m * n) % 3 or min(m, n) < 2:
        raise UsageError(f"K_{m},{n} has no P_4-decomposition")
    left, right = list(range(m)), list(range(m, m + n))
    if m % 3:
        triple_side, other_side = right, left
    else:
        triple_side, other_side = left, right

    blocks: List[Block] = []
    start = 0
    for size in _p4_group_sizes(len(other_side)):
        group = other_side[start:start + size]
        start += size
        slab = bipartite_path_design(4, size, 3)
        for t in range(0, len(triple_side), 3):
            blocks.extend(place_slab(slab, group, triple_side[t:t + 3]))
    return Design(HostSpec.bipartite(m, n), P4, tuple(blocks))

"""
Admissibility predicates
Necessary congruence conditions for designs and for the down-link constructions.
"""
from typing import Optional, Tuple

from models.graph import BlockShape


def complete_edges(n: int) -> int:
    return n * (n - 1) // 2


def design_admissible(shape: BlockShape, n: int) -> bool:
    """(K_n, shape) passes divisibility, the order bound and, for cycles, the parity condition"""
    if n == 1:
        return True
    if n < shape.k:
        return False
    if complete_edges(n) % shape.edge_count:
        return False
    if not shape.is_path and n % 2 == 0:
        return False
    return True


def bipartite_admissible(shape: BlockShape, m: int, n: int) -> bool:
    if (m * n) % shape.edge_count:
        return False
    if shape.is_path:
        return min(m, n) >= shape.k // 2 and max(m, n) >= (shape.k + 1) // 2
    return shape.k % 2 == 0 and min(m, n) >= shape.k // 2


def p4_admissible(n: int) -> bool:
    """(K_n, P_4) exists iff n = 1 or n >= 4 with n = 0,1 (mod 3)"""
    return n == 1 or (n >= 4 and n % 3 in (0, 1))


def pk_order_class(n: int, k: int) -> Optional[int]:
    """n mod (k-1) when it is 0 or 1, else None"""
    r = n % (k - 1)
    return r if r in (0, 1) else None


def c4_system_admissible(v: int) -> bool:
    return v > 1 and v % 8 == 1


def p5_design_admissible(v: int) -> bool:
    return v > 1 and v % 8 in (0, 1)


# gluing rows: v mod 24 -> allowed target offsets
C4_TARGETS = {1: (0,), 9: (0, 1), 17: (1,)}
P5_TARGETS = {0: (0, 1), 1: (-1, 0), 8: (-1,), 9: (0, 1), 16: (-1, 0), 17: (-1,)}


def c4_boundary_allowed(v: int, target: int) -> bool:
    return c4_system_admissible(v) and (target - v) in C4_TARGETS.get(v % 24, ())


def p5_boundary_allowed(v: int, target: int) -> bool:
    return p5_design_admissible(v) and (target - v) in P5_TARGETS.get(v % 24, ())


def reserved_branch_orders(base: int) -> Tuple[int, ...]:
    """Codomain orders reachable after reserving t vertices, keyed on base = v - t"""
    r = base % 3
    if r == 0:
        return (base, base + 1)
    if r == 1:
        return (base,)
    return (base + 1, base + 2)


def closed_form_spectrum(shape: BlockShape, v: int, n_max: int) -> Optional[list]:
    """Closed-form L_1 sets for C_4 and P_5; None for other shapes"""
    if shape == BlockShape.cycle(4):
        low = v
    elif shape == BlockShape.path(5):
        low = v - 1
    else:
        return None
    return [n for n in range(low, n_max + 1) if p4_admissible(n)]


def admissibility_rule(shape: BlockShape) -> str:
    if shape == BlockShape.cycle(4):
        return "v = 1 (mod 8)"
    if shape == BlockShape.path(5):
        return "v = 0,1 (mod 8)"
    if shape.is_path:
        return f"v(v-1) = 0 (mod {2 * (shape.k - 1)}) and v >= {shape.k}"
    return f"v odd, v(v-1) = 0 (mod {2 * shape.k}) and v >= {shape.k}"

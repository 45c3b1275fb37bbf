import numpy as np
import pytest

from models.graph import BlockShape, HostSpec, P4
from services.bipartite_paths import (
    bipartite_path_design,
    build_matrix_plan,
    decompose_k_bipartite,
    decompose_square_bipartite,
    p4_bipartite_design,
    place_slab,
    row_provenance,
    transpose,
)
from services.graph_core import verify_design
from services.oracle_solver import find_decomposition
from utils.errors import UsageError

EVEN_K = [4, 6, 8, 10, 12, 14, 16]


@pytest.mark.parametrize("k", EVEN_K)
@pytest.mark.parametrize("offset", [-2, 0])
def test_row_matrix_design(k, offset):
    x = k + offset
    d = decompose_k_bipartite(k, x)
    assert d.host == HostSpec.bipartite(x, k - 1)
    assert len(d) == x
    assert verify_design(d).valid

    rows = np.array([b.vertices for b in d.blocks])
    assert rows.shape == (x, k)
    # paths start in the x-side and alternate
    assert (rows[:, 0::2] < x).all()
    assert (rows[:, 1::2] >= x).all()


def test_matrix_plan_columns():
    plan = build_matrix_plan(8, 6)
    assert plan.rows == 3
    assert len(plan.m_columns) == len(plan.bar_columns) == 8
    assert plan.bar_columns[-1] == ("A", 4)

    plan = build_matrix_plan(6, 6)
    assert plan.m_columns[-2:] == (("P", 2), ("A", 3))


def test_row_provenance():
    assert row_provenance(6, 4) == ["M row 1", "M row 2", "M-bar row 1", "M-bar row 2"]


@pytest.mark.parametrize("k, x", [(5, 4), (6, 5), (2, 2), (6, 8)])
def test_bad_parameters(k, x):
    with pytest.raises(UsageError):
        decompose_k_bipartite(k, x)


@pytest.mark.parametrize("k", [4, 6, 8, 10, 12])
def test_square_slab(k):
    d = decompose_square_bipartite(k)
    assert len(d) == k - 1
    assert verify_design(d).valid


def test_square_slab_matches_oracle():
    assert find_decomposition(HostSpec.bipartite(5, 5).graph, BlockShape.path(6)).found
    assert verify_design(decompose_square_bipartite(6)).valid


def test_transpose_and_placement():
    d = transpose(decompose_k_bipartite(6, 4))
    assert d.host == HostSpec.bipartite(5, 4)
    assert verify_design(d).valid

    blocks = place_slab(decompose_k_bipartite(4, 2), [10, 11], [20, 21, 22])
    assert {v for b in blocks for v in b.vertices} == {10, 11, 20, 21, 22}
    with pytest.raises(UsageError):
        place_slab(d, [0, 1], [2, 3])


@pytest.mark.parametrize("a, b", [(6, 5), (5, 6), (4, 5), (5, 4), (5, 5)])
def test_bipartite_path_design_dispatch(a, b):
    d = bipartite_path_design(6, a, b)
    assert d.host == HostSpec.bipartite(a, b)
    assert verify_design(d).valid


@pytest.mark.parametrize("m, n", [(3, 2), (2, 3), (3, 4), (5, 6), (4, 9), (7, 3), (6, 7), (9, 9)])
def test_p4_bipartite(m, n):
    d = p4_bipartite_design(m, n)
    assert d.shape == P4
    assert len(d) == m * n // 3
    assert verify_design(d).valid


@pytest.mark.parametrize("m, n", [(2, 2), (4, 5), (3, 1)])
def test_p4_bipartite_inadmissible(m, n):
    with pytest.raises(UsageError):
        p4_bipartite_design(m, n)

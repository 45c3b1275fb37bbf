import pytest

from models.graph import Block, BlockShape, DifferenceFamily, C4, P4, P5
from models.schemas import FindingKind
from services.cyclic_designs import (
    c4_difference_family,
    cyclic_path_family,
    develop,
    differences,
    hamiltonian_path_design,
    path_design,
    rotational_path_base,
    verify_difference_family,
    walecki_cycle_design,
    zigzag_path,
)
from services.graph_core import verify_design
from utils.errors import PreconditionError, UsageError

C4_ORDERS = [9, 17, 25, 33, 41, 49, 57]


@pytest.mark.parametrize("v", C4_ORDERS)
def test_c4_family_and_development(v):
    df = c4_difference_family(v)
    assert len(df.base_blocks) == (v - 1) // 8
    assert verify_difference_family(df).valid
    design = develop(df)
    assert len(design) == v * (v - 1) // 8
    assert verify_design(design).valid


def test_c4_family_base_block():
    df = c4_difference_family(17)
    assert [b.vertices for b in df.base_blocks] == [(0, 1, 9, 3), (0, 2, 9, 4)]


@pytest.mark.parametrize("v", [10, 8, 1, 15])
def test_c4_family_rejects_orders(v):
    with pytest.raises(UsageError):
        c4_difference_family(v)


def test_differences():
    assert sorted(differences(Block(C4, (0, 1, 5, 2)), 9)) == [1, 2, 3, 4, 5, 6, 7, 8]


def test_difference_findings():
    repeated = DifferenceFamily(9, C4, (Block(C4, (0, 1, 2, 3)), Block(C4, (0, 1, 3, 4))))
    assert FindingKind.REPEATED_DIFFERENCE in verify_difference_family(repeated).kinds()
    short = DifferenceFamily(9, C4, (Block(C4, (0, 1, 2, 3)),))
    assert FindingKind.MISSING_DIFFERENCE in verify_difference_family(short).kinds()

    wrong_shape = DifferenceFamily(7, P4, (Block(P5, (0, 3, 1, 2, 6)),))
    assert FindingKind.BAD_BLOCK_SHAPE in verify_difference_family(wrong_shape).kinds()


def test_develop_rejects_invalid_family():
    bad = DifferenceFamily(9, C4, (Block(C4, (0, 1, 2, 3)),))
    with pytest.raises(PreconditionError):
        develop(bad)


def test_zigzag():
    assert zigzag_path(5, 1) == [0, 4, 1, 3, 2]
    assert zigzag_path(5, 4) == [0, 7, 1, 6, 2]
    assert zigzag_path(4, 1) == [0, 3, 1, 2]


@pytest.mark.parametrize("v, k", [(7, 4), (13, 4), (9, 5), (17, 5), (11, 6), (25, 13)])
def test_cyclic_path_designs(v, k):
    df = cyclic_path_family(v, k)
    assert verify_difference_family(df).valid
    assert verify_design(develop(df)).valid


@pytest.mark.parametrize("v, k", [(6, 4), (12, 4), (8, 5), (16, 5), (24, 5), (10, 6), (24, 13)])
def test_rotational_path_designs(v, k):
    d = path_design(v, k)
    assert len(d) == v * (v - 1) // (2 * (k - 1))
    assert verify_design(d).valid
    assert rotational_path_base(v, k)[0].vertices[0] == v - 1


def test_path_design_rejects_other_orders():
    with pytest.raises(UsageError):
        path_design(9, 4)


@pytest.mark.parametrize("v", [2, 4, 6, 10, 16])
def test_hamiltonian_paths(v):
    d = hamiltonian_path_design(v)
    assert len(d) == v // 2
    assert d.shape == BlockShape.path(v)
    assert verify_design(d).valid


@pytest.mark.parametrize("v", [3, 5, 9, 13, 21])
def test_walecki(v):
    d = walecki_cycle_design(v)
    assert len(d) == (v - 1) // 2
    assert verify_design(d).valid


def test_walecki_needs_odd_order():
    with pytest.raises(UsageError):
        walecki_cycle_design(8)

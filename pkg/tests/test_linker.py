import pytest

from models.graph import Block, BlockShape, HostSpec, PartialDesign, C4, P4, P5
from models.schemas import FindingKind
from services.cyclic_designs import walecki_cycle_design
from services.design_catalog import base_design
from services.graph_core import verify_design
from services.linker import (
    SpectrumWitness,
    build_embed_plan,
    cycle_split_blocks,
    downlink_c4,
    downlink_cycle_system,
    downlink_generic,
    downlink_pk_design,
    embed_partial_p4,
    embed_pk,
    embed_pk_traced,
    extend_witness,
    pk_complete_design,
    verify_spectrum_membership,
    wheel_blocks,
)
from utils.admissibility import c4_boundary_allowed
from utils.errors import UsageError

C4_PAIRS = [(v, n) for v in range(9, 58, 8) for n in (v, v + 1) if c4_boundary_allowed(v, n)]


@pytest.fixture(scope="module")
def w10():
    return downlink_c4(9, 10)


def edge_count(blocks):
    edges = [e for b in blocks for e in b.edges]
    assert len(edges) == len(set(edges))
    return len(edges)


# ===================
# C_4 boundary
# ===================

def test_c4_pairs_cover_every_residue():
    assert C4_PAIRS == [(9, 9), (9, 10), (17, 18), (25, 25), (33, 33), (33, 34), (41, 42),
                        (49, 49), (57, 57), (57, 58)]


@pytest.mark.parametrize("v, n", C4_PAIRS)
def test_c4_downlink(v, n):
    w = downlink_c4(v, n)
    assert verify_spectrum_membership(w).valid
    assert len(w.domain) == v * (v - 1) // 8
    assert len(w.codomain) == n * (n - 1) // 6
    assert w.downlink.mapping == tuple((i, i) for i in range(len(w.domain)))


@pytest.mark.parametrize("v, n", [(9, 11), (17, 17), (25, 26), (10, 10)])
def test_c4_downlink_rejects_targets(v, n):
    with pytest.raises(UsageError):
        downlink_c4(v, n)


def test_cycle_split_and_wheel():
    rim = list(range(9))
    assert edge_count(cycle_split_blocks(rim)) == 9
    assert edge_count(wheel_blocks(rim, 9)) == 18
    assert {9} <= {v for b in wheel_blocks(rim, 9) for v in b.vertices}


# ===================
# Generic down-link and partial embedding
# ===================

def test_embed_partial_p4():
    partial = PartialDesign(4, P4, (Block(P4, (0, 1, 2, 3)),))
    d = embed_partial_p4(partial, 6)
    assert verify_design(d).valid
    assert d.blocks[0] == Block(P4, (0, 1, 2, 3))
    assert len(d) == 5

    with pytest.raises(UsageError):
        embed_partial_p4(partial, 5)
    with pytest.raises(UsageError):
        embed_partial_p4(partial, 8)


@pytest.mark.parametrize("shape, v, n", [(P5, 9, 12), (C4, 9, 12), (P5, 8, 10), (BlockShape.path(6), 6, 9)])
def test_generic_downlink(shape, v, n):
    w = downlink_generic(base_design(shape, HostSpec.complete(v)), n)
    assert w.construction == "generic"
    assert w.n == n
    assert verify_spectrum_membership(w).valid


def test_generic_downlink_rejections():
    d = base_design(P5, HostSpec.complete(9))
    with pytest.raises(UsageError):
        downlink_generic(d, 10)
    with pytest.raises(UsageError):
        downlink_generic(d, 14)
    with pytest.raises(UsageError):
        downlink_generic(walecki_cycle_design(3), 6)


def test_spectrum_findings(w10):
    liar = SpectrumWitness(C4, 9, 12, w10.downlink, "c4-difference-family")
    assert FindingKind.ORDER_MISMATCH in verify_spectrum_membership(liar).kinds()
    wrong_shape = SpectrumWitness(P5, 9, 10, w10.downlink, "c4-difference-family")
    assert FindingKind.BAD_BLOCK_SHAPE in verify_spectrum_membership(wrong_shape).kinds()


# ===================
# Closure
# ===================

def test_closure_from_the_boundary(w10):
    w12 = extend_witness(w10, 12)
    assert w12.n == 12
    assert w12.construction == "c4-difference-family+closure"
    assert w12.downlink.mapping == w10.downlink.mapping
    assert "closure from n=10" in w12.trace

    for source, m in ((w10, 13), (w12, 15), (w12, 16)):
        w = extend_witness(source, m)
        assert verify_spectrum_membership(w).valid
        assert w.codomain.block_keys() >= source.codomain.block_keys()

    with pytest.raises(UsageError):
        extend_witness(w10, 11)
    with pytest.raises(UsageError):
        extend_witness(w12, 13)


# ===================
# P_k embedding
# ===================

@pytest.mark.parametrize("k, n, m, bullet", [
    (4, 9, 13, 2), (4, 4, 6, 4), (4, 6, 9, 1), (4, 7, 10, 3), (4, 9, 12, 1),
    (6, 10, 20, 1), (6, 10, 16, 2), (6, 6, 16, 3), (6, 6, 15, 4), (6, 11, 21, 3),
])
def test_embed_pk(k, n, m, bullet):
    d = base_design(BlockShape.path(k), HostSpec.complete(n))
    out, trace = embed_pk_traced(d, m)
    assert trace[0].startswith(f"bullet {bullet}:")
    assert out.host == HostSpec.complete(m)
    assert verify_design(out).valid
    assert d.block_keys() <= out.block_keys()


def test_embed_pk_degenerate_complete_part():
    # s = 5 < k leaves no room for a complete K_k on the new vertices
    d = base_design(BlockShape.path(6), HostSpec.complete(10))
    out, trace = embed_pk_traced(d, 15)
    assert trace[0].startswith("bullet 1:")
    assert trace[1].startswith("K_5 merged with slab K_5,5")
    assert len(out) == 21
    assert verify_design(out).valid
    assert d.block_keys() <= out.block_keys()


def test_embed_plan_groups():
    plan = build_embed_plan(6, 6, 15)
    assert plan.bullet == 4
    assert plan.complete_part[-1] == 5
    assert [len(g) for g in plan.old_groups] == [5]
    assert [len(g) for g in plan.new_groups] == [4, 5]

    with pytest.raises(UsageError):
        build_embed_plan(6, 10, 13)


def test_embed_pk_rejections():
    with pytest.raises(UsageError):
        embed_pk(base_design(P5, HostSpec.complete(9)), 17)
    d6 = base_design(BlockShape.path(6), HostSpec.complete(6))
    with pytest.raises(UsageError):
        embed_pk(d6, 7)
    with pytest.raises(UsageError):
        embed_pk(d6, 13)


def test_pk_complete_design_falls_back_to_embedding():
    d = pk_complete_design(16, 6)
    assert len(d) == 24
    assert verify_design(d).valid


# ===================
# Reserved vertices
# ===================

@pytest.mark.parametrize("label, v, t, orders", [
    ("C9", 9, 0, (9, 10)),
    ("C13", 13, 1, (12, 13)),
    ("P13", 24, 0, (24, 25)),
])
def test_reserved_downlinks(label, v, t, orders):
    shape = BlockShape.parse(label)
    d = base_design(shape, HostSpec.complete(v))
    link = downlink_pk_design if shape.is_path else downlink_cycle_system
    reserved = set(range(v - t - 2, v))

    for n in orders:
        w = link(d, n)
        assert verify_spectrum_membership(w).valid
        assert w.n == n
        extracted = w.codomain.blocks[:len(d)]
        assert not any(reserved & set(b.vertices) for b in extracted)
    assert link(d).n == orders[0]

    with pytest.raises(UsageError):
        link(d, orders[-1] + 1)


def test_reserved_downlinks_need_long_blocks():
    with pytest.raises(UsageError):
        downlink_cycle_system(base_design(C4, HostSpec.complete(9)))
    with pytest.raises(UsageError):
        downlink_pk_design(base_design(P5, HostSpec.complete(9)))

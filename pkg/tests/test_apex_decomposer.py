import pytest
from hypothesis import given, settings, strategies as st

from services.apex_decomposer import (
    CASE_TABLE,
    COVERAGE_LABELS,
    ApexInput,
    StarComponent,
    classify_remnant,
    decompose_star_gadget,
    extract_maximal_p4,
    p4_decompose_with_apexes,
    p4_free_core,
    random_two_apex_graph,
    seeded_two_apex_corpus,
    structured_two_apex_graphs,
    two_apex_join,
)
from services.graph_core import complete_graph, verify_design
from services.oracle_solver import decomposition_oracle
from utils.errors import InternalConsistencyError, UsageError


def assert_partition(g, result):
    assert verify_design(result.design).valid
    assert len(result.leftover) == g.size % 3
    covered = {e for b in result.blocks for e in b.edges} | set(result.leftover)
    assert covered == set(g.edges)


@pytest.mark.parametrize("residues, label", sorted(CASE_TABLE.items()))
def test_every_case(residues, label):
    r_iso, r_odd, r_even = residues
    # a lone isolated vertex with two apexes is K_3
    isolated = 4 if residues == (1, 0, 0) else r_iso
    g, alpha, beta = two_apex_join(*p4_free_core(isolated, r_odd, r_even))
    result = p4_decompose_with_apexes(g, alpha, beta)
    assert_partition(g, result)
    assert result.leftover == []
    assert label in result.case_trace


def test_k4_trace():
    result = p4_decompose_with_apexes(complete_graph(4), 2, 3)
    assert result.case_trace[:2] == ["iii_22", "a_1"]
    assert len(result.blocks) == 2


def test_single_p3_withholds_star_radii():
    g, alpha, beta = two_apex_join(*p4_free_core(0, 1, 0))
    result = p4_decompose_with_apexes(g, alpha, beta)
    assert result.case_trace[:3] == ["iii_12", "a_3", "repair-star-radii"]
    assert_partition(g, result)


@pytest.mark.parametrize("core, order, repair", [
    ([], 4, "repair-isolated-triple"),
    ([(1, 2), (2, 3), (1, 3)], 4, "repair-triangle"),
    (p4_free_core(1, 3, 0)[0], 10, "repair-lone-star-radii"),
    (p4_free_core(1, 0, 3)[0], 7, "repair-edge-triples"),
])
def test_isolated_remainder_repairs(core, order, repair):
    g, alpha, beta = two_apex_join(core, order)
    result = p4_decompose_with_apexes(g, alpha, beta)
    assert "a_4" in result.case_trace
    assert repair in result.case_trace
    assert_partition(g, result)


def test_leftover_edges():
    k5 = complete_graph(5)
    result = p4_decompose_with_apexes(k5, 3, 4)
    assert "t1-leftover" in result.case_trace
    assert len(result.leftover) == 1
    assert_partition(k5, result)

    g, alpha, beta = two_apex_join([], 2)
    result = p4_decompose_with_apexes(g, alpha, beta)
    assert "t2-leftover" in result.case_trace
    assert_partition(g, result)

    g, alpha, beta = two_apex_join([], 3)
    result = p4_decompose_with_apexes(g, alpha, beta)
    assert result.case_trace[:2] == ["i_1", "t1-leftover"]
    assert_partition(g, result)


def test_k3_is_rejected():
    with pytest.raises(UsageError):
        p4_decompose_with_apexes(complete_graph(3), 1, 2)


def test_apex_input_validation():
    g, alpha, beta = two_apex_join([(0, 1)], 3)
    with pytest.raises(UsageError):
        ApexInput(g, alpha, alpha)
    with pytest.raises(UsageError):
        ApexInput(g, 0, beta)
    with pytest.raises(UsageError):
        ApexInput(g, alpha, 99)


def test_extraction_leaves_p4_free_residual():
    g = complete_graph(7)
    blocks, residual = extract_maximal_p4(g)
    used = [e for b in blocks for e in b.edges]
    assert len(used) == len(set(used))
    assert set(used) | set(residual.edges) == set(g.edges)
    classify_remnant(residual)


def test_star_gadget():
    blocks, remnant = decompose_star_gadget(StarComponent(0, (1, 2, 3)), 10, 11)
    assert len(blocks) == 2
    assert remnant.size == 5

    blocks, remnant = decompose_star_gadget(StarComponent(0, (1, 2)), 10, 11)
    assert remnant.edges == frozenset({(0, 10), (0, 11)})

    with pytest.raises(UsageError):
        decompose_star_gadget(StarComponent(0, ()), 10, 11)


def test_random_two_apex_graph():
    g = random_two_apex_graph(9, 0.4, seed=5)
    assert g.degree(7) == g.degree(8) == 8
    with pytest.raises(UsageError):
        random_two_apex_graph(3, 0.5, seed=1)


@settings(max_examples=150, deadline=None)
@given(order=st.integers(min_value=4, max_value=16),
       p=st.floats(min_value=0.0, max_value=1.0),
       seed=st.integers(min_value=0, max_value=10_000))
def test_random_two_apex_partitions(order, p, seed):
    g = random_two_apex_graph(order, p, seed)
    assert_partition(g, p4_decompose_with_apexes(g, order - 2, order - 1))


def test_structured_graphs_hit_every_label():
    seen = set()
    for g, alpha, beta in structured_two_apex_graphs():
        result = p4_decompose_with_apexes(g, alpha, beta)
        assert_partition(g, result)
        seen.update(result.case_trace)
    assert len(COVERAGE_LABELS) == 23
    assert sorted(set(COVERAGE_LABELS) - seen) == []


def test_seeded_corpus_covers_every_label():
    corpus = list(seeded_two_apex_corpus(40, 12, seed=2024))
    assert len(corpus) == 40
    again = list(seeded_two_apex_corpus(40, 12, seed=2024))
    assert [g.edges for g, _, _ in corpus] == [g.edges for g, _, _ in again]

    seen = set()
    for g, alpha, beta in corpus:
        result = p4_decompose_with_apexes(g, alpha, beta)
        assert_partition(g, result)
        seen.update(result.case_trace)
    assert sorted(set(COVERAGE_LABELS) - seen) == []


def test_case_gadgets_must_be_certified(monkeypatch):
    monkeypatch.setattr(decomposition_oracle, "solve", lambda *args, **kwargs: None)
    with pytest.raises(InternalConsistencyError):
        p4_decompose_with_apexes(complete_graph(4), 2, 3)

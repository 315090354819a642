"""Tests for binary projection and the information it loses."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from src.data_layer.store import HypergraphStore
from src.engine.projection import (
    ambiguity_bound, component_bits, count_preimages, expressiveness_gap, project_as_store, project_binary,
)
from src.models.causal import CausalLink
from src.models.errors import TooLarge
from src.models.hypergraph import Vertex
from src.models.results import BinaryGraph, Pillar

from .conftest import StepClock, edge


def graph(nodes, pairs):
    return BinaryGraph(nodes=list(nodes), edges=list(pairs))


def test_octet_projects_to_a_clique(build):
    snap = build("projection_octet").snapshot()
    projected = project_binary(snap)
    assert len(projected.nodes) == 8
    assert len(projected.edges) == 28
    assert ("E1", "E8") in projected.edges


def test_octet_loss_report(build):
    report = ambiguity_bound(build("projection_octet").snapshot())
    assert report.per_edge_bits == [28]
    assert report.total_bits == 28
    assert report.theorem_bound == pytest.approx(28.0)
    assert report.edge_identity_bits == pytest.approx(math.log2(28))
    bits = report.component_bits
    assert (bits.structural, bits.temporal, bits.confidence, bits.causal) == (28.0, 2.0, 53.0, 0.0)


def test_gap_sums_the_missing_pillars(build):
    snap = build("projection_octet").snapshot()
    gap = expressiveness_gap(snap, [Pillar.TIME, Pillar.STRUCTURE])
    assert gap.missing == [Pillar.STRUCTURE, Pillar.TIME]
    assert gap.total_bits == pytest.approx(30.0)
    assert expressiveness_gap(snap, ["P3"]).total_bits == pytest.approx(53.0)
    assert expressiveness_gap(snap, []).total_bits == 0.0


def test_causal_bits_count_links(build):
    snap = build("travel_disruption").snapshot()
    bits = component_bits(snap)
    # Three edges need two bits per endpoint id plus one for the link kind.
    assert bits.causal == 2 * (2 * 2 + 1)
    assert bits.confidence == 3 * 53


def test_empty_store_loses_nothing():
    snap = HypergraphStore(clock=StepClock()).snapshot()
    assert ambiguity_bound(snap).total_bits == 0
    assert component_bits(snap).structural == 0.0


def test_theorem_bound_is_tight_for_uniform_arity(store):
    store.add_hyperedge(edge("e1", ["A", "B", "C"]))
    store.add_hyperedge(edge("e2", ["D", "E", "F"]))
    report = ambiguity_bound(store.snapshot())
    assert report.total_bits == 6
    assert report.theorem_bound == pytest.approx(6.0)


def test_mixed_arity_exceeds_the_uniform_bound(store):
    store.add_hyperedge(edge("pair", ["A", "B"]))
    store.add_hyperedge(edge("quad", ["C", "D", "E", "F"]))
    report = ambiguity_bound(store.snapshot())
    assert report.total_bits == 1 + 6
    assert report.theorem_bound == pytest.approx(2 * 3 * 2 / 2)
    assert report.total_bits >= report.theorem_bound


@pytest.mark.parametrize("nodes,pairs,expected", [
    ("ABC", [("A", "B"), ("B", "C"), ("A", "C")], 9),
    ("AB", [("A", "B")], 1),
    ("ABC", [("A", "B"), ("B", "C")], 1),
    ("ABC", [], 1),
])
def test_count_preimages(nodes, pairs, expected):
    assert count_preimages(graph(nodes, pairs)) == expected


def test_count_preimages_refuses_large_graphs(build):
    with pytest.raises(TooLarge):
        count_preimages(project_binary(build("projection_octet").snapshot()))
    with pytest.raises(TooLarge):
        count_preimages(graph("ABC", []), max_nodes=2)


def test_triangle_hypergraph_and_its_pairs_are_indistinguishable(store):
    store.add_hyperedge(edge("tri", ["A", "B", "C"]))
    other = HypergraphStore(clock=StepClock())
    for name in "ABC":
        other.add_vertex(Vertex(id=name))
    for a, b in (("A", "B"), ("B", "C"), ("A", "C")):
        other.add_hyperedge(edge(f"{a}{b}", [a, b]))
    left = project_binary(store.snapshot())
    right = project_binary(other.snapshot())
    assert left.edges == right.edges


def test_project_as_store(build):
    projected = project_as_store(project_binary(build("projection_octet").snapshot()))
    snap = projected.snapshot()
    assert len(list(snap.edges())) == 28
    assert snap.has_edge("E1--E2")
    assert all(e.arity == 2 for e in snap.edges())


def test_projection_drops_links(store):
    store.add_hyperedge(edge("e1", ["A", "B"]))
    store.add_hyperedge(edge("e2", ["B", "C"]))
    store.add_link(CausalLink(cause="e1", effect="e2"))
    assert component_bits(store.snapshot()).causal > 0
    assert component_bits(project_as_store(project_binary(store.snapshot())).snapshot()).causal == 0


participants = st.lists(st.sampled_from("ABCD"), min_size=2, max_size=4, unique=True)


@settings(max_examples=30, deadline=None)
@given(st.lists(participants, min_size=1, max_size=5))
def test_every_projection_has_a_preimage(drafts):
    store = HypergraphStore(clock=StepClock())
    for name in "ABCD":
        store.add_vertex(Vertex(id=name))
    for i, refs in enumerate(drafts):
        store.add_hyperedge(edge(f"e{i}", refs))
    snap = store.snapshot()
    assert count_preimages(project_binary(snap)) >= 1
    assert ambiguity_bound(snap).total_bits >= len(project_binary(snap).edges)


def _random_store(drafts, vertices="ABCDE"):
    store = HypergraphStore(clock=StepClock())
    for name in vertices:
        store.add_vertex(Vertex(id=name))
    for i, refs in enumerate(drafts):
        store.add_hyperedge(edge(f"e{i}", refs))
    return store.snapshot()


any_arity = st.lists(st.sampled_from("ABCDE"), min_size=1, max_size=5, unique=True)


@settings(max_examples=100, deadline=None)
@given(st.lists(any_arity, min_size=1, max_size=8))
def test_ambiguity_dominates_the_uniform_arity_bound(drafts):
    report = ambiguity_bound(_random_store(drafts))
    assert report.total_bits >= report.theorem_bound - 1e-9
    if len({len(refs) for refs in drafts}) == 1:
        assert report.total_bits == pytest.approx(report.theorem_bound)
    else:
        assert report.total_bits > report.theorem_bound + 1e-9


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.sampled_from("ABCDE"), min_size=2, max_size=4, unique=True), min_size=1, max_size=4))
def test_wide_edges_make_the_projection_ambiguous(drafts):
    preimages = count_preimages(project_binary(_random_store(drafts)))
    if any(len(refs) >= 3 for refs in drafts):
        assert preimages >= 2
    else:
        assert preimages >= 1


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.sampled_from("ABCDEF"), min_size=2, max_size=2, unique=True), max_size=10))
def test_binary_stores_survive_a_projection_round_trip(pairs):
    graph = project_binary(_random_store(pairs, vertices="ABCDEF"))
    again = project_binary(project_as_store(graph).snapshot())
    assert again == graph

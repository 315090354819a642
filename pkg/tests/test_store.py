"""Tests for the append-only store, its snapshots and persistence."""

import threading

import pytest
from hypothesis import given, settings, strategies as st

from src.data_layer.store import HypergraphStore
from src.models.causal import CausalLink, ConfidenceAssessment, LinkKind
from src.models.errors import (
    CausalCycle, DuplicateId, EmptyParticipants, EndBeforeStart, SeqOutOfRange, UnknownEdge, UnresolvedRef,
    ValidationFailed,
)
from src.models.hypergraph import ClaimTag, Polarity, Vertex
from src.models.temporal import FOREVER

from .conftest import StepClock, edge, ts


def test_append_assigns_increasing_seq(store):
    assert store.last_seq == 6
    assert store.add_hyperedge(edge("e1", ["A", "B"])) == 7
    assert store.add_hyperedge(edge("e2", ["e1", "C"])) == 8
    assert len(store) == 8


def test_store_assigns_tx_time(store):
    store.add_hyperedge(edge("e1", ["A"]).model_copy(update={"tx_time": edge("x", ["A"]).valid_time}))
    raw = store.snapshot().raw_edge("e1")
    assert raw.tx_time.start == ts("2024-01-01T00:00:06Z")
    assert raw.tx_time.end == FOREVER


def test_tx_time_never_goes_backwards(store):
    store.add_hyperedge(edge("e1", ["A"]), tx_time=ts("2030-01-01"))
    store.add_hyperedge(edge("e2", ["A"]), tx_time=ts("2020-01-01"))
    assert store.records[-1].tx_time == ts("2030-01-01")


def test_vertex_and_edge_ids_share_one_namespace(store):
    with pytest.raises(DuplicateId):
        store.add_hyperedge(edge("A", ["B"]))
    store.add_hyperedge(edge("e1", ["A"]))
    with pytest.raises(DuplicateId):
        store.add_vertex(Vertex(id="e1"))


def test_rejected_append_leaves_log_untouched(store):
    before = store.log_lines()
    with pytest.raises(UnresolvedRef):
        store.add_hyperedge(edge("e1", ["A", "Ghost"]))
    with pytest.raises(EmptyParticipants):
        store.add_hyperedge(edge("e2", []))
    assert store.log_lines() == before


def test_termination_narrows_validity(store):
    store.add_hyperedge(edge("e1", ["A"], start="2024-01-01"))
    store.terminate("e1", ts("2024-06-01"))
    store.terminate("e1", ts("2024-09-01"))
    snap = store.snapshot()
    assert snap.edge("e1").valid_time.end == ts("2024-06-01")
    assert snap.raw_edge("e1").valid_time.end == FOREVER
    assert snap.is_terminated("e1")
    assert snap.valid_at(ts("2024-05-31")) == {"e1"}
    assert snap.valid_at(ts("2024-06-02")) == set()


def test_termination_errors(store):
    store.add_hyperedge(edge("e1", ["A"], start="2024-01-01"))
    with pytest.raises(EndBeforeStart):
        store.terminate("e1", ts("2023-12-31"))
    with pytest.raises(UnknownEdge):
        store.terminate("nope", ts("2024-06-01"))


def test_causal_links_stay_acyclic(store):
    for name in ("e1", "e2", "e3"):
        store.add_hyperedge(edge(name, ["A"]))
    store.add_link(CausalLink(cause="e1", effect="e2"))
    store.add_link(CausalLink(cause="e2", effect="e3"))
    with pytest.raises(CausalCycle):
        store.add_link(CausalLink(cause="e3", effect="e1"))
    with pytest.raises(CausalCycle):
        store.add_link(CausalLink(cause="e1", effect="e1"))
    # An inhibits arc counts towards the cycle check too.
    with pytest.raises(CausalCycle):
        store.add_link(CausalLink(cause="e3", effect="e1", kind=LinkKind.INHIBITS))
    with pytest.raises(DuplicateId):
        store.add_link(CausalLink(cause="e1", effect="e2"))
    with pytest.raises(UnknownEdge):
        store.add_link(CausalLink(cause="e1", effect="ghost"))


def test_snapshot_is_a_prefix_view(store):
    store.add_hyperedge(edge("e1", ["A"]))
    seq = store.last_seq
    store.add_hyperedge(edge("e2", ["A"]))
    old = store.snapshot(seq)
    assert old.has_edge("e1") and not old.has_edge("e2")
    assert store.snapshot().has_edge("e2")
    with pytest.raises(SeqOutOfRange):
        store.snapshot(store.last_seq + 1)
    with pytest.raises(UnknownEdge):
        old.edge("e2")


def test_snapshots_are_cached_and_equal_by_content(store):
    store.add_hyperedge(edge("e1", ["A"]))
    assert store.snapshot() is store.snapshot()
    other = HypergraphStore.replay(store.log_lines())
    assert other.snapshot() == store.snapshot()


def test_snapshot_at_tx(build):
    store = build("malpractice")
    before = store.snapshot_at_tx(ts("2024-08-10"))
    assert before.has_edge("malpractice_reaction")
    assert not before.has_edge("malpractice_finding")
    assert store.snapshot_at_tx(ts("2020-01-01")).as_of_seq == 0


def test_latest_assessment_wins(store):
    store.add_hyperedge(edge("e1", ["A"], confidence=0.9))
    store.add_assessment(ConfidenceAssessment(target="e1", source="audit", value=0.4))
    store.add_assessment(ConfidenceAssessment(target="e1", source="review", value=0.6))
    snap = store.snapshot()
    assert snap.edge("e1").confidence == 0.6
    assert snap.raw_edge("e1").confidence == 0.9
    assert [a.source for a in snap.assessments("e1")] == ["audit", "review"]


def test_noisy_or_assessment_policy():
    store = HypergraphStore(confidence_policy="noisy_or", clock=StepClock())
    store.add_vertex(Vertex(id="A"))
    store.add_hyperedge(edge("e1", ["A"], confidence=0.9))
    store.add_assessment(ConfidenceAssessment(target="e1", source="a", value=0.5))
    store.add_assessment(ConfidenceAssessment(target="e1", source="b", value=0.5))
    assert store.snapshot().effective_confidence("e1") == pytest.approx(0.75)


def test_assessment_of_unknown_edge(store):
    with pytest.raises(UnknownEdge):
        store.add_assessment(ConfidenceAssessment(target="ghost", source="a", value=0.5))


def test_secondary_indexes(store):
    store.add_hyperedge(edge("e1", ["A", "B"], claim=ClaimTag(proposition="p", polarity=Polarity.SUPPORTS)))
    store.add_hyperedge(edge("e2", ["e1", "C"], claim=ClaimTag(proposition="p", polarity=Polarity.REFUTES)))
    snap = store.snapshot()
    assert snap.edges_involving("A") == {"e1"}
    assert snap.edges_involving("e1") == {"e2"}
    assert snap.claim_members("p", Polarity.REFUTES) == ["e2"]


def test_stats(build):
    stats = build("travel_disruption").stats()
    assert stats.vertices == 9
    assert stats.edges == 3
    assert stats.links == {"causes": 2, "inhibits": 0}
    assert stats.avg_arity == pytest.approx(10 / 3)


def test_save_and_open_round_trip(tmp_path, build):
    path = tmp_path / "store.log"
    original = build("it_incident")
    original.save(path)

    with HypergraphStore.open(path, writable=True) as reopened:
        assert reopened.log_lines() == original.log_lines()
        reopened.add_vertex(Vertex(id="Extra"))
        assert reopened.save() == 1

    with HypergraphStore.open(path) as again:
        assert len(again) == len(original) + 1
        assert again.snapshot().has_vertex("Extra")


def test_open_missing_file_is_empty(tmp_path):
    with HypergraphStore.open(tmp_path / "absent.log") as store:
        assert len(store) == 0
        assert store.snapshot().as_of_seq == 0


refs = st.sampled_from(["A", "B", "C", "D"])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.lists(refs, min_size=1, max_size=3, unique=True),
                          st.floats(min_value=0.0, max_value=1.0)), max_size=12))
def test_replay_reproduces_every_snapshot(drafts):
    """Replaying the log rebuilds a snapshot equal to the original at every seq."""
    store = HypergraphStore(clock=StepClock())
    for name in "ABCD":
        store.add_vertex(Vertex(id=name))
    for i, (participants, confidence) in enumerate(drafts):
        store.add_hyperedge(edge(f"e{i}", participants, confidence=confidence))

    replayed = HypergraphStore.replay(store.log_lines())
    assert replayed.log_lines() == store.log_lines()
    for seq in range(store.last_seq + 1):
        assert replayed.snapshot(seq) == store.snapshot(seq)


def test_store_rejects_duplicate_participants(store):
    with pytest.raises(ValidationFailed):
        store.add_hyperedge(edge("e1", ["A", "B", "A"]))
    assert store.last_seq == 6


def test_link_and_assessment_checks_carry_their_violations(store):
    store.add_hyperedge(edge("e1", ["A"]))
    with pytest.raises(UnknownEdge) as info:
        store.add_link(CausalLink(cause="ghost", effect="e1"))
    assert [v.field for v in info.value.details["violations"]] == ["cause"]
    assert "ghost" in info.value.message
    with pytest.raises(UnknownEdge) as info:
        store.add_assessment(ConfidenceAssessment(target="ghost", source="a", value=0.5))
    assert [v.field for v in info.value.details["violations"]] == ["target"]


def test_snapshots_stay_keyed_by_their_seq_under_concurrent_appends():
    store = HypergraphStore(clock=StepClock(), snapshot_cache_size=1000)
    store.add_vertex(Vertex(id="A"))

    def writer():
        for i in range(300):
            store.add_hyperedge(edge(f"e{i}", ["A"]))

    thread = threading.Thread(target=writer)
    thread.start()
    taken = []
    while thread.is_alive():
        taken.append(store.snapshot())
    thread.join()

    for snap in taken:
        assert store.snapshot(snap.as_of_seq) is snap
        assert len(list(snap.edges())) == snap.as_of_seq - 1
    for seq in range(store.last_seq + 1):
        assert store.snapshot(seq).as_of_seq == seq

"""Tests for time-travel, interval, status and blast-radius queries."""

from datetime import timedelta

import pytest
from hypothesis import given, settings, strategies as st

from src.data_layer.store import HypergraphStore
from src.engine.temporal import at_time, blast_radius, status_of, valid_in_interval
from src.models.causal import CausalLink, ConfidenceAssessment, LinkKind
from src.models.errors import MalformedInterval, UnknownConstant, UnknownEdge
from src.models.hypergraph import Vertex
from src.models.temporal import TimeInterval

from .conftest import StepClock, edge, ts


def test_at_time_on_the_meeting(build):
    snap = build("team_meeting").snapshot()
    result = at_time(snap, ts("2024-01-15T09:30:00Z"))
    assert result.edges == ["team_meeting"]
    assert result.as_of_seq == snap.as_of_seq
    assert at_time(snap, ts("2024-01-15T10:00:00Z")).edges == ["team_meeting"]
    assert at_time(snap, ts("2024-01-15T10:00:01Z")).edges == []


def test_at_time_confidence_floor_is_strict(build):
    snap = build("team_meeting").snapshot()
    t = ts("2024-01-16T09:10:00Z")
    assert at_time(snap, t).edges == ["team_standup"]
    assert at_time(snap, t, min_confidence=0.7).edges == []
    assert at_time(snap, t, min_confidence=0.69).edges == ["team_standup"]


def test_open_ended_edges_stay_valid(build):
    snap = build("it_incident").snapshot()
    assert "driver_push_e1" in at_time(snap, ts("2030-01-01"))


def test_at_time_respects_terminations(store):
    store.add_hyperedge(edge("e1", ["A"], start="2024-01-01"))
    store.terminate("e1", ts("2024-02-01"))
    snap = store.snapshot()
    assert at_time(snap, ts("2024-02-01")).edges == ["e1"]
    assert at_time(snap, ts("2024-02-02")).edges == []


def test_valid_in_interval_matches_scan(benchmark_store):
    snap = benchmark_store.snapshot()
    window = TimeInterval.of("2024-03-15", "2024-03-16")
    expected = {e.id for e in snap.edges() if e.valid_time.overlaps(window)}
    assert valid_in_interval(snap, window) == expected
    assert expected == {
        "driver_push_e1", "hotel_stay_e3", "missed_connection_e2", "schedule_change_e1", "supply_contract_c2024_001",
    }


def test_valid_in_interval_rejects_reversed_window(benchmark_store):
    window = TimeInterval(start=ts("2024-03-16"), end=ts("2024-03-15"))
    with pytest.raises(MalformedInterval):
        valid_in_interval(benchmark_store.snapshot(), window)


def test_status_of_entity(benchmark_store):
    snap = benchmark_store.snapshot()
    assert status_of(snap, "AccountingTeam", ts("2024-03-18T09:00:00Z")) == ["print_failure_e3"]
    assert status_of(snap, "AccountingTeam", ts("2024-03-19")) == []
    with pytest.raises(UnknownConstant):
        status_of(snap, "Nobody", ts("2024-03-18"))


def test_blast_radius(build):
    snap = build("travel_disruption").snapshot()
    assert blast_radius(snap, "missed_connection_e2") == {"schedule_change_e1", "hotel_stay_e3"}
    assert blast_radius(snap, "hotel_stay_e3") == {"schedule_change_e1", "missed_connection_e2"}
    with pytest.raises(UnknownEdge):
        blast_radius(snap, "ghost")


def test_blast_radius_follows_inhibits_links(store):
    store.add_hyperedge(edge("e1", ["A"]))
    store.add_hyperedge(edge("e2", ["A"]))
    store.add_hyperedge(edge("lonely", ["A"]))
    store.add_link(CausalLink(cause="e1", effect="e2", kind=LinkKind.INHIBITS))
    snap = store.snapshot()
    assert blast_radius(snap, "e2") == {"e1"}
    assert blast_radius(snap, "lonely") == set()


def _closure(nodes, arcs):
    """Reachability by Floyd-Warshall."""
    reach = {(a, b): (a, b) in arcs for a in nodes for b in nodes}
    for k in nodes:
        for i in nodes:
            for j in nodes:
                reach[i, j] = reach[i, j] or (reach[i, k] and reach[k, j])
    return reach


NODES = [f"e{i}" for i in range(6)]


@settings(max_examples=40, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(lambda p: p[0] < p[1]), max_size=10))
def test_blast_radius_matches_transitive_closure(pairs):
    store = HypergraphStore(clock=StepClock())
    store.add_vertex(Vertex(id="A"))
    for name in NODES:
        store.add_hyperedge(edge(name, ["A"]))
    arcs = {(NODES[i], NODES[j]) for i, j in pairs}
    for cause, effect in sorted(arcs):
        store.add_link(CausalLink(cause=cause, effect=effect))
    snap = store.snapshot()
    reach = _closure(NODES, arcs)
    for name in NODES:
        expected = {other for other in NODES if other != name and (reach[name, other] or reach[other, name])}
        assert blast_radius(snap, name) == expected


DAY = timedelta(days=1)
others = st.sampled_from("ABCD")
actions = st.lists(st.one_of(
    st.tuples(st.just("edge"), st.lists(others, min_size=1, max_size=3, unique=True), st.integers(0, 20)),
    st.tuples(st.just("link"), st.integers(0, 30), st.integers(0, 30)),
    st.tuples(st.just("terminate"), st.integers(0, 30), st.integers(0, 10)),
    st.tuples(st.just("assess"), st.integers(0, 30), st.floats(min_value=0.0, max_value=1.0)),
), max_size=12)


@settings(max_examples=500, deadline=None)
@given(actions, st.integers(0, 12))
def test_unrelated_appends_never_change_membership(steps, watched_at):
    """An edge's validity only moves when something touches that edge."""
    day0 = ts("2024-01-01")
    samples = [day0 + i * DAY for i in range(26)]
    store = HypergraphStore(clock=StepClock())
    for name in "ABCDX":
        store.add_vertex(Vertex(id=name))

    names, starts, linked = [], {}, set()
    expected = None

    def membership():
        snap = store.snapshot()
        return [("watched" in at_time(snap, t).edges, "watched" in at_time(snap, t, 0.5).edges) for t in samples]

    for position, step in enumerate(steps + [None]):
        if position == watched_at or (step is None and expected is None):
            store.add_hyperedge(edge("watched", ["X", "A"], start=day0 + 4 * DAY, end=day0 + 14 * DAY, confidence=0.7))
            expected = membership()
        if step is None:
            break

        kind = step[0]
        if kind == "edge":
            name = f"o{len(names)}"
            store.add_hyperedge(edge(name, step[1], start=day0 + step[2] * DAY))
            names.append(name)
            starts[name] = step[2]
        elif names and kind == "link":
            i, j = sorted((step[1] % len(names), step[2] % len(names)))
            if i != j and (i, j) not in linked:
                store.add_link(CausalLink(cause=names[i], effect=names[j]))
                linked.add((i, j))
        elif names and kind == "terminate":
            target = names[step[1] % len(names)]
            store.terminate(target, day0 + (starts[target] + step[2]) * DAY)
        elif names and kind == "assess":
            store.add_assessment(ConfidenceAssessment(target=names[step[1] % len(names)], source="audit", value=step[2]))

        if expected is not None:
            assert membership() == expected

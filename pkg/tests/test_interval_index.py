"""Interval index checked against a linear scan."""

from hypothesis import given, settings, strategies as st

from src.data_layer.interval_index import IntervalIndex

ticks = st.integers(min_value=0, max_value=200)


@st.composite
def entries(draw):
    n = draw(st.integers(min_value=0, max_value=40))
    out = []
    for i in range(n):
        start = draw(ticks)
        end = draw(st.integers(min_value=start, max_value=220))
        out.append((start, end, f"e{i}"))
    return out


def test_empty_index():
    index = IntervalIndex()
    assert len(index) == 0
    assert index.stab(5) == set()
    assert index.overlap(0, 10) == set()


def test_closed_endpoints():
    index = IntervalIndex([(10, 20, "a"), (20, 30, "b"), (31, 40, "c")])
    assert index.stab(20) == {"a", "b"}
    assert index.stab(30) == {"b"}
    assert index.overlap(30, 31) == {"b", "c"}
    assert index.overlap(21, 19) == set()


def test_starting_between():
    index = IntervalIndex([(10, 20, "a"), (15, 16, "b"), (30, 40, "c")])
    assert index.starting_between(10, 15) == ["a", "b"]


@settings(max_examples=150)
@given(entries(), ticks)
def test_stab_matches_linear_scan(data, t):
    index = IntervalIndex(data)
    assert index.stab(t) == {edge_id for start, end, edge_id in data if start <= t <= end}


@settings(max_examples=150)
@given(entries(), ticks, ticks)
def test_overlap_matches_linear_scan(data, a, b):
    lo, hi = min(a, b), max(a, b)
    index = IntervalIndex(data)
    assert index.overlap(lo, hi) == {edge_id for start, end, edge_id in data if start <= hi and lo <= end}

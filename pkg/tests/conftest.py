"""Shared fixtures for the hypergraph store tests."""

from datetime import datetime, timedelta

import pytest

from src.data_layer.fixtures import FixtureLibrary
from src.data_layer.store import HypergraphStore
from src.models.hypergraph import Hyperedge, Vertex
from src.models.temporal import FOREVER, TimeInterval, parse_timestamp


def ts(text: str) -> datetime:
    return parse_timestamp(text)


class StepClock:
    """Deterministic clock: each call returns one second after the previous."""

    def __init__(self, start: str = "2024-01-01T00:00:00+00:00"):
        self.now = ts(start)

    def __call__(self) -> datetime:
        current = self.now
        self.now = current + timedelta(seconds=1)
        return current


def edge(edge_id, participants, start="2024-01-01", end=None, confidence=1.0, **kwargs) -> Hyperedge:
    return Hyperedge(
        id=edge_id,
        participants=participants,
        valid_time=TimeInterval(start=start, end=FOREVER if end is None else end),
        confidence=confidence,
        **kwargs,
    )


@pytest.fixture(scope="session")
def library():
    return FixtureLibrary()


@pytest.fixture
def build(library):
    """Store holding the named bundled fixtures."""
    def _build(*names, **store_kwargs):
        return library.build(*names, **store_kwargs)
    return _build


@pytest.fixture
def benchmark_store(library):
    return library.benchmark_store()


@pytest.fixture
def store():
    """Empty store with a step clock and vertices A..F."""
    s = HypergraphStore(clock=StepClock())
    for name in "ABCDEF":
        s.add_vertex(Vertex(id=name))
    return s

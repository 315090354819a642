"""Time-travel, interval and blast-radius queries over a Snapshot."""

from datetime import datetime
from typing import List, Optional, Set

import networkx as nx
import structlog

from ..data_layer.store import Snapshot
from ..models.errors import MalformedInterval, UnknownConstant, UnknownEdge
from ..models.results import TemporalQueryResult
from ..models.temporal import TimeInterval, format_timestamp

logger = structlog.get_logger(__name__)


def at_time(snapshot: Snapshot, t: datetime, min_confidence: Optional[float] = None) -> TemporalQueryResult:
    """Edges whose effective valid interval contains ``t``.

    An open-ended edge stays in the result for every t past its start until a
    termination narrows it. ``min_confidence`` is a strict floor and only
    applies when given.
    """
    edges = snapshot.valid_at(t)
    if min_confidence is not None:
        edges = {edge_id for edge_id in edges if snapshot.effective_confidence(edge_id) > min_confidence}
    return TemporalQueryResult(edges=edges, as_of_valid_time=t, as_of_seq=snapshot.as_of_seq)


def valid_in_interval(snapshot: Snapshot, interval: TimeInterval) -> Set[str]:
    """Edges whose effective valid interval intersects the closed ``interval``."""
    if not interval.is_well_formed():
        raise MalformedInterval(
            f"interval start {format_timestamp(interval.start)} is after end {format_timestamp(interval.end)}"
        )
    return snapshot.valid_during(interval)


def blast_radius(snapshot: Snapshot, edge_id: str) -> Set[str]:
    """Strict causal ancestors and descendants of ``edge_id``; the edge itself is excluded."""
    if not snapshot.has_edge(edge_id):
        raise UnknownEdge(f"no edge {edge_id!r} as of seq {snapshot.as_of_seq}")
    graph = snapshot.graph
    if edge_id not in graph:
        return set()
    return nx.ancestors(graph, edge_id) | nx.descendants(graph, edge_id)


def status_of(snapshot: Snapshot, ref: str, t: datetime) -> List[str]:
    """Edges that involve ``ref`` and are valid at ``t``, sorted by id."""
    if not snapshot.has_ref(ref):
        raise UnknownConstant(f"no entity or edge {ref!r} as of seq {snapshot.as_of_seq}")
    involved = snapshot.edges_involving(ref)
    return sorted(involved & snapshot.valid_at(t))

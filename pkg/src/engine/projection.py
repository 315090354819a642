"""Binary projection and accounting of what it loses.

Replacing each hyperedge by the clique over its participants cannot be
undone: many hypergraphs project to the same graph. The bit counts below
are encoded-length proxies, not entropies.
"""

import itertools
import math
from typing import Iterable, List, Set

import structlog

from ..data_layer.store import HypergraphStore, Snapshot
from ..models.errors import TooLarge
from ..models.hypergraph import Hyperedge, Vertex
from ..models.results import BinaryGraph, ComponentBits, GapReport, LossReport, Pillar
from ..models.temporal import EPOCH, FOREVER, TimeInterval, ticks

logger = structlog.get_logger(__name__)

# Bits in an IEEE double's significand, used for each stored confidence.
CONFIDENCE_BITS = 53

PREIMAGE_NODE_LIMIT = 6


def project_binary(snapshot: Snapshot) -> BinaryGraph:
    """Union of the participant cliques of every edge."""
    nodes: Set[str] = {vertex.id for vertex in snapshot.vertices()}
    pairs = set()
    for edge in snapshot.edges():
        refs = edge.refs
        nodes.update(refs)
        pairs.update(itertools.combinations(refs, 2))
    return BinaryGraph(nodes=nodes, edges=pairs)


def project_as_store(graph: BinaryGraph) -> HypergraphStore:
    """A store holding the graph as binary edges, one vertex per node."""
    store = HypergraphStore(clock=lambda: EPOCH)
    for node in graph.nodes:
        store.add_vertex(Vertex(id=node))
    for a, b in graph.edges:
        store.add_hyperedge(Hyperedge(id=f"{a}--{b}", participants=[a, b], valid_time=TimeInterval(start=EPOCH)))
    return store


def _pairs(n: int) -> int:
    return math.comb(n, 2) if n >= 2 else 0


def component_bits(snapshot: Snapshot) -> ComponentBits:
    """Encoded-length proxies for structure, time, confidence and causality."""
    edges = list(snapshot.edges())
    count = len(edges)
    if count == 0:
        return ComponentBits()

    structural = sum(_pairs(edge.arity) for edge in edges)

    endpoints = [ticks(edge.valid_time.start) for edge in edges]
    endpoints += [ticks(edge.valid_time.end) for edge in edges if edge.valid_time.end != FOREVER]
    span = max(endpoints) - min(endpoints)
    # Two endpoints per edge; the extra code point marks an open end.
    temporal = 2 * count * math.ceil(math.log2(span + 2))

    links = len(snapshot.links())
    causal = links * (2 * math.ceil(math.log2(max(count, 2))) + 1)

    return ComponentBits(
        structural=float(structural),
        temporal=float(temporal),
        confidence=float(CONFIDENCE_BITS * count),
        causal=float(causal),
    )


def ambiguity_bound(snapshot: Snapshot) -> LossReport:
    """Sum of C(n, 2) over all edges, with the uniform-arity lower bound |E| * C(avg, 2)."""
    edges = list(snapshot.edges())
    per_edge = [_pairs(edge.arity) for edge in edges]
    if not edges:
        return LossReport()

    avg_arity = sum(edge.arity for edge in edges) / len(edges)
    identity_bits = sum(math.log2(bits) for bits in per_edge if bits > 0)
    report = LossReport(
        per_edge_bits=per_edge,
        total_bits=sum(per_edge),
        avg_arity=avg_arity,
        theorem_bound=len(edges) * avg_arity * (avg_arity - 1) / 2,
        edge_identity_bits=identity_bits,
        component_bits=component_bits(snapshot),
    )
    logger.info(
        "edge identity ambiguity differs from subset ambiguity",
        edge_identity_bits=round(identity_bits, 3),
        total_bits=report.total_bits,
    )
    return report


def count_preimages(graph: BinaryGraph, max_nodes: int = PREIMAGE_NODE_LIMIT) -> int:
    """Number of hypergraphs (edges of arity >= 2) whose projection is exactly ``graph``.

    Candidate edges are the cliques of the graph. By inclusion-exclusion over
    subsets F of the graph's pairs, the count is
    sum over F of (-1)^(|E| - |F|) * 2^(cliques inside F).
    """
    limit = min(max_nodes, PREIMAGE_NODE_LIMIT)
    if len(graph.nodes) > limit:
        raise TooLarge(f"preimage counting is limited to {limit} nodes, graph has {len(graph.nodes)}")

    bit = {pair: 1 << i for i, pair in enumerate(graph.edges)}
    cliques: List[int] = []
    for size in range(2, len(graph.nodes) + 1):
        for members in itertools.combinations(graph.nodes, size):
            pairs = list(itertools.combinations(members, 2))
            if all(pair in bit for pair in pairs):
                mask = 0
                for pair in pairs:
                    mask |= bit[pair]
                cliques.append(mask)

    n_edges = len(graph.edges)
    total = 0
    for subset in range(1 << n_edges):
        inside = sum(1 for mask in cliques if mask & ~subset == 0)
        sign = -1 if (n_edges - bin(subset).count("1")) % 2 else 1
        total += sign * (1 << inside)
    return total


def expressiveness_gap(snapshot: Snapshot, missing: Iterable[Pillar]) -> GapReport:
    """Bits an encoding without the ``missing`` pillars cannot represent."""
    pillars = sorted({Pillar(p) for p in missing}, key=lambda p: p.value)
    components = component_bits(snapshot)
    return GapReport(
        missing=pillars,
        components=components,
        total_bits=sum(components.for_pillar(p) for p in pillars),
    )

"""Causal traversal and confidence propagation along the causal order.

A chain's confidence multiplies the first node's confidence with every link
factor (link confidence times its context modifier). Confidences of later
nodes are reported per node but do not enter the product.
"""

import math
from datetime import datetime
from typing import Iterable, List, Optional, Sequence, Set, Union

import networkx as nx
import structlog

from ..data_layer.store import Snapshot
from ..models.causal import CausalLink, ContextRule, LinkKind
from ..models.errors import DepthDomainError, EmptyPathSet, UnknownEdge, UsageError
from ..models.hypergraph import Hyperedge
from ..models.results import (
    CausalChain, ChainLink, ChainLinkSpec, ChainNode, ChainSpec, CombinationMode, Direction,
    PathRelation, TraceNode, TraceResult,
)
from ..utils.probability import noisy_or

logger = structlog.get_logger(__name__)


def context_modifier(
    cause: Hyperedge,
    effect: Hyperedge,
    rules: Iterable[ContextRule],
    mechanism: Optional[str] = None,
) -> float:
    """Product of (1 - strength) over the rules matching this cause/effect pair; 1.0 if none match."""
    return math.prod(
        1.0 - rule.inhibition_strength for rule in rules if rule.matches(cause, effect, mechanism)
    )


def propagate_confidence(spec: ChainSpec) -> float:
    """First node's confidence times every link's confidence and context factors."""
    result = spec.initial_confidence
    for link in spec.links:
        result *= link.link_confidence
        for strength in link.inhibition_strengths:
            result *= 1.0 - strength
    return result


def combine_paths(confidences: Sequence[float], mode: Union[CombinationMode, str] = CombinationMode.NOISY_OR) -> float:
    """Combine confidences of alternative paths to one conclusion.

    noisy_or assumes independent paths; max is the conservative rule for
    paths that share ancestry.
    """
    mode = CombinationMode(mode)
    values = list(confidences)
    if not values:
        raise EmptyPathSet("no paths to combine")
    if mode is CombinationMode.NOISY_OR:
        return noisy_or(values)
    if mode is CombinationMode.MAX:
        return max(values)
    raise UsageError(f"combination mode must be noisy_or or max, got {mode.value!r}")


def _ancestry(graph: nx.MultiDiGraph, node: str) -> Set[str]:
    return nx.ancestors(graph, node) if node in graph else set()


def detect_shared_ancestors(snapshot: Snapshot, paths: Sequence[Sequence[str]]) -> PathRelation:
    """Classify paths as independent or sharing ancestry.

    Each path contributes its members above its final node plus their strict
    ancestors. Paths are independent when those sets are pairwise disjoint.
    """
    graph = snapshot.graph
    upsets: List[Set[str]] = []
    for path in paths:
        for edge_id in path:
            if not snapshot.has_edge(edge_id):
                raise UnknownEdge(f"no edge {edge_id!r} as of seq {snapshot.as_of_seq}")
        upset: Set[str] = set()
        for edge_id in list(path)[:-1]:
            upset.add(edge_id)
            upset |= _ancestry(graph, edge_id)
        upsets.append(upset)

    shared: Set[str] = set()
    for i in range(len(upsets)):
        for j in range(i + 1, len(upsets)):
            shared |= upsets[i] & upsets[j]
    return PathRelation(independent=not shared, shared=sorted(shared))


def effective_depth(kappa_min: float, theta: float) -> int:
    """Deepest chain that can still reach ``theta`` when every factor is at most ``kappa_min``."""
    if not 0.0 < kappa_min < 1.0:
        raise DepthDomainError(f"kappa_min must lie strictly between 0 and 1, got {kappa_min}")
    if not 0.0 < theta <= 1.0:
        raise DepthDomainError(f"theta must lie in (0, 1], got {theta}")
    # Tolerance keeps exact powers (0.5, 0.25) from rounding up.
    return max(0, math.ceil(math.log(theta) / math.log(kappa_min) - 1e-9))


def active_defaults(snapshot: Snapshot, t: datetime) -> Set[str]:
    """Edges valid at ``t`` that no inhibitor valid at ``t`` suppresses."""
    valid = snapshot.valid_at(t)
    return {
        edge_id for edge_id in valid
        if not any(link.cause in valid for link in snapshot.in_links(edge_id, LinkKind.INHIBITS))
    }


def _active_inhibitors(snapshot: Snapshot, edge_id: str, as_of: Optional[datetime]) -> List[str]:
    causes = [link.cause for link in snapshot.in_links(edge_id, LinkKind.INHIBITS)]
    if as_of is not None:
        causes = [c for c in causes if snapshot.edge(c).valid_at(as_of)]
    return sorted(causes)


class _Tracer:
    """Depth-bounded walk over causes links, building a TraceNode tree."""

    def __init__(self, snapshot: Snapshot, direction: Direction, depth: int,
                 as_of: Optional[datetime], threshold: Optional[float]):
        self.snapshot = snapshot
        self.direction = direction
        self.depth = depth
        self.as_of = as_of
        self.threshold = threshold
        self.rules = snapshot.rules()
        self.pruned: Set[str] = set()

    def _neighbours(self, edge_id: str) -> List[CausalLink]:
        if self.direction is Direction.CAUSES:
            return self.snapshot.in_links(edge_id, LinkKind.CAUSES)
        return self.snapshot.out_links(edge_id, LinkKind.CAUSES)

    def build(self, root: Hyperedge) -> TraceNode:
        return self._node(root, depth=0, link=None, modifier=1.0, path_factor=1.0, root=root)

    def _node(self, edge: Hyperedge, depth: int, link: Optional[CausalLink], modifier: float,
              path_factor: float, root: Hyperedge) -> TraceNode:
        children: List[TraceNode] = []
        if depth < self.depth:
            for next_link in self._neighbours(edge.id):
                other_id = next_link.cause if self.direction is Direction.CAUSES else next_link.effect
                other = self.snapshot.edge(other_id)
                if self.as_of is not None and not other.valid_at(self.as_of):
                    continue

                cause, effect = (other, edge) if self.direction is Direction.CAUSES else (edge, other)
                next_modifier = context_modifier(cause, effect, self.rules, next_link.mechanism)
                next_factor = path_factor * next_link.link_confidence * next_modifier
                # Upper bound on every chain through this branch.
                bound = next_factor if self.direction is Direction.CAUSES else root.confidence * next_factor
                if self.threshold is not None and bound < self.threshold:
                    self.pruned.add(other_id)
                    continue
                child = self._node(other, depth + 1, next_link, next_modifier, next_factor, root)
                if self.threshold is not None and not child.children and child.chain_confidence < self.threshold:
                    self.pruned.add(other_id)
                    continue
                children.append(child)

        first = edge if self.direction is Direction.CAUSES else root
        return TraceNode(
            edge_id=edge.id,
            name=edge.name,
            confidence=edge.confidence,
            depth=depth,
            link_confidence=None if link is None else link.link_confidence,
            context_modifier=modifier,
            mechanism=None if link is None else link.mechanism,
            path_factor=path_factor,
            chain_confidence=first.confidence * path_factor,
            inhibitors=_active_inhibitors(self.snapshot, edge.id, self.as_of),
            children=children,
        )


def trace_causal_chain(
    snapshot: Snapshot,
    target: str,
    depth: int,
    as_of: Optional[datetime] = None,
    threshold: Optional[float] = None,
    direction: Union[Direction, str] = Direction.CAUSES,
) -> TraceResult:
    """Walk causes (or effects) of ``target`` up to ``depth`` links.

    With ``as_of`` only edges valid at that instant are followed; with
    ``threshold`` a branch stops where its chain confidence drops below it.
    The target itself is always part of the result.
    """
    if depth < 0:
        raise DepthDomainError(f"depth must be non-negative, got {depth}")
    root = snapshot.edge(target)
    tracer = _Tracer(snapshot, Direction(direction), depth, as_of, threshold)
    tree = tracer.build(root)

    result = TraceResult(
        root=target,
        direction=Direction(direction),
        depth=depth,
        as_of=as_of,
        threshold=threshold,
        tree=tree,
        pruned=sorted(tracer.pruned - {n.edge_id for n in tree.walk()}),
    )
    logger.debug("trace complete", target=target, nodes=len(result.node_ids()), pruned=len(result.pruned))
    return result


def chains(trace: TraceResult) -> List[CausalChain]:
    """Every root-to-leaf path of a trace as a chain, first cause first."""
    found: List[CausalChain] = []

    def visit(node: TraceNode, path: List[TraceNode]) -> None:
        path = path + [node]
        if node.children:
            for child in node.children:
                visit(child, path)
            return

        ordered = list(reversed(path)) if trace.direction is Direction.CAUSES else path
        # Each trace node carries the link that joins it to its parent.
        linked = path[1:]
        if trace.direction is Direction.CAUSES:
            linked = list(reversed(linked))
        links = [ChainLink(link_confidence=n.link_confidence, context_modifier=n.context_modifier) for n in linked]
        spec = ChainSpec(
            initial_confidence=ordered[0].confidence,
            links=[ChainLinkSpec(link_confidence=l.factor) for l in links],
        )
        found.append(CausalChain(
            nodes=[ChainNode(edge_id=n.edge_id, name=n.name, confidence=n.confidence) for n in ordered],
            links=links,
            chain_confidence=propagate_confidence(spec),
        ))

    visit(trace.tree, [])
    return found


def combined_confidence(
    snapshot: Snapshot,
    trace: TraceResult,
    mode: Union[CombinationMode, str] = CombinationMode.AUTO,
) -> float:
    """Combine the trace's chains; auto picks noisy_or for independent chains, max otherwise."""
    found = chains(trace)
    mode = CombinationMode(mode)
    if mode is CombinationMode.AUTO:
        relation = detect_shared_ancestors(snapshot, [chain.edge_ids for chain in found])
        mode = CombinationMode.NOISY_OR if relation.independent else CombinationMode.MAX
    return combine_paths([chain.chain_confidence for chain in found], mode)


def format_chain(chain: CausalChain) -> str:
    """``name(0.73) --[0.89]--> name(0.95)``; a context modifier shows as ``0.80x0.30``."""
    parts = [f"{chain.nodes[0].name}({chain.nodes[0].confidence:.2f})"]
    for link, node in zip(chain.links, chain.nodes[1:]):
        label = f"{link.link_confidence:.2f}"
        if link.context_modifier != 1.0:
            label += f"x{link.context_modifier:.2f}"
        parts.append(f"--[{label}]--> {node.name}({node.confidence:.2f})")
    return " ".join(parts)

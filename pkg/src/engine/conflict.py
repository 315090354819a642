"""Contradiction detection, hidden-context discovery and conflict resolution."""

from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Set, Tuple

import structlog

from ..data_layer.store import HypergraphStore, Snapshot
from ..models.errors import EmptyObservations, NoAttributes, NotInConflict, ThresholdDomainError, ZeroGain
from ..models.hypergraph import ClaimTag, Hyperedge, Polarity
from ..models.predicates import MISSING, render_scalar
from ..models.results import (
    AuditReport, ClaimCluster, ContradictionSignal, DiscoveryResult, Observation, PartitionNode,
    ResolutionTier, ResolutionVerdict, VerdictKind,
)
from ..models.temporal import FOREVER, TimeInterval
from ..utils import probability
from .causal import trace_causal_chain

logger = structlog.get_logger(__name__)

# Bookkeeping attributes that never count as context.
RESERVED_ATTRIBUTES = frozenset({"name", "source_priority"})

_GAIN_TOLERANCE = 1e-12

CountTable = Dict[str, Tuple[int, int]]


def accumulate_claim(snapshot: Snapshot, proposition: str, polarity: Polarity, theta: float = 0.0) -> ClaimCluster:
    """Noisy-OR accumulation over the claim's tagged edges whose confidence exceeds ``theta``."""
    polarity = Polarity(polarity)
    members = sorted(
        edge_id for edge_id in snapshot.claim_members(proposition, polarity)
        if snapshot.effective_confidence(edge_id) > theta
    )
    accumulated = probability.noisy_or(snapshot.effective_confidence(edge_id) for edge_id in members)
    return ClaimCluster(proposition=proposition, polarity=polarity, members=members, accumulated=accumulated)


def detect_contradiction(
    snapshot: Snapshot,
    proposition: str,
    theta: float,
    member_floor: float = 0.0,
) -> Optional[ContradictionSignal]:
    """Signal when both polarities accumulate more than ``theta``.

    ``member_floor`` filters individual observations before accumulation;
    many weak observations may together cross ``theta``.
    """
    if not 0.0 < theta < 1.0:
        raise ThresholdDomainError(f"theta must lie strictly between 0 and 1, got {theta}")
    positive = accumulate_claim(snapshot, proposition, Polarity.SUPPORTS, member_floor)
    negative = accumulate_claim(snapshot, proposition, Polarity.REFUTES, member_floor)
    if positive.accumulated > theta and negative.accumulated > theta:
        logger.debug("contradiction detected", proposition=proposition,
                     supports=positive.accumulated, refutes=negative.accumulated)
        return ContradictionSignal(proposition=proposition, cluster_pos=positive, cluster_neg=negative, threshold=theta)
    return None


def observations_for(snapshot: Snapshot, signal: ContradictionSignal) -> List[Observation]:
    """Labeled rows for every member of both clusters."""
    rows = []
    for cluster in (signal.cluster_pos, signal.cluster_neg):
        for edge_id in cluster.members:
            edge = snapshot.edge(edge_id)
            rows.append(Observation(
                edge_id=edge_id, label=cluster.polarity, attributes=edge.attributes, confidence=edge.confidence,
            ))
    return rows


def count_table(observations: Sequence[Observation], attribute: str) -> CountTable:
    """value -> (supports, refutes); absent values fall into the missing category."""
    counts: Dict[str, List[int]] = defaultdict(lambda: [0, 0])
    for row in observations:
        value = row.attributes.get(attribute)
        key = MISSING if value is None else render_scalar(value)
        counts[key][0 if row.label is Polarity.SUPPORTS else 1] += 1
    return {key: (pos, neg) for key, (pos, neg) in sorted(counts.items())}


def information_gain(observations: Sequence[Observation], attribute: str) -> float:
    """Label entropy minus the weighted entropy after splitting on ``attribute``, in bits."""
    if not observations:
        raise EmptyObservations("information gain needs at least one observation")
    return probability.information_gain(count_table(observations, attribute))


def label_entropy(observations: Sequence[Observation]) -> float:
    pos = sum(1 for row in observations if row.label is Polarity.SUPPORTS)
    return probability.entropy([pos, len(observations) - pos])


def candidate_attributes(observations: Sequence[Observation]) -> List[str]:
    return sorted({key for row in observations for key in row.attributes} - RESERVED_ATTRIBUTES)


def best_split(observations: Sequence[Observation], attributes: Sequence[str]) -> Tuple[Optional[str], float]:
    """Highest-gain attribute; ties go to the lexicographically smallest name."""
    gains = {attribute: information_gain(observations, attribute) for attribute in attributes}
    if not gains:
        return None, 0.0
    top = max(gains.values())
    best = min(attribute for attribute, gain in gains.items() if gain >= top - _GAIN_TOLERANCE)
    return best, gains[best]


def _is_mixed(counts: Tuple[int, int]) -> bool:
    return counts[0] > 0 and counts[1] > 0


def build_partition(
    observations: Sequence[Observation],
    attribute: str,
    remaining: Sequence[str],
    depth: int,
    max_depth: int,
) -> PartitionNode:
    """Split on ``attribute``, then recursively split each mixed branch."""
    counts = count_table(observations, attribute)
    children: Dict[str, PartitionNode] = {}
    needs_review = False

    for value, branch_counts in counts.items():
        if not _is_mixed(branch_counts):
            continue
        if depth >= max_depth:
            needs_review = True
            continue
        branch = [
            row for row in observations
            if (MISSING if row.attributes.get(attribute) is None else render_scalar(row.attributes[attribute])) == value
        ]
        rest = [a for a in remaining if a != attribute]
        child_attribute, child_gain = best_split(branch, rest)
        if child_attribute is None or child_gain <= _GAIN_TOLERANCE:
            continue
        children[value] = build_partition(branch, child_attribute, rest, depth + 1, max_depth)

    return PartitionNode(
        attribute=attribute,
        gain=probability.information_gain(counts),
        counts=counts,
        children=children,
        needs_review=needs_review,
    )


def discover_hidden_context(
    snapshot: Snapshot,
    signal: ContradictionSignal,
    max_depth: int = 3,
) -> DiscoveryResult:
    """Find the attribute that best separates supporting from refuting observations."""
    observations = observations_for(snapshot, signal)
    if not observations:
        raise EmptyObservations(f"no observations for {signal.proposition!r}")
    attributes = candidate_attributes(observations)
    if not attributes:
        raise NoAttributes(f"members of {signal.proposition!r} carry no context attributes")

    entropy = label_entropy(observations)
    best, gain = best_split(observations, attributes)

    if gain <= _GAIN_TOLERANCE:
        logger.info("no separating attribute", proposition=signal.proposition, candidates=len(attributes))
        return DiscoveryResult(proposition=signal.proposition, label_entropy=entropy, no_separator=True)

    partition = count_table(observations, best)
    residual = None
    if gain < entropy - _GAIN_TOLERANCE:
        residual = build_partition(observations, best, attributes, depth=1, max_depth=max_depth)

    logger.info("hidden context discovered", proposition=signal.proposition, attribute=best, gain=round(gain, 6))
    return DiscoveryResult(
        proposition=signal.proposition,
        best_attribute=best,
        gain=gain,
        label_entropy=entropy,
        partition=partition,
        residual_tree=residual,
    )


def split_on_context(
    store: HypergraphStore,
    signal: ContradictionSignal,
    discovery: DiscoveryResult,
) -> List[Hyperedge]:
    """Append one context-specific edge per (value, polarity) branch of the partition.

    Each new edge fixes the separating attribute, claims the proposition
    narrowed to that context, and carries the Noisy-OR of its branch. Existing
    records are left untouched.
    """
    if discovery.best_attribute is None or discovery.gain <= _GAIN_TOLERANCE:
        raise ZeroGain(f"no attribute separates the claims on {signal.proposition!r}")

    snapshot = store.snapshot()
    attribute = discovery.best_attribute
    branches: Dict[Tuple[str, Polarity], List[Hyperedge]] = defaultdict(list)
    for cluster in (signal.cluster_pos, signal.cluster_neg):
        for edge_id in cluster.members:
            edge = snapshot.edge(edge_id)
            value = edge.attributes.get(attribute)
            if value is None:
                continue
            branches[(render_scalar(value), cluster.polarity)].append(edge)

    created: List[Hyperedge] = []
    for (rendered, polarity), members in sorted(branches.items(), key=lambda item: (item[0][0], item[0][1].value)):
        refs: List[str] = []
        for edge in members:
            refs.extend(ref for ref in edge.refs if ref not in refs)
        edge = Hyperedge(
            id=f"{signal.proposition}.{attribute}={rendered}.{polarity.value}",
            participants=refs,
            attributes={attribute: members[0].attributes[attribute], "derived_from": signal.proposition},
            valid_time=TimeInterval(
                start=min(e.valid_time.start for e in members),
                end=max(e.valid_time.end for e in members),
            ),
            confidence=probability.noisy_or(e.confidence for e in members),
            claim=ClaimTag(proposition=f"{signal.proposition}[{attribute}={rendered}]", polarity=polarity),
        )
        store.add_hyperedge(edge)
        created.append(store.get(edge.id))

    logger.info("contradiction split", proposition=signal.proposition, attribute=attribute, edges=len(created))
    return created


def _source_priority(edge: Hyperedge) -> float:
    value = edge.attributes.get("source_priority", 0)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return 0.0
    return float(value)


def _specificity(edge: Hyperedge) -> int:
    return sum(
        1 for key, value in edge.attributes.items()
        if key not in RESERVED_ATTRIBUTES and value != ""
    )


def resolve(snapshot: Snapshot, edge_a: str, edge_b: str) -> ResolutionVerdict:
    """Apply the tiers temporal, confidence, source priority, specificity; the first decisive one wins."""
    a, b = snapshot.edge(edge_a), snapshot.edge(edge_b)
    if (
        a.claim is None or b.claim is None
        or a.claim.proposition != b.claim.proposition
        or a.claim.polarity is b.claim.polarity
    ):
        raise NotInConflict(f"{edge_a} and {edge_b} do not make opposing claims on one proposition")

    rationale: List[str] = []
    tiers = (
        (ResolutionTier.TEMPORAL, a.valid_time.start, b.valid_time.start, "starts later"),
        (ResolutionTier.CONFIDENCE, a.confidence, b.confidence, "has higher confidence"),
        (ResolutionTier.SOURCE, _source_priority(a), _source_priority(b), "has higher source priority"),
        (ResolutionTier.SPECIFICITY, _specificity(a), _specificity(b), "has more specific context"),
    )
    for tier, left, right, reason in tiers:
        tied = abs(left - right) <= _GAIN_TOLERANCE if tier is ResolutionTier.CONFIDENCE else left == right
        if tied:
            rationale.append(f"{tier.value}: tie")
            continue
        winner = edge_a if left > right else edge_b
        rationale.append(f"{tier.value}: {winner} {reason}")
        verdict = VerdictKind.PREFER_A if winner == edge_a else VerdictKind.PREFER_B
        return ResolutionVerdict(edge_a=edge_a, edge_b=edge_b, verdict=verdict, tier=tier, rationale=rationale)

    context = sorted(
        key for key in (set(a.attributes) | set(b.attributes)) - RESERVED_ATTRIBUTES
        if a.attributes.get(key) != b.attributes.get(key)
    )
    rationale.append("no tier decides; both claims coexist")
    return ResolutionVerdict(
        edge_a=edge_a, edge_b=edge_b, verdict=VerdictKind.COEXIST, context=context, rationale=rationale,
    )


def _low_confidence_sources(snapshot: Snapshot, edge_id: str, kappa_floor: float) -> Tuple[List[str], List[str]]:
    trace = trace_causal_chain(snapshot, edge_id, depth=max(len(snapshot), 1))
    nodes = trace.node_ids()
    faulty = sorted(
        node.edge_id for node in trace.tree.walk()
        if node.depth > 0 and node.confidence < kappa_floor
    )
    return nodes, sorted(set(faulty))


def causal_audit(
    store: HypergraphStore,
    edge_a: str,
    edge_b: str,
    kappa_floor: float = 0.3,
) -> AuditReport:
    """Trace both beliefs to their sources and blame a low-confidence source.

    When exactly one side rests on a source below ``kappa_floor``, an
    explanation edge "source caused incorrect belief" is appended and the
    other side is recommended.
    """
    snapshot = store.snapshot()
    chain_a, faulty_a = _low_confidence_sources(snapshot, edge_a, kappa_floor)
    chain_b, faulty_b = _low_confidence_sources(snapshot, edge_b, kappa_floor)

    recommendation = explanation_id = None
    if bool(faulty_a) != bool(faulty_b):
        belief, faulty, recommendation = (edge_a, faulty_a, edge_b) if faulty_a else (edge_b, faulty_b, edge_a)
        source = min(faulty, key=lambda edge_id: (snapshot.effective_confidence(edge_id), edge_id))
        explanation_id = _explain(store, snapshot, source, belief)

    logger.info("causal audit", edge_a=edge_a, edge_b=edge_b, recommendation=recommendation)
    return AuditReport(
        edge_a=edge_a,
        edge_b=edge_b,
        kappa_floor=kappa_floor,
        chain_a=chain_a,
        chain_b=chain_b,
        faulty_a=faulty_a,
        faulty_b=faulty_b,
        recommendation=recommendation,
        explanation_edge=explanation_id,
    )


def _explain(store: HypergraphStore, snapshot: Snapshot, source: str, belief: str) -> str:
    explanation_id = f"{source}_caused_incorrect_belief_{belief}"
    if snapshot.has_edge(explanation_id):
        return explanation_id
    store.add_hyperedge(Hyperedge(
        id=explanation_id,
        participants=[source, belief],
        attributes={"name": "caused_incorrect_belief"},
        valid_time=TimeInterval(start=snapshot.edge(belief).valid_time.start, end=FOREVER),
        confidence=1.0 - snapshot.effective_confidence(source),
    ))
    return explanation_id

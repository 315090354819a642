"""Result types returned by the temporal, causal, conflict, projection and benchmark engines."""

from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from .causal import Confidence
from .hypergraph import Polarity
from .predicates import Attributes
from .temporal import format_timestamp


class TemporalQueryResult(BaseModel):
    """Edges valid at an instant, as seen from a given log position."""

    model_config = ConfigDict(frozen=True)

    edges: List[str] = Field(default_factory=list, description="Sorted EdgeIds")
    as_of_valid_time: datetime
    as_of_seq: int

    @field_validator("edges")
    @classmethod
    def _sorted(cls, v: List[str]) -> List[str]:
        return sorted(set(v))

    @field_serializer("as_of_valid_time")
    def _serialize_time(self, v: datetime) -> str:
        return format_timestamp(v)

    def __contains__(self, edge_id: str) -> bool:
        return edge_id in self.edges

    def __len__(self) -> int:
        return len(self.edges)


# Causal engine

class Direction(str, Enum):
    CAUSES = "causes"
    EFFECTS = "effects"


class CombinationMode(str, Enum):
    NOISY_OR = "noisy_or"
    MAX = "max"
    AUTO = "auto"


class ChainLinkSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    link_confidence: Confidence
    inhibition_strengths: List[Confidence] = Field(default_factory=list)


class ChainSpec(BaseModel):
    """Inputs of a chain-confidence computation."""

    model_config = ConfigDict(frozen=True)

    initial_confidence: Confidence
    links: List[ChainLinkSpec] = Field(default_factory=list)


class ChainNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    edge_id: str
    name: str
    confidence: Confidence


class ChainLink(BaseModel):
    model_config = ConfigDict(frozen=True)

    link_confidence: Confidence
    context_modifier: Confidence = 1.0

    @property
    def factor(self) -> float:
        return self.link_confidence * self.context_modifier


class CausalChain(BaseModel):
    """A linear chain, first cause first."""

    model_config = ConfigDict(frozen=True)

    nodes: List[ChainNode] = Field(..., min_length=1)
    links: List[ChainLink] = Field(default_factory=list)
    chain_confidence: Confidence

    @model_validator(mode="after")
    def _check_shape(self) -> "CausalChain":
        if len(self.links) != len(self.nodes) - 1:
            raise ValueError("a chain has exactly one link fewer than nodes")
        return self

    @property
    def edge_ids(self) -> List[str]:
        return [node.edge_id for node in self.nodes]


class TraceNode(BaseModel):
    """A node in a trace tree, with the link that connects it towards the root."""

    model_config = ConfigDict(frozen=True)

    edge_id: str
    name: str
    confidence: Confidence = Field(..., description="Effective confidence of this edge")
    depth: int = Field(0, ge=0, description="Links between this node and the root")
    link_confidence: Optional[Confidence] = Field(None, description="Link towards the root; None at the root")
    context_modifier: Confidence = 1.0
    mechanism: Optional[str] = None
    path_factor: float = Field(1.0, description="Product of link factors between this node and the root")
    chain_confidence: Confidence = Field(..., description="Confidence of the chain through this node")
    inhibitors: List[str] = Field(default_factory=list, description="Active inhibitors of this edge")
    children: List["TraceNode"] = Field(default_factory=list)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


TraceNode.model_rebuild()


class TraceResult(BaseModel):
    """Causal history (or future) of a root edge, as a tree."""

    model_config = ConfigDict(frozen=True)

    root: str
    direction: Direction = Direction.CAUSES
    depth: int
    as_of: Optional[datetime] = None
    threshold: Optional[float] = None
    tree: TraceNode
    pruned: List[str] = Field(default_factory=list, description="Edges cut off by the threshold")

    @field_serializer("as_of")
    def _serialize_as_of(self, v: Optional[datetime]) -> Optional[str]:
        return None if v is None else format_timestamp(v)

    def node_ids(self) -> List[str]:
        return sorted({node.edge_id for node in self.tree.walk()})

    def max_depth(self) -> int:
        return max(node.depth for node in self.tree.walk())


class PathRelation(BaseModel):
    """Whether a set of causal paths share ancestry."""

    model_config = ConfigDict(frozen=True)

    independent: bool
    shared: List[str] = Field(default_factory=list, description="Sorted shared ancestors")


# Conflict engine

class ClaimCluster(BaseModel):
    model_config = ConfigDict(frozen=True)

    proposition: str
    polarity: Polarity
    members: List[str] = Field(default_factory=list)
    accumulated: Confidence = 0.0


class ContradictionSignal(BaseModel):
    """Both polarities of a proposition accumulate confidence above the threshold."""

    model_config = ConfigDict(frozen=True)

    proposition: str
    cluster_pos: ClaimCluster
    cluster_neg: ClaimCluster
    threshold: float


class Observation(BaseModel):
    """A labeled attribute row used by information-gain computations."""

    model_config = ConfigDict(frozen=True)

    edge_id: str = ""
    label: Polarity
    attributes: Attributes = Field(default_factory=dict)
    confidence: Confidence = 1.0


class PartitionNode(BaseModel):
    """One level of the recursive context partition."""

    model_config = ConfigDict(frozen=True)

    attribute: str
    gain: float
    counts: Dict[str, Tuple[int, int]] = Field(default_factory=dict, description="value -> (supports, refutes)")
    children: Dict[str, "PartitionNode"] = Field(default_factory=dict, description="Splits of mixed branches")
    needs_review: bool = Field(False, description="Mixed branch left unsplit at the depth cap")


PartitionNode.model_rebuild()


class DiscoveryResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    proposition: str = ""
    best_attribute: Optional[str] = None
    gain: float = 0.0
    label_entropy: float = 0.0
    partition: Dict[str, Tuple[int, int]] = Field(default_factory=dict)
    residual_tree: Optional[PartitionNode] = None
    no_separator: bool = False

    @property
    def perfect(self) -> bool:
        return self.best_attribute is not None and all(pos == 0 or neg == 0 for pos, neg in self.partition.values())


class VerdictKind(str, Enum):
    PREFER_A = "prefer_a"
    PREFER_B = "prefer_b"
    COEXIST = "coexist"


class ResolutionTier(str, Enum):
    TEMPORAL = "temporal"
    CONFIDENCE = "confidence"
    SOURCE = "source_priority"
    SPECIFICITY = "specificity"


class ResolutionVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    edge_a: str
    edge_b: str
    verdict: VerdictKind
    tier: Optional[ResolutionTier] = None
    context: List[str] = Field(default_factory=list, description="Attributes distinguishing coexisting edges")
    rationale: List[str] = Field(default_factory=list)

    @property
    def preferred(self) -> Optional[str]:
        if self.verdict is VerdictKind.PREFER_A:
            return self.edge_a
        if self.verdict is VerdictKind.PREFER_B:
            return self.edge_b
        return None


class AuditReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    edge_a: str
    edge_b: str
    kappa_floor: float
    chain_a: List[str] = Field(default_factory=list)
    chain_b: List[str] = Field(default_factory=list)
    faulty_a: List[str] = Field(default_factory=list, description="Low-confidence ancestors of edge_a")
    faulty_b: List[str] = Field(default_factory=list, description="Low-confidence ancestors of edge_b")
    recommendation: Optional[str] = None
    explanation_edge: Optional[str] = Field(None, description="Appended 'caused incorrect belief' edge")


# Projection

class Pillar(str, Enum):
    """The four expressiveness pillars a binary encoding may drop."""
    STRUCTURE = "P1"
    TIME = "P2"
    CONFIDENCE = "P3"
    CAUSALITY = "P4"


class BinaryGraph(BaseModel):
    """Undirected simple graph; pairs are stored sorted."""

    model_config = ConfigDict(frozen=True)

    nodes: List[str] = Field(default_factory=list)
    edges: List[Tuple[str, str]] = Field(default_factory=list)

    @field_validator("nodes")
    @classmethod
    def _sort_nodes(cls, v: List[str]) -> List[str]:
        return sorted(set(v))

    @field_validator("edges")
    @classmethod
    def _normalize_pairs(cls, v: List[Tuple[str, str]]) -> List[Tuple[str, str]]:
        return sorted({tuple(sorted(pair)) for pair in v if pair[0] != pair[1]})

    @model_validator(mode="after")
    def _endpoints_are_nodes(self) -> "BinaryGraph":
        missing = {n for pair in self.edges for n in pair} - set(self.nodes)
        if missing:
            raise ValueError(f"edge endpoints not in node set: {sorted(missing)}")
        return self


class ComponentBits(BaseModel):
    """Encoded-bit-length proxies for information a binary encoding loses."""

    model_config = ConfigDict(frozen=True)

    structural: float = 0.0
    temporal: float = 0.0
    confidence: float = 0.0
    causal: float = 0.0
    label: str = "MDL proxy (artifact-defined)"

    def for_pillar(self, pillar: Pillar) -> float:
        return {
            Pillar.STRUCTURE: self.structural,
            Pillar.TIME: self.temporal,
            Pillar.CONFIDENCE: self.confidence,
            Pillar.CAUSALITY: self.causal,
        }[pillar]


class LossReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    per_edge_bits: List[int] = Field(default_factory=list, description="C(n, 2) per hyperedge")
    total_bits: int = 0
    avg_arity: float = 0.0
    theorem_bound: float = Field(0.0, description="|E| * C(avg arity, 2)")
    edge_identity_bits: float = Field(0.0, description="sum of log2 C(n, 2), the per-edge identity ambiguity")
    component_bits: ComponentBits = Field(default_factory=ComponentBits)


class GapReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    missing: List[Pillar] = Field(default_factory=list)
    components: ComponentBits = Field(default_factory=ComponentBits)
    total_bits: float = 0.0


# Store and benchmark

class StoreStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    as_of_seq: int = 0
    vertices: int = 0
    edges: int = 0
    terminated: int = 0
    links: Dict[str, int] = Field(default_factory=dict)
    assessments: int = 0
    rules: int = 0
    avg_arity: float = 0.0


class BenchmarkResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    query_id: str
    description: str
    result: Any = None
    expected: Any = None
    passed: bool = False
    detail: str = ""

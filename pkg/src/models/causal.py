"""Causal links, confidence assessments and context rules."""

from datetime import datetime
from enum import Enum
from typing import Annotated, Any, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

from .hypergraph import Hyperedge, decode_value, encode_value
from .predicates import AttributeValue, Comparison
from .temporal import format_timestamp, parse_timestamp

Confidence = Annotated[float, Field(ge=0.0, le=1.0)]


class LinkKind(str, Enum):
    """Kinds of edges in the causal order."""
    CAUSES = "causes"
    INHIBITS = "inhibits"


class CausalLink(BaseModel):
    """cause ≺ effect between two hyperedges."""

    model_config = ConfigDict(frozen=True)

    cause: str = Field(..., description="EdgeId of the cause")
    effect: str = Field(..., description="EdgeId of the effect")
    mechanism: str = Field("caused", description="Mechanism label")
    link_confidence: Confidence = Field(1.0, description="Confidence in the causal mechanism")
    conditional_confidence: Optional[Confidence] = Field(
        None, description="Confidence in the effect given the cause; stored, not propagated"
    )
    kind: LinkKind = Field(LinkKind.CAUSES)

    @property
    def key(self) -> tuple:
        return (self.cause, self.effect, self.kind.value)


class ConfidenceAssessment(BaseModel):
    """An evidential assessment of an edge's confidence."""

    model_config = ConfigDict(frozen=True)

    target: str = Field(..., description="EdgeId being assessed")
    source: str = Field(..., description="Who or what produced the assessment")
    methodology: str = Field("", description="How the value was obtained")
    value: Confidence = Field(...)
    tx_time: Optional[datetime] = Field(None, description="Assigned by the store")

    @field_validator("tx_time", mode="before")
    @classmethod
    def _coerce_timestamp(cls, v: Any) -> Any:
        return None if v is None else parse_timestamp(v)

    @field_serializer("tx_time")
    def _serialize_timestamp(self, v: Optional[datetime]) -> Optional[str]:
        return None if v is None else format_timestamp(v)


class RuleSide(str, Enum):
    CAUSE = "cause"
    EFFECT = "effect"


class RuleCondition(BaseModel):
    """One attribute test against the cause or the effect of a link."""

    model_config = ConfigDict(frozen=True)

    side: RuleSide = Field(RuleSide.CAUSE)
    key: str
    op: Comparison = Field(Comparison.EQ)
    value: AttributeValue

    @field_validator("op", mode="before")
    @classmethod
    def _coerce_op(cls, v: Any) -> Any:
        return Comparison.parse(v) if isinstance(v, str) else v

    @field_validator("value", mode="before")
    @classmethod
    def _decode_value(cls, v: Any) -> Any:
        return decode_value(v)

    @field_serializer("value")
    def _encode_value(self, v: Any) -> Any:
        return encode_value(v)

    def holds(self, cause: Hyperedge, effect: Hyperedge) -> bool:
        edge = cause if self.side is RuleSide.CAUSE else effect
        return self.op.apply(edge.attributes.get(self.key), self.value)


class ContextRule(BaseModel):
    """Inhibits a link's effective confidence when all conditions hold."""

    model_config = ConfigDict(frozen=True)

    id: str = Field(..., description="Rule identifier")
    conditions: List[RuleCondition] = Field(default_factory=list)
    mechanism: Optional[str] = Field(None, description="Restrict the rule to links with this mechanism")
    inhibition_strength: Confidence = Field(...)

    def matches(self, cause: Hyperedge, effect: Hyperedge, mechanism: Optional[str] = None) -> bool:
        if self.mechanism is not None and mechanism is not None and self.mechanism != mechanism:
            return False
        return all(condition.holds(cause, effect) for condition in self.conditions)

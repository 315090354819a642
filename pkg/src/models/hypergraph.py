"""Vertices, participants and hyperedges."""

import uuid
from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

from .predicates import Attributes
from .temporal import TimeInterval, format_timestamp, parse_timestamp

_TIMESTAMP_TAG = "$timestamp"


def new_id() -> str:
    """Fresh universally-unique identifier."""
    return str(uuid.uuid4())


def encode_value(value: Any) -> Any:
    """Tag a timestamp value so it survives a round trip through object notation."""
    if isinstance(value, datetime):
        return {_TIMESTAMP_TAG: format_timestamp(value)}
    return value


def decode_value(value: Any) -> Any:
    if isinstance(value, dict) and set(value) == {_TIMESTAMP_TAG}:
        return parse_timestamp(value[_TIMESTAMP_TAG])
    return value


def encode_attributes(attributes: Dict[str, Any]) -> Dict[str, Any]:
    return {key: encode_value(value) for key, value in attributes.items()}


def decode_attributes(attributes: Any) -> Any:
    if not isinstance(attributes, dict):
        return attributes
    return {key: decode_value(value) for key, value in attributes.items()}


class Polarity(str, Enum):
    """Whether an edge supports or refutes a proposition."""
    SUPPORTS = "supports"
    REFUTES = "refutes"

    @property
    def opposite(self) -> "Polarity":
        return Polarity.REFUTES if self is Polarity.SUPPORTS else Polarity.SUPPORTS


class ClaimTag(BaseModel):
    """Groups edges into claim clusters for contradiction detection."""

    model_config = ConfigDict(frozen=True)

    proposition: str = Field(..., description="Proposition key")
    polarity: Polarity = Field(Polarity.SUPPORTS, description="supports or refutes")


class Participant(BaseModel):
    """A participant reference: an entity id or another edge id, with an optional role."""

    model_config = ConfigDict(frozen=True)

    ref: str = Field(..., description="EntityId or EdgeId")
    role: Optional[str] = Field(None, description="Role label")


class Vertex(BaseModel):
    """An entity with its own attribute map."""

    model_config = ConfigDict(frozen=True)

    id: str = Field(default_factory=new_id, description="EntityId")
    attributes: Attributes = Field(default_factory=dict)

    @field_validator("attributes", mode="before")
    @classmethod
    def _decode(cls, v: Any) -> Any:
        return decode_attributes(v)

    @field_serializer("attributes")
    def _encode(self, v: Dict[str, Any]) -> Dict[str, Any]:
        return encode_attributes(v)


class Hyperedge(BaseModel):
    """A first-class n-ary relationship.

    Structural invariants (non-empty participants, well-formed interval,
    confidence in [0, 1]) are checked by the validators, not on construction,
    so that drafts can be diagnosed with every violation listed.
    """

    model_config = ConfigDict(frozen=True)

    id: str = Field(default_factory=new_id, description="EdgeId")
    participants: List[Participant] = Field(default_factory=list)
    attributes: Attributes = Field(default_factory=dict)
    valid_time: TimeInterval = Field(..., description="Valid time (when it holds in the world)")
    tx_time: Optional[TimeInterval] = Field(None, description="Transaction time, assigned by the store")
    confidence: float = Field(1.0, description="Degree of belief in [0, 1]")
    claim: Optional[ClaimTag] = Field(None, description="Claim grouping for contradiction detection")

    @field_validator("participants", mode="before")
    @classmethod
    def _coerce_participants(cls, v: Any) -> Any:
        if isinstance(v, (list, tuple)):
            return [Participant(ref=p) if isinstance(p, str) else p for p in v]
        return v

    @field_validator("attributes", mode="before")
    @classmethod
    def _decode(cls, v: Any) -> Any:
        return decode_attributes(v)

    @field_serializer("attributes")
    def _encode(self, v: Dict[str, Any]) -> Dict[str, Any]:
        return encode_attributes(v)

    @property
    def arity(self) -> int:
        return len(self.participants)

    @property
    def refs(self) -> List[str]:
        return [p.ref for p in self.participants]

    @property
    def name(self) -> str:
        """Display name: the ``name`` attribute when present, else the id."""
        value = self.attributes.get("name")
        return str(value) if value is not None else self.id

    def valid_at(self, t: datetime) -> bool:
        return self.valid_time.contains(t)

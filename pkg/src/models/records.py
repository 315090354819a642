"""Event-log records and their payloads."""

from datetime import datetime
from enum import Enum
from typing import Annotated, Any, Dict, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

from .causal import CausalLink, ConfidenceAssessment, ContextRule
from .hypergraph import Hyperedge, Vertex
from .temporal import format_timestamp, parse_timestamp


class PayloadType(str, Enum):
    """Payload-type tags as written in the log."""
    ADD_VERTEX = "AddVertex"
    ADD_HYPEREDGE = "AddHyperedge"
    TERMINATE_HYPEREDGE = "TerminateHyperedge"
    ADD_CAUSAL_LINK = "AddCausalLink"
    ADD_ASSESSMENT = "AddAssessment"
    ADD_CONTEXT_RULE = "AddContextRule"


class _Payload(BaseModel):
    model_config = ConfigDict(frozen=True)

    def body(self) -> Dict[str, Any]:
        """Payload fields as written after the tag (store-assigned fields omitted)."""
        return self.model_dump(mode="json", exclude={"kind"}, exclude_none=True)


class AddVertex(_Payload):
    kind: Literal["AddVertex"] = "AddVertex"
    vertex: Vertex


class AddHyperedge(_Payload):
    kind: Literal["AddHyperedge"] = "AddHyperedge"
    edge: Hyperedge


class TerminateHyperedge(_Payload):
    kind: Literal["TerminateHyperedge"] = "TerminateHyperedge"
    edge_id: str
    end: datetime

    @field_validator("end", mode="before")
    @classmethod
    def _coerce_end(cls, v: Any) -> datetime:
        return parse_timestamp(v)

    @field_serializer("end")
    def _serialize_end(self, v: datetime) -> str:
        return format_timestamp(v)


class AddCausalLink(_Payload):
    kind: Literal["AddCausalLink"] = "AddCausalLink"
    link: CausalLink


class AddAssessment(_Payload):
    kind: Literal["AddAssessment"] = "AddAssessment"
    assessment: ConfidenceAssessment


class AddContextRule(_Payload):
    kind: Literal["AddContextRule"] = "AddContextRule"
    rule: ContextRule


Payload = Annotated[
    Union[AddVertex, AddHyperedge, TerminateHyperedge, AddCausalLink, AddAssessment, AddContextRule],
    Field(discriminator="kind"),
]

PAYLOAD_CLASSES = {
    PayloadType.ADD_VERTEX: AddVertex,
    PayloadType.ADD_HYPEREDGE: AddHyperedge,
    PayloadType.TERMINATE_HYPEREDGE: TerminateHyperedge,
    PayloadType.ADD_CAUSAL_LINK: AddCausalLink,
    PayloadType.ADD_ASSESSMENT: AddAssessment,
    PayloadType.ADD_CONTEXT_RULE: AddContextRule,
}


class EventRecord(BaseModel):
    """One line of the append-only log."""

    model_config = ConfigDict(frozen=True)

    seq: int = Field(..., ge=1, description="Strictly increasing sequence number")
    tx_time: datetime = Field(..., description="Store-assigned transaction time")
    payload: Payload

    @field_validator("tx_time", mode="before")
    @classmethod
    def _coerce_tx(cls, v: Any) -> datetime:
        return parse_timestamp(v)

    @property
    def payload_type(self) -> PayloadType:
        return PayloadType(self.payload.kind)

"""Data validation utilities."""

import math
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Set, Union

import structlog
from pydantic import BaseModel, ConfigDict, ValidationError

from ..models.causal import CausalLink, ConfidenceAssessment
from ..models.errors import VIOLATION_ERRORS, ValidationFailed
from ..models.hypergraph import ClaimTag, Hyperedge, Participant, new_id
from ..models.predicates import is_scalar
from ..models.temporal import TimeInterval

logger = structlog.get_logger(__name__)

RefResolver = Callable[[str], bool]


class Violation(BaseModel):
    """One violated invariant."""

    model_config = ConfigDict(frozen=True)

    code: str
    message: str
    field: Optional[str] = None

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class HyperedgeValidator:
    """Invariant checks that report every violation instead of stopping at the first."""

    @staticmethod
    def validate_edge(edge: Hyperedge, resolve: Optional[RefResolver] = None) -> List[Violation]:
        """Validate a hyperedge; ``resolve`` checks that participant refs exist."""
        errors: List[Violation] = []

        if not edge.id:
            errors.append(Violation(code="ValidationFailed", message="edge id must be non-empty", field="id"))

        if not edge.participants:
            errors.append(Violation(
                code="EmptyParticipants", message="a hyperedge needs at least one participant", field="participants"
            ))

        seen: Set[str] = set()
        for participant in edge.participants:
            if participant.ref in seen:
                errors.append(Violation(
                    code="ValidationFailed", message=f"participant {participant.ref!r} is listed twice",
                    field="participants",
                ))
            seen.add(participant.ref)

        if resolve is not None:
            for participant in edge.participants:
                if participant.ref == edge.id:
                    errors.append(Violation(
                        code="UnresolvedRef", message=f"edge {edge.id} cannot contain itself", field="participants"
                    ))
                elif not resolve(participant.ref):
                    errors.append(Violation(
                        code="UnresolvedRef", message=f"participant {participant.ref!r} does not exist",
                        field="participants",
                    ))

        if not _in_unit_range(edge.confidence):
            errors.append(Violation(
                code="ConfidenceOutOfRange", message=f"confidence must be in [0, 1], got {edge.confidence}",
                field="confidence",
            ))

        if not edge.valid_time.is_well_formed():
            errors.append(Violation(
                code="MalformedInterval", message=f"valid_time start is after end: {edge.valid_time}",
                field="valid_time",
            ))

        for key, value in edge.attributes.items():
            if not key:
                errors.append(Violation(code="ValidationFailed", message="attribute keys must be non-empty",
                                        field="attributes"))
            if not is_scalar(value):
                errors.append(Violation(
                    code="ValidationFailed", message=f"attribute {key!r} is not a scalar", field="attributes"
                ))

        if edge.claim is not None and not edge.claim.proposition:
            errors.append(Violation(code="ValidationFailed", message="claim proposition must be non-empty",
                                    field="claim"))

        return errors

    @staticmethod
    def validate_link(link: CausalLink, resolve: Optional[RefResolver] = None) -> List[Violation]:
        """Validate a causal link; ``resolve`` checks that both ends are edges.

        Acyclicity beyond self-loops needs the whole graph and stays with the store.
        """
        errors: List[Violation] = []

        if resolve is not None:
            for side, ref in (("cause", link.cause), ("effect", link.effect)):
                if not resolve(ref):
                    errors.append(Violation(code="UnknownEdge", message=f"no edge {ref!r}", field=side))

        if link.cause == link.effect:
            errors.append(Violation(code="CausalCycle", message=f"link from {link.cause} to itself", field="effect"))

        return errors

    @staticmethod
    def validate_assessment(assessment: ConfidenceAssessment, resolve: Optional[RefResolver] = None) -> List[Violation]:
        errors: List[Violation] = []
        if resolve is not None and not resolve(assessment.target):
            errors.append(Violation(
                code="UnknownEdge", message=f"no edge {assessment.target!r}", field="target"
            ))
        return errors


def _in_unit_range(value: float) -> bool:
    return isinstance(value, (int, float)) and not math.isnan(value) and 0.0 <= value <= 1.0


def validate(edge: Hyperedge, resolve: Optional[RefResolver] = None) -> List[Violation]:
    """Every violated invariant of ``edge``; an empty list means the edge is well-formed."""
    return HyperedgeValidator.validate_edge(edge, resolve)


def raise_for(violations: List[Violation]) -> None:
    """Raise the error class of the first violation, carrying all of them."""
    if not violations:
        return
    error_class = VIOLATION_ERRORS.get(violations[0].code, ValidationFailed)
    if issubclass(error_class, ValidationFailed):
        raise error_class(violations=violations)
    raise error_class(violations[0].message, violations=violations)


def new_hyperedge(
    participants: Iterable[Union[str, Participant, Mapping[str, Any]]],
    attributes: Optional[Dict[str, Any]] = None,
    valid_time: Union[TimeInterval, Mapping[str, Any], None] = None,
    confidence: float = 1.0,
    claim: Optional[ClaimTag] = None,
    id: Optional[str] = None,
    resolve: Optional[RefResolver] = None,
) -> Hyperedge:
    """Construct a validated hyperedge with a fresh id unless one is given.

    tx_time is left unset; the store assigns it on append.
    """
    try:
        edge = Hyperedge(
            id=id or new_id(),
            participants=list(participants),
            attributes=attributes or {},
            valid_time=valid_time,
            confidence=confidence,
            claim=claim,
        )
    except ValidationError as e:
        raise ValidationFailed(f"invalid hyperedge: {e.errors()[0]['msg']}") from e

    violations = validate(edge, resolve)
    if violations:
        logger.debug("hyperedge rejected", edge_id=edge.id, violations=[str(v) for v in violations])
    raise_for(violations)
    return edge

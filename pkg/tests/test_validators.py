"""Tests for hyperedge invariant checks."""

import pytest

from src.data_layer.validators import HyperedgeValidator, new_hyperedge, validate
from src.models.causal import CausalLink, ConfidenceAssessment
from src.models.errors import (
    ConfidenceOutOfRange, EmptyParticipants, MalformedInterval, UnresolvedRef, ValidationFailed,
)
from src.models.hypergraph import Hyperedge
from src.models.temporal import TimeInterval

from .conftest import edge, ts


def known(*refs):
    return lambda ref: ref in refs


def test_well_formed_edge_has_no_violations():
    assert validate(edge("e1", ["A", "B"]), known("A", "B")) == []


def test_every_violation_is_reported():
    """A draft with three problems lists all three."""
    draft = Hyperedge(
        id="bad",
        participants=[],
        valid_time=TimeInterval(start=ts("2024-02-01"), end=ts("2024-01-01")),
        confidence=1.5,
    )
    codes = [v.code for v in validate(draft)]
    assert codes == ["EmptyParticipants", "ConfidenceOutOfRange", "MalformedInterval"]


def test_unresolved_participant():
    violations = validate(edge("e1", ["A", "Ghost"]), known("A"))
    assert [v.code for v in violations] == ["UnresolvedRef"]
    assert "Ghost" in violations[0].message


def test_edge_cannot_contain_itself():
    violations = validate(edge("e1", ["e1"]), known("e1"))
    assert [v.code for v in violations] == ["UnresolvedRef"]


def test_non_scalar_attribute():
    draft = Hyperedge.model_construct(
        id="e1",
        participants=edge("x", ["A"]).participants,
        attributes={"tags": ["a", "b"]},
        valid_time=TimeInterval.of("2024-01-01"),
        confidence=1.0,
        claim=None,
        tx_time=None,
    )
    assert [v.code for v in validate(draft)] == ["ValidationFailed"]


def test_new_hyperedge_assigns_fresh_ids():
    a = new_hyperedge(["A"], valid_time={"start": "2024-01-01"})
    b = new_hyperedge(["A"], valid_time={"start": "2024-01-01"})
    assert a.id and b.id and a.id != b.id
    assert a.tx_time is None


@pytest.mark.parametrize("kwargs,error", [
    ({"participants": []}, EmptyParticipants),
    ({"participants": ["A"], "confidence": -0.1}, ConfidenceOutOfRange),
    ({"participants": ["A"], "valid_time": {"start": "2024-02-01", "end": "2024-01-01"}}, MalformedInterval),
    ({"participants": ["Ghost"], "resolve": known("A")}, UnresolvedRef),
])
def test_new_hyperedge_raises_first_violation_class(kwargs, error):
    kwargs.setdefault("valid_time", {"start": "2024-01-01"})
    with pytest.raises(error) as info:
        new_hyperedge(**kwargs)
    assert isinstance(info.value, ValidationFailed)
    assert info.value.violations


def test_validate_link_and_assessment():
    link = CausalLink(cause="e1", effect="e1")
    assert [v.code for v in HyperedgeValidator.validate_link(link, known("e1"))] == ["CausalCycle"]

    dangling = CausalLink(cause="e1", effect="e2")
    assert [v.field for v in HyperedgeValidator.validate_link(dangling, known("e1"))] == ["effect"]

    assessment = ConfidenceAssessment(target="e9", source="audit", value=0.5)
    assert HyperedgeValidator.validate_assessment(assessment, known("e1"))[0].code == "UnknownEdge"


def test_dangling_link_reports_unknown_edge():
    violations = HyperedgeValidator.validate_link(CausalLink(cause="ghost", effect="e1"), known("e1"))
    assert [(v.code, v.field) for v in violations] == [("UnknownEdge", "cause")]


@pytest.mark.parametrize("participants", [
    ["A", "A"],
    [{"ref": "A", "role": "Doctor"}, {"ref": "A", "role": "Patient"}],
])
def test_participants_are_a_set(participants):
    violations = validate(edge("e1", participants), known("A"))
    assert [v.code for v in violations] == ["ValidationFailed"]
    assert "listed twice" in violations[0].message
    with pytest.raises(ValidationFailed):
        new_hyperedge(participants, resolve=known("A"))

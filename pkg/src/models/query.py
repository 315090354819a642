"""Conjunctive hyperedge patterns, join trees and bindings."""

from datetime import datetime
from enum import Enum
from typing import Dict, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .hypergraph import Hyperedge
from .predicates import AttributeValue, Comparison
from .temporal import TimeInterval


class TermKind(str, Enum):
    VARIABLE = "variable"
    CONSTANT = "constant"


class TemplateTerm(BaseModel):
    """A variable or constant participant slot, optionally constrained to a role."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., description="Variable name or constant entity id")
    kind: TermKind = Field(TermKind.VARIABLE)
    role: Optional[str] = Field(None, description="Required participant role")

    @property
    def is_variable(self) -> bool:
        return self.kind is TermKind.VARIABLE


class AttributePredicate(BaseModel):
    """``key op literal`` over a hyperedge's attributes."""

    model_config = ConfigDict(frozen=True)

    key: str
    op: Comparison = Field(Comparison.EQ)
    value: AttributeValue

    def test(self, edge: Hyperedge) -> bool:
        return self.op.apply(edge.attributes.get(self.key), self.value)

    def __str__(self) -> str:
        return f"{self.key} {self.op.value} {self.value!r}"


class EdgeTemplate(BaseModel):
    """One hyperedge in a pattern."""

    model_config = ConfigDict(frozen=True)

    terms: List[TemplateTerm] = Field(..., min_length=1)
    predicates: List[AttributePredicate] = Field(default_factory=list)
    min_confidence: Optional[float] = Field(None, description="Per-template confidence floor (strict)")
    open_arity: bool = Field(False, description="Also match edges with more participants than terms")

    @property
    def variables(self) -> List[str]:
        seen: List[str] = []
        for term in self.terms:
            if term.is_variable and term.name not in seen:
                seen.append(term.name)
        return seen

    @property
    def constants(self) -> List[str]:
        return [term.name for term in self.terms if not term.is_variable]

    @property
    def arity(self) -> int:
        return len(self.terms)

    def accepts_arity(self, arity: int) -> bool:
        return arity == self.arity or (self.open_arity and arity > self.arity)


class PatternQuery(BaseModel):
    """A conjunctive pattern; variables shared between templates induce joins."""

    model_config = ConfigDict(frozen=True)

    templates: List[EdgeTemplate] = Field(..., min_length=1)
    window: Optional[TimeInterval] = Field(None, description="Edges must overlap this valid-time window")
    at_time: Optional[datetime] = Field(None, description="Edges must be valid at this instant")
    min_confidence: Optional[float] = Field(None, description="Global confidence floor (strict)")

    @property
    def variables(self) -> List[str]:
        names: List[str] = []
        for template in self.templates:
            for name in template.variables:
                if name not in names:
                    names.append(name)
        return names

    def with_filters(
        self,
        at_time: Optional[datetime] = None,
        window: Optional[TimeInterval] = None,
        min_confidence: Optional[float] = None,
    ) -> "PatternQuery":
        """Copy with extra temporal or confidence filters (command-line flags)."""
        update = {}
        if at_time is not None:
            update["at_time"] = at_time
        if window is not None:
            update["window"] = window
        if min_confidence is not None:
            update["min_confidence"] = min_confidence
        return self.model_copy(update=update)


class JoinTree(BaseModel):
    """Tree over template indices; each tree edge is labeled by its shared variables."""

    model_config = ConfigDict(frozen=True)

    root: int
    parent: Dict[int, Optional[int]] = Field(default_factory=dict)
    labels: Dict[Tuple[int, int], List[str]] = Field(default_factory=dict)

    def children(self, node: int) -> List[int]:
        return sorted(child for child, parent in self.parent.items() if parent == node)

    def postorder(self) -> List[int]:
        order: List[int] = []

        def visit(node: int) -> None:
            for child in self.children(node):
                visit(child)
            order.append(node)

        visit(self.root)
        return order

    def has_running_intersection(self, templates: List[EdgeTemplate]) -> bool:
        """Every variable's occurrences form a connected subtree."""
        for variable in {v for t in templates for v in t.variables}:
            holders: Set[int] = {i for i, t in enumerate(templates) if variable in t.variables}
            # In a rooted tree, a node set is connected iff exactly one member's parent is outside it.
            tops = [i for i in holders if self.parent.get(i) not in holders]
            if len(tops) != 1:
                return False
        return True


class AcyclicityResult(BaseModel):
    """Outcome of GYO reduction: a join tree, or the irreducible residue."""

    model_config = ConfigDict(frozen=True)

    acyclic: bool
    join_tree: Optional[JoinTree] = None
    witness: List[int] = Field(default_factory=list, description="Template indices left after reduction")


class Binding(BaseModel):
    """Variable assignment plus the edge matched by each template."""

    model_config = ConfigDict(frozen=True)

    variables: Dict[str, str] = Field(default_factory=dict)
    edges: Tuple[str, ...] = Field(default_factory=tuple)

    @field_validator("variables")
    @classmethod
    def _sorted_variables(cls, v: Dict[str, str]) -> Dict[str, str]:
        return dict(sorted(v.items()))

    def sort_key(self) -> tuple:
        return (tuple(sorted(self.variables.items())), self.edges)

    def __hash__(self) -> int:
        return hash(self.sort_key())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Binding) and self.sort_key() == other.sort_key()

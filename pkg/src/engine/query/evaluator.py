"""Join-tree evaluation of conjunctive hyperedge patterns.

Each template is matched against the snapshot in a leaf scan that already
applies the temporal window, confidence floors and attribute predicates.
Leaves are then fully reduced by a bottom-up and a top-down semi-join pass
over the join tree and joined along it.
"""

import itertools
from typing import Dict, Iterable, List, Optional, Set, Tuple

import structlog

from ...data_layer.store import Snapshot
from ...models.errors import CyclicPattern, UnknownConstant
from ...models.hypergraph import Hyperedge
from ...models.query import Binding, EdgeTemplate, JoinTree, PatternQuery
from .planner import is_alpha_acyclic

logger = structlog.get_logger(__name__)

# One match of a template: its variable assignment and the matched edge.
Row = Tuple[Dict[str, str], str]


def match_template(template: EdgeTemplate, edge: Hyperedge) -> List[Dict[str, str]]:
    """Every variable assignment under which ``edge`` matches ``template``.

    Terms are matched to participants one-to-one, ignoring order; a role
    constraint must equal the participant's role. Edges of a different arity
    never match, except that an open template (``(x, ...)``) also matches
    larger edges, leaving the extra participants unbound.
    """
    if not template.accepts_arity(edge.arity):
        return []

    # Constrained terms first so that dead ends are found early.
    terms = sorted(template.terms, key=lambda t: (t.is_variable, t.role is None))
    found: List[Dict[str, str]] = []

    def assign(k: int, used: Set[int], binding: Dict[str, str]) -> None:
        if k == len(terms):
            if binding not in found:
                found.append(dict(binding))
            return
        term = terms[k]
        for slot, participant in enumerate(edge.participants):
            if slot in used:
                continue
            if term.role is not None and participant.role != term.role:
                continue
            if not term.is_variable:
                if participant.ref == term.name:
                    assign(k + 1, used | {slot}, binding)
                continue
            bound = binding.get(term.name)
            if bound is not None:
                if bound == participant.ref:
                    assign(k + 1, used | {slot}, binding)
                continue
            binding[term.name] = participant.ref
            assign(k + 1, used | {slot}, binding)
            del binding[term.name]

    assign(0, set(), {})
    return found


def passes_filters(pattern: PatternQuery, template: EdgeTemplate, edge: Hyperedge) -> bool:
    """Temporal, confidence and attribute filters of one template (floors are strict)."""
    if pattern.at_time is not None and not edge.valid_at(pattern.at_time):
        return False
    if pattern.window is not None and not edge.valid_time.overlaps(pattern.window):
        return False
    if pattern.min_confidence is not None and not edge.confidence > pattern.min_confidence:
        return False
    if template.min_confidence is not None and not edge.confidence > template.min_confidence:
        return False
    return all(predicate.test(edge) for predicate in template.predicates)


def _consistent(left: Dict[str, str], right: Dict[str, str]) -> bool:
    return all(left[k] == v for k, v in right.items() if k in left)


def _key(variables: Dict[str, str], names: List[str]) -> tuple:
    return tuple(variables[name] for name in names)


class QueryEvaluator:
    """Evaluates patterns over one snapshot.

    ``pushdown`` applies filters during leaf scans through the snapshot
    indexes; without it every edge is matched first and filtered afterwards.
    Both give the same bindings.
    """

    def __init__(self, snapshot: Snapshot, pushdown: bool = True):
        self.snapshot = snapshot
        self.pushdown = pushdown
        self.leaf_cardinalities: List[int] = []

    def _check_constants(self, pattern: PatternQuery) -> None:
        for template in pattern.templates:
            for constant in template.constants:
                if not self.snapshot.has_ref(constant):
                    raise UnknownConstant(f"no entity or edge {constant!r} as of seq {self.snapshot.as_of_seq}")

    def _candidates(self, pattern: PatternQuery, template: EdgeTemplate) -> Iterable[str]:
        if not self.pushdown:
            return self.snapshot.edge_ids()
        ids: Optional[Set[str]] = None
        if pattern.at_time is not None:
            ids = self.snapshot.valid_at(pattern.at_time)
        if pattern.window is not None:
            during = self.snapshot.valid_during(pattern.window)
            ids = during if ids is None else ids & during
        for constant in template.constants:
            involving = self.snapshot.edges_involving(constant)
            ids = involving if ids is None else ids & involving
        return sorted(ids) if ids is not None else self.snapshot.edge_ids()

    def scan(self, pattern: PatternQuery, template: EdgeTemplate) -> List[Row]:
        """Rows for one template."""
        rows: List[Row] = []
        scanned = 0
        for edge_id in self._candidates(pattern, template):
            edge = self.snapshot.edge(edge_id)
            if self.pushdown:
                if not template.accepts_arity(edge.arity) or not passes_filters(pattern, template, edge):
                    continue
                scanned += 1
                rows.extend((binding, edge_id) for binding in match_template(template, edge))
            else:
                matches = match_template(template, edge)
                if matches and passes_filters(pattern, template, edge):
                    rows.extend((binding, edge_id) for binding in matches)
        self.leaf_cardinalities.append(scanned if self.pushdown else len({edge_id for _, edge_id in rows}))
        return rows

    def evaluate(self, pattern: PatternQuery, force_bruteforce: bool = False) -> List[Binding]:
        """Bindings of the pattern, sorted canonically.

        Cyclic patterns raise CyclicPattern unless ``force_bruteforce`` is
        set, in which case they are enumerated by nested loops.
        """
        self._check_constants(pattern)
        plan = is_alpha_acyclic(pattern)
        if not plan.acyclic and not force_bruteforce:
            raise CyclicPattern(f"pattern is not alpha-acyclic; templates {plan.witness} form a cycle")

        self.leaf_cardinalities = []
        leaves = [self.scan(pattern, template) for template in pattern.templates]
        logger.debug("leaf scans", cardinalities=self.leaf_cardinalities, acyclic=plan.acyclic)

        if plan.acyclic and not force_bruteforce:
            bindings = self._join_tree(plan.join_tree, leaves, pattern)
        else:
            bindings = _nested_loops(leaves)
        return sorted(set(bindings), key=Binding.sort_key)

    def _join_tree(self, tree: JoinTree, leaves: List[List[Row]], pattern: PatternQuery) -> List[Binding]:
        rows = {i: list(leaf) for i, leaf in enumerate(leaves)}
        order = tree.postorder()

        # Bottom-up: keep parent rows that some child row agrees with.
        for child in order:
            up = tree.parent.get(child)
            if up is None:
                continue
            label = tree.labels.get((child, up), [])
            keys = {_key(variables, label) for variables, _ in rows[child]}
            rows[up] = [row for row in rows[up] if _key(row[0], label) in keys]

        # Top-down: keep child rows that the reduced parent agrees with.
        for child in reversed(order):
            up = tree.parent.get(child)
            if up is None:
                continue
            label = tree.labels.get((child, up), [])
            keys = {_key(variables, label) for variables, _ in rows[up]}
            rows[child] = [row for row in rows[child] if _key(row[0], label) in keys]

        partial: List[Tuple[Dict[str, str], Dict[int, str]]] = [
            (dict(variables), {tree.root: edge_id}) for variables, edge_id in rows[tree.root]
        ]
        for child in reversed(order):
            up = tree.parent.get(child)
            if up is None:
                continue
            label = tree.labels.get((child, up), [])
            index: Dict[tuple, List[Row]] = {}
            for row in rows[child]:
                index.setdefault(_key(row[0], label), []).append(row)
            joined = []
            for variables, edges in partial:
                for child_vars, edge_id in index.get(_key(variables, label), []):
                    if _consistent(variables, child_vars):
                        joined.append(({**variables, **child_vars}, {**edges, child: edge_id}))
            partial = joined

        n = len(pattern.templates)
        return [Binding(variables=variables, edges=tuple(edges[i] for i in range(n))) for variables, edges in partial]


def _nested_loops(leaves: List[List[Row]]) -> List[Binding]:
    bindings = []
    for combo in itertools.product(*leaves):
        merged: Dict[str, str] = {}
        ok = True
        for variables, _ in combo:
            if not _consistent(merged, variables):
                ok = False
                break
            merged.update(variables)
        if ok:
            bindings.append(Binding(variables=merged, edges=tuple(edge_id for _, edge_id in combo)))
    return bindings


def evaluate(
    snapshot: Snapshot,
    pattern: PatternQuery,
    force_bruteforce: bool = False,
    pushdown: bool = True,
) -> List[Binding]:
    """Bindings of ``pattern`` in ``snapshot``; see QueryEvaluator."""
    return QueryEvaluator(snapshot, pushdown=pushdown).evaluate(pattern, force_bruteforce=force_bruteforce)

"""Acyclicity test and join-tree construction by GYO reduction."""

from typing import Dict, List, Optional, Set

import structlog

from ...models.query import AcyclicityResult, JoinTree, PatternQuery

logger = structlog.get_logger(__name__)


def is_alpha_acyclic(pattern: PatternQuery) -> AcyclicityResult:
    """Reduce the pattern's variable hypergraph by ear removal.

    Two rules are applied until neither fires: drop a variable that occurs in
    a single remaining template; drop a template whose remaining variables
    are contained in another remaining template, recording that template as
    its parent. The pattern is acyclic iff one template survives; it becomes
    the root of the join tree. Otherwise the survivors are the witness.
    """
    templates = pattern.templates
    working: Dict[int, Set[str]] = {i: set(t.variables) for i, t in enumerate(templates)}
    parent: Dict[int, Optional[int]] = {}

    changed = True
    while changed and len(working) > 1:
        changed = False

        occurrences: Dict[str, List[int]] = {}
        for i, variables in working.items():
            for variable in variables:
                occurrences.setdefault(variable, []).append(i)
        for variable, holders in occurrences.items():
            if len(holders) == 1:
                working[holders[0]].discard(variable)
                changed = True

        for i in sorted(working):
            witness = next(
                (j for j in sorted(working) if j != i and working[i] <= working[j]),
                None,
            )
            if witness is not None:
                parent[i] = witness
                del working[i]
                changed = True
                break

    if len(working) > 1:
        witness = sorted(working)
        logger.debug("pattern is cyclic", templates=len(templates), witness=witness)
        return AcyclicityResult(acyclic=False, witness=witness)

    root = next(iter(working))
    parent[root] = None
    labels = {
        (child, up): sorted(set(templates[child].variables) & set(templates[up].variables))
        for child, up in parent.items()
        if up is not None
    }
    tree = JoinTree(root=root, parent=parent, labels=labels)
    logger.debug("pattern is acyclic", templates=len(templates), root=root)
    return AcyclicityResult(acyclic=True, join_tree=tree)

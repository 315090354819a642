"""Table and canonical renderings of command results."""

from typing import Any, Dict, Iterable, List, Sequence

from tabulate import tabulate

from ..data_layer.log_codec import canonical_json
from ..data_layer.store import Snapshot
from ..models.query import Binding
from ..models.results import (
    AuditReport, BenchmarkResult, DiscoveryResult, GapReport, LossReport, PartitionNode, ResolutionVerdict,
    StoreStats, TraceResult,
)
from .models import OutputFormat


def canonical(value: Any) -> str:
    return canonical_json(value)


def table(rows: Iterable[Sequence[Any]], headers: Sequence[str]) -> str:
    return tabulate(list(rows), headers=list(headers), tablefmt="simple", disable_numparse=True)


def _conf(value: float) -> str:
    return f"{value:.2f}"


def edges_table(snapshot: Snapshot, edge_ids: Iterable[str]) -> str:
    rows = []
    for edge_id in sorted(edge_ids):
        edge = snapshot.edge(edge_id)
        rows.append((edge.id, edge.name, edge.arity, _conf(edge.confidence), str(edge.valid_time)))
    return table(rows, ("edge", "name", "arity", "confidence", "valid_time"))


def bindings_table(bindings: List[Binding], variables: Sequence[str]) -> str:
    headers = list(variables) + [f"edge{i + 1}" for i in range(len(bindings[0].edges))] if bindings else list(variables)
    rows = [[b.variables.get(v, "") for v in variables] + list(b.edges) for b in bindings]
    return table(rows, headers)


def counts_table(counts: Dict[str, int]) -> str:
    return table(sorted(counts.items()), ("payload_type", "count"))


def trace_table(trace: TraceResult) -> str:
    rows = []
    for node in trace.tree.walk():
        rows.append((
            "  " * node.depth + node.edge_id,
            node.name,
            _conf(node.confidence),
            "" if node.link_confidence is None else _conf(node.link_confidence),
            _conf(node.context_modifier),
            node.mechanism or "",
            f"{node.chain_confidence:.6f}",
            ",".join(node.inhibitors),
        ))
    text = table(rows, ("edge", "name", "confidence", "link", "context", "mechanism", "chain", "inhibitors"))
    if trace.pruned:
        text += "\npruned: " + ", ".join(trace.pruned)
    return text


def _partition_rows(node: PartitionNode, prefix: str = "") -> List[Sequence[Any]]:
    rows: List[Sequence[Any]] = []
    for value, (supports, refutes) in node.counts.items():
        label = f"{prefix}{node.attribute}={value}"
        rows.append((label, supports, refutes))
        child = node.children.get(value)
        if child is not None:
            rows.extend(_partition_rows(child, prefix=label + " & "))
    return rows


def discovery_table(result: DiscoveryResult) -> str:
    if result.no_separator:
        return f"NoSeparator: no attribute separates the claims on {result.proposition}"
    lines = [
        f"proposition: {result.proposition}",
        f"best attribute: {result.best_attribute}",
        f"gain: {result.gain:.4f} bits of {result.label_entropy:.4f}",
    ]
    rows = (
        _partition_rows(result.residual_tree) if result.residual_tree is not None
        else [(f"{result.best_attribute}={value}", pos, neg) for value, (pos, neg) in result.partition.items()]
    )
    lines.append(table(rows, ("context", "supports", "refutes")))
    if result.residual_tree is not None and any(_needs_review(result.residual_tree)):
        lines.append("some branches stay mixed at the depth cap; review them by hand")
    return "\n".join(lines)


def _needs_review(node: PartitionNode):
    yield node.needs_review
    for child in node.children.values():
        yield from _needs_review(child)


def verdict_text(verdict: ResolutionVerdict) -> str:
    lines = [f"verdict: {verdict.verdict.value}" + (f" ({verdict.tier.value})" if verdict.tier else "")]
    if verdict.context:
        lines.append("context: " + ", ".join(verdict.context))
    lines.extend(f"  {step}" for step in verdict.rationale)
    return "\n".join(lines)


def audit_text(report: AuditReport) -> str:
    rows = [
        (report.edge_a, ", ".join(report.chain_a), ", ".join(report.faulty_a)),
        (report.edge_b, ", ".join(report.chain_b), ", ".join(report.faulty_b)),
    ]
    lines = [table(rows, ("belief", "causal history", f"sources below {report.kappa_floor}"))]
    lines.append(f"recommendation: {report.recommendation or 'none'}")
    if report.explanation_edge:
        lines.append(f"explanation: {report.explanation_edge}")
    return "\n".join(lines)


def benchmark_table(results: List[BenchmarkResult]) -> str:
    rows = [(r.query_id, r.description, "pass" if r.passed else "FAIL", r.detail) for r in results]
    return table(rows, ("query", "description", "result", "detail"))


def loss_table(report: LossReport, gap: GapReport) -> str:
    rows = [
        ("edges", len(report.per_edge_bits)),
        ("average arity", f"{report.avg_arity:.3f}"),
        ("ambiguity bits (sum of C(n,2))", report.total_bits),
        ("uniform-arity bound", f"{report.theorem_bound:.3f}"),
        ("edge identity bits (sum of log2 C(n,2))", f"{report.edge_identity_bits:.3f}"),
    ]
    components = gap.components
    rows += [
        ("structural bits", f"{components.structural:.0f}"),
        ("temporal bits", f"{components.temporal:.0f}"),
        ("confidence bits", f"{components.confidence:.0f}"),
        ("causal bits", f"{components.causal:.0f}"),
    ]
    if gap.missing:
        rows.append((f"gap without {'+'.join(p.value for p in gap.missing)}", f"{gap.total_bits:.0f}"))
    return table(rows, ("measure", components.label))


def stats_table(stats: StoreStats) -> str:
    rows = [
        ("as_of_seq", stats.as_of_seq),
        ("vertices", stats.vertices),
        ("edges", stats.edges),
        ("terminated", stats.terminated),
        *((f"links ({kind})", n) for kind, n in sorted(stats.links.items())),
        ("assessments", stats.assessments),
        ("context rules", stats.rules),
        ("average arity", f"{stats.avg_arity:.3f}"),
    ]
    return table(rows, ("measure", "value"))


def render(value: Any, fmt: OutputFormat, text: str) -> str:
    """``text`` for table output, else the canonical form of ``value``."""
    return canonical(value) if fmt is OutputFormat.CANONICAL else text



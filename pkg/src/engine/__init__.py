"""Query engines over store snapshots."""

from .benchmark import BenchmarkSuite, run_benchmark_suite
from .causal import (
    active_defaults,
    chains,
    combine_paths,
    combined_confidence,
    context_modifier,
    detect_shared_ancestors,
    effective_depth,
    format_chain,
    propagate_confidence,
    trace_causal_chain,
)
from .conflict import (
    accumulate_claim,
    causal_audit,
    detect_contradiction,
    discover_hidden_context,
    information_gain,
    resolve,
    split_on_context,
)
from .projection import (
    ambiguity_bound,
    count_preimages,
    expressiveness_gap,
    project_as_store,
    project_binary,
)
from .query import QueryEvaluator, evaluate, is_alpha_acyclic, parse_query
from .temporal import at_time, blast_radius, status_of, valid_in_interval

__all__ = [
    # Temporal
    'at_time',
    'valid_in_interval',
    'blast_radius',
    'status_of',

    # Causal
    'trace_causal_chain',
    'propagate_confidence',
    'context_modifier',
    'combine_paths',
    'detect_shared_ancestors',
    'effective_depth',
    'active_defaults',
    'chains',
    'combined_confidence',
    'format_chain',

    # Conflict
    'accumulate_claim',
    'detect_contradiction',
    'information_gain',
    'discover_hidden_context',
    'split_on_context',
    'resolve',
    'causal_audit',

    # Query
    'parse_query',
    'is_alpha_acyclic',
    'evaluate',
    'QueryEvaluator',

    # Projection
    'project_binary',
    'project_as_store',
    'ambiguity_bound',
    'count_preimages',
    'expressiveness_gap',

    # Benchmark
    'BenchmarkSuite',
    'run_benchmark_suite',
]

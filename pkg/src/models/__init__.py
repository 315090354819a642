"""Models package for the hypergraph store."""

from .errors import (
    ATCHError, UsageError, DomainError, ParseError, QuerySyntaxError, ConfigError, FixtureMissing,
    ValidationFailed, EmptyParticipants, UnresolvedRef, ConfidenceOutOfRange, MalformedInterval,
    CausalCycle, DuplicateId, UnknownEdge, EndBeforeStart, SeqOutOfRange, EmptyPathSet,
    DepthDomainError, ThresholdDomainError, EmptyObservations, NoAttributes, ZeroGain, NotInConflict,
    CyclicPattern, UnknownConstant, TooLarge,
)
from .temporal import FOREVER, TimeInterval, format_timestamp, parse_timestamp, utc_now
from .predicates import AttributeValue, Attributes, Comparison, MISSING
from .hypergraph import ClaimTag, Hyperedge, Participant, Polarity, Vertex
from .causal import CausalLink, ConfidenceAssessment, ContextRule, LinkKind, RuleCondition, RuleSide
from .records import (
    AddAssessment, AddCausalLink, AddContextRule, AddHyperedge, AddVertex, EventRecord,
    PayloadType, TerminateHyperedge,
)
from .query import (
    AcyclicityResult, AttributePredicate, Binding, EdgeTemplate, JoinTree, PatternQuery,
    TemplateTerm, TermKind,
)
from .results import (
    AuditReport, BenchmarkResult, BinaryGraph, CausalChain, ChainLink, ChainLinkSpec, ChainNode,
    ChainSpec, ClaimCluster, CombinationMode, ComponentBits, ContradictionSignal, Direction,
    DiscoveryResult, GapReport, LossReport, Observation, PartitionNode, PathRelation, Pillar,
    ResolutionTier, ResolutionVerdict, StoreStats, TemporalQueryResult, TraceNode, TraceResult,
    VerdictKind,
)

__all__ = [
    # Errors
    'ATCHError', 'UsageError', 'DomainError', 'ParseError', 'QuerySyntaxError', 'ConfigError',
    'FixtureMissing', 'ValidationFailed', 'EmptyParticipants', 'UnresolvedRef',
    'ConfidenceOutOfRange', 'MalformedInterval', 'CausalCycle', 'DuplicateId', 'UnknownEdge',
    'EndBeforeStart', 'SeqOutOfRange', 'EmptyPathSet', 'DepthDomainError', 'ThresholdDomainError',
    'EmptyObservations', 'NoAttributes', 'ZeroGain', 'NotInConflict', 'CyclicPattern', 'UnknownConstant', 'TooLarge',

    # Core model
    'FOREVER', 'TimeInterval', 'format_timestamp', 'parse_timestamp', 'utc_now',
    'AttributeValue', 'Attributes', 'Comparison', 'MISSING',
    'ClaimTag', 'Hyperedge', 'Participant', 'Polarity', 'Vertex',
    'CausalLink', 'ConfidenceAssessment', 'ContextRule', 'LinkKind', 'RuleCondition', 'RuleSide',

    # Log records
    'AddAssessment', 'AddCausalLink', 'AddContextRule', 'AddHyperedge', 'AddVertex',
    'EventRecord', 'PayloadType', 'TerminateHyperedge',

    # Queries
    'AcyclicityResult', 'AttributePredicate', 'Binding', 'EdgeTemplate', 'JoinTree',
    'PatternQuery', 'TemplateTerm', 'TermKind',

    # Results
    'AuditReport', 'BenchmarkResult', 'BinaryGraph', 'CausalChain', 'ChainLink', 'ChainLinkSpec',
    'ChainNode', 'ChainSpec', 'ClaimCluster', 'CombinationMode', 'ComponentBits',
    'ContradictionSignal', 'Direction', 'DiscoveryResult', 'GapReport', 'LossReport',
    'Observation', 'PartitionNode', 'PathRelation', 'Pillar', 'ResolutionTier',
    'ResolutionVerdict', 'StoreStats', 'TemporalQueryResult', 'TraceNode', 'TraceResult',
    'VerdictKind',
]

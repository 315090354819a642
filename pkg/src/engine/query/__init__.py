"""Conjunctive pattern queries: language, planning and evaluation."""

from .evaluator import QueryEvaluator, evaluate, match_template
from .grammar import parse_query
from .planner import is_alpha_acyclic

__all__ = [
    'parse_query',
    'is_alpha_acyclic',
    'evaluate',
    'match_template',
    'QueryEvaluator',
]

"""Data layer: the append-only store, its log format, indexes and fixtures."""

from .fixtures import FixtureLibrary, document_payloads, load_document
from .interval_index import IntervalIndex
from .log_codec import canonical_json, decode_line, encode_record, read_log, write_log
from .store import HypergraphStore, Snapshot, SnapshotBuilder
from .validators import HyperedgeValidator, Violation, new_hyperedge, validate

__all__ = [
    'HypergraphStore',
    'Snapshot',
    'SnapshotBuilder',
    'IntervalIndex',
    'canonical_json',
    'encode_record',
    'decode_line',
    'read_log',
    'write_log',
    'HyperedgeValidator',
    'Violation',
    'validate',
    'new_hyperedge',
    'FixtureLibrary',
    'document_payloads',
    'load_document',
]

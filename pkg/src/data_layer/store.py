"""Append-only bitemporal hypergraph store.

Every mutation is an EventRecord appended to the log; Snapshots are immutable
materializations of a log prefix. A single writer appends under a lock while
any number of readers work on Snapshots.
"""

import bisect
import os
import threading
from collections import OrderedDict, defaultdict
from datetime import datetime
from pathlib import Path
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Set, Tuple, Union

import networkx as nx
import structlog

from ..models.causal import CausalLink, ConfidenceAssessment, ContextRule, LinkKind
from ..models.errors import (
    CausalCycle, DuplicateId, EndBeforeStart, SeqOutOfRange, UnknownEdge, ValidationFailed,
)
from ..models.hypergraph import Hyperedge, Polarity, Vertex
from ..models.records import (
    AddAssessment, AddCausalLink, AddContextRule, AddHyperedge, AddVertex, EventRecord,
    PayloadType, TerminateHyperedge,
)
from ..models.results import StoreStats
from ..models.temporal import FOREVER, TimeInterval, format_timestamp, ticks, utc_now
from ..utils.probability import noisy_or
from .interval_index import IntervalIndex
from .log_codec import canonical_json, encode_record, read_log
from .validators import HyperedgeValidator, raise_for

try:
    import fcntl
except ImportError:  # pragma: no cover - non-POSIX
    fcntl = None

logger = structlog.get_logger(__name__)

PayloadLike = Union[AddVertex, AddHyperedge, TerminateHyperedge, AddCausalLink, AddAssessment, AddContextRule]

CONFIDENCE_POLICIES = ("latest", "noisy_or")


class Snapshot:
    """Immutable state as of ``as_of_seq``; all query engines read from snapshots."""

    def __init__(self, builder: "SnapshotBuilder"):
        self.as_of_seq = builder.seq
        self.as_of_tx = builder.last_tx
        self.confidence_policy = builder.confidence_policy
        self._vertices: Dict[str, Vertex] = dict(builder.vertices)
        self._raw_edges: Dict[str, Hyperedge] = dict(builder.edges)
        self._terminations: Dict[str, datetime] = dict(builder.terminations)
        self._assessments: Dict[str, Tuple[ConfidenceAssessment, ...]] = {
            k: tuple(v) for k, v in builder.assessments.items()
        }
        self._links: Tuple[CausalLink, ...] = tuple(builder.links.values())
        self._rules: Tuple[ContextRule, ...] = tuple(builder.rules.values())
        self._claims: Dict[Tuple[str, Polarity], Tuple[str, ...]] = {k: tuple(v) for k, v in builder.claims.items()}
        self._participants: Dict[str, frozenset] = {k: frozenset(v) for k, v in builder.participants.items()}
        self._graph = nx.freeze(builder.graph.copy())
        self._effective: Dict[str, Hyperedge] = {}
        self._index: Optional[IntervalIndex] = None
        self._lock = threading.Lock()

    # Retrieval

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._raw_edges

    def has_vertex(self, vertex_id: str) -> bool:
        return vertex_id in self._vertices

    def has_ref(self, ref: str) -> bool:
        return ref in self._raw_edges or ref in self._vertices

    def vertex(self, vertex_id: str) -> Vertex:
        return self._vertices[vertex_id]

    def vertices(self) -> List[Vertex]:
        return [self._vertices[k] for k in sorted(self._vertices)]

    def edge_ids(self) -> List[str]:
        return sorted(self._raw_edges)

    def __len__(self) -> int:
        return len(self._raw_edges)

    def raw_edge(self, edge_id: str) -> Hyperedge:
        """The edge exactly as appended (plus its tx_time)."""
        try:
            return self._raw_edges[edge_id]
        except KeyError:
            raise UnknownEdge(f"no edge {edge_id!r} as of seq {self.as_of_seq}") from None

    def edge(self, edge_id: str) -> Hyperedge:
        """The edge with effective valid_time and effective confidence."""
        cached = self._effective.get(edge_id)
        if cached is not None:
            return cached
        raw = self.raw_edge(edge_id)
        effective = raw.model_copy(update={
            "valid_time": raw.valid_time.narrowed_to(self.effective_end(edge_id)),
            "confidence": self.effective_confidence(edge_id),
        })
        with self._lock:
            self._effective[edge_id] = effective
        return effective

    def edges(self) -> Iterator[Hyperedge]:
        for edge_id in self.edge_ids():
            yield self.edge(edge_id)

    def effective_end(self, edge_id: str) -> datetime:
        raw = self.raw_edge(edge_id)
        end = self._terminations.get(edge_id)
        return raw.valid_time.end if end is None else min(raw.valid_time.end, end)

    def is_terminated(self, edge_id: str) -> bool:
        return edge_id in self._terminations

    def assessments(self, edge_id: str) -> List[ConfidenceAssessment]:
        """Assessments of ``edge_id`` in log order."""
        self.raw_edge(edge_id)
        return list(self._assessments.get(edge_id, ()))

    def effective_confidence(self, edge_id: str) -> float:
        raw = self.raw_edge(edge_id)
        history = self._assessments.get(edge_id)
        if not history:
            return raw.confidence
        if self.confidence_policy == "noisy_or":
            return noisy_or(a.value for a in history)
        # Log order is tx order, so the last assessment is the latest.
        return history[-1].value

    # Causal order

    @property
    def graph(self) -> nx.MultiDiGraph:
        """Frozen causal order; every link kind is an arc keyed by its kind."""
        return self._graph

    def links(self, kind: Optional[LinkKind] = None) -> List[CausalLink]:
        return [link for link in self._links if kind is None or link.kind is kind]

    def in_links(self, edge_id: str, kind: Optional[LinkKind] = None) -> List[CausalLink]:
        if edge_id not in self._graph:
            return []
        return sorted(
            (data["link"] for _, _, data in self._graph.in_edges(edge_id, data=True)
             if kind is None or data["link"].kind is kind),
            key=lambda link: link.key,
        )

    def out_links(self, edge_id: str, kind: Optional[LinkKind] = None) -> List[CausalLink]:
        if edge_id not in self._graph:
            return []
        return sorted(
            (data["link"] for _, _, data in self._graph.out_edges(edge_id, data=True)
             if kind is None or data["link"].kind is kind),
            key=lambda link: link.key,
        )

    def rules(self) -> List[ContextRule]:
        return list(self._rules)

    # Secondary indexes

    def claim_members(self, proposition: str, polarity: Polarity) -> List[str]:
        return list(self._claims.get((proposition, polarity), ()))

    def edges_involving(self, ref: str) -> Set[str]:
        """Edges that list ``ref`` (an entity or an edge) as a participant."""
        return set(self._participants.get(ref, ()))

    @property
    def interval_index(self) -> IntervalIndex:
        if self._index is None:
            index = IntervalIndex(
                (ticks(edge.valid_time.start), ticks(self.effective_end(edge_id)), edge_id)
                for edge_id, edge in self._raw_edges.items()
                if edge.valid_time.start <= self.effective_end(edge_id)
            )
            with self._lock:
                self._index = index
        return self._index

    def valid_at(self, t: datetime) -> Set[str]:
        return self.interval_index.stab(ticks(t))

    def valid_during(self, interval: TimeInterval) -> Set[str]:
        return self.interval_index.overlap(ticks(interval.start), ticks(interval.end))

    # Canonical form

    def canonical(self) -> str:
        """Deterministic text form; two snapshots are equal iff these are equal."""
        return canonical_json({
            "as_of_seq": self.as_of_seq,
            "vertices": [v.model_dump(mode="json") for v in self.vertices()],
            "edges": [e.model_dump(mode="json") for e in self.edges()],
            "links": [l.model_dump(mode="json") for l in sorted(self._links, key=lambda l: l.key)],
            "assessments": [
                a.model_dump(mode="json") for edge_id in sorted(self._assessments) for a in self._assessments[edge_id]
            ],
            "rules": [r.model_dump(mode="json") for r in sorted(self._rules, key=lambda r: r.id)],
        })

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Snapshot) and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __repr__(self) -> str:
        return f"Snapshot(as_of_seq={self.as_of_seq}, edges={len(self._raw_edges)}, links={len(self._links)})"


class SnapshotBuilder:
    """Mutable replay target: validates payloads and applies records."""

    def __init__(self, confidence_policy: str = "latest"):
        if confidence_policy not in CONFIDENCE_POLICIES:
            raise ValueError(f"unknown confidence policy {confidence_policy!r}")
        self.confidence_policy = confidence_policy
        self.seq = 0
        self.last_tx: Optional[datetime] = None
        self.vertices: Dict[str, Vertex] = {}
        self.edges: Dict[str, Hyperedge] = {}
        self.terminations: Dict[str, datetime] = {}
        self.assessments: Dict[str, List[ConfidenceAssessment]] = defaultdict(list)
        self.links: "OrderedDict[tuple, CausalLink]" = OrderedDict()
        self.rules: "OrderedDict[str, ContextRule]" = OrderedDict()
        self.claims: Dict[Tuple[str, Polarity], List[str]] = defaultdict(list)
        self.participants: Dict[str, Set[str]] = defaultdict(set)
        self.graph = nx.MultiDiGraph()

    def has_ref(self, ref: str) -> bool:
        return ref in self.vertices or ref in self.edges

    def check(self, payload: PayloadLike) -> None:
        """Raise the domain error that appending ``payload`` would cause."""
        if isinstance(payload, AddVertex):
            vertex = payload.vertex
            if not vertex.id:
                raise ValidationFailed("vertex id must be non-empty")
            if self.has_ref(vertex.id):
                raise DuplicateId(f"id {vertex.id!r} is already in use")

        elif isinstance(payload, AddHyperedge):
            edge = payload.edge
            if edge.id and self.has_ref(edge.id):
                raise DuplicateId(f"id {edge.id!r} is already in use")
            raise_for(HyperedgeValidator.validate_edge(edge, self.has_ref))

        elif isinstance(payload, TerminateHyperedge):
            edge = self.edges.get(payload.edge_id)
            if edge is None:
                raise UnknownEdge(f"no edge {payload.edge_id!r}")
            if payload.end < edge.valid_time.start:
                raise EndBeforeStart(
                    f"end {format_timestamp(payload.end)} is before start {format_timestamp(edge.valid_time.start)}"
                )

        elif isinstance(payload, AddCausalLink):
            link = payload.link
            raise_for(HyperedgeValidator.validate_link(link, self.edges.__contains__))
            if link.key in self.links:
                raise DuplicateId(f"link {link.cause} -> {link.effect} ({link.kind.value}) already exists")
            if link.effect in self.graph and link.cause in self.graph and nx.has_path(self.graph, link.effect, link.cause):
                raise CausalCycle(f"link {link.cause} -> {link.effect} would close a cycle")

        elif isinstance(payload, AddAssessment):
            raise_for(HyperedgeValidator.validate_assessment(payload.assessment, self.edges.__contains__))

        elif isinstance(payload, AddContextRule):
            if payload.rule.id in self.rules:
                raise DuplicateId(f"context rule {payload.rule.id!r} already exists")

    def apply(self, record: EventRecord, validate: bool = True) -> None:
        if record.seq <= self.seq:
            raise SeqOutOfRange(f"seq {record.seq} does not follow {self.seq}")
        payload = record.payload
        if validate:
            self.check(payload)

        if isinstance(payload, AddVertex):
            self.vertices[payload.vertex.id] = payload.vertex

        elif isinstance(payload, AddHyperedge):
            edge = payload.edge.model_copy(update={"tx_time": TimeInterval(start=record.tx_time, end=FOREVER)})
            self.edges[edge.id] = edge
            for ref in edge.refs:
                self.participants[ref].add(edge.id)
            if edge.claim is not None:
                self.claims[(edge.claim.proposition, edge.claim.polarity)].append(edge.id)

        elif isinstance(payload, TerminateHyperedge):
            current = self.terminations.get(payload.edge_id)
            self.terminations[payload.edge_id] = payload.end if current is None else min(current, payload.end)

        elif isinstance(payload, AddCausalLink):
            link = payload.link
            self.links[link.key] = link
            self.graph.add_edge(link.cause, link.effect, key=link.kind.value, link=link)

        elif isinstance(payload, AddAssessment):
            assessment = payload.assessment.model_copy(update={"tx_time": record.tx_time})
            self.assessments[assessment.target].append(assessment)

        elif isinstance(payload, AddContextRule):
            self.rules[payload.rule.id] = payload.rule

        self.seq = record.seq
        self.last_tx = record.tx_time

    def freeze(self) -> Snapshot:
        return Snapshot(self)


def _strip_store_fields(payload: PayloadLike) -> PayloadLike:
    """Drop caller-supplied tx_time; the store assigns it exactly once."""
    if isinstance(payload, AddHyperedge) and payload.edge.tx_time is not None:
        return AddHyperedge(edge=payload.edge.model_copy(update={"tx_time": None}))
    if isinstance(payload, AddAssessment) and payload.assessment.tx_time is not None:
        return AddAssessment(assessment=payload.assessment.model_copy(update={"tx_time": None}))
    return payload


class HypergraphStore:
    """Append-only event log with snapshot materialization."""

    def __init__(
        self,
        confidence_policy: str = "latest",
        snapshot_cache_size: int = 16,
        clock: Callable[[], datetime] = utc_now,
    ):
        """Initialize an empty in-memory store."""
        self.confidence_policy = confidence_policy
        self.snapshot_cache_size = max(1, snapshot_cache_size)
        self.clock = clock
        self.path: Optional[Path] = None

        self._records: List[EventRecord] = []
        self._seqs: List[int] = []
        self._live = SnapshotBuilder(confidence_policy)
        self._cache: "OrderedDict[int, Snapshot]" = OrderedDict()
        self._write_lock = threading.Lock()
        self._persisted = 0
        self._lock_file = None

    # Log access

    @property
    def last_seq(self) -> int:
        return self._seqs[-1] if self._seqs else 0

    @property
    def records(self) -> List[EventRecord]:
        return list(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def log_lines(self) -> List[str]:
        return [encode_record(r) + "\n" for r in self._records]

    # Writes

    def append(self, payload: PayloadLike, tx_time: Optional[datetime] = None) -> int:
        """Validate and append a payload; returns the new record's seq."""
        payload = _strip_store_fields(payload)
        with self._write_lock:
            try:
                self._live.check(payload)
            except Exception as e:
                logger.warning("append rejected", payload_type=payload.kind, error=str(e))
                raise

            tx = tx_time if tx_time is not None else self.clock()
            if self._live.last_tx is not None and tx < self._live.last_tx:
                tx = self._live.last_tx
            record = EventRecord(seq=self.last_seq + 1, tx_time=tx, payload=payload)
            self._live.apply(record, validate=False)
            self._records.append(record)
            self._seqs.append(record.seq)

        logger.debug("record appended", seq=record.seq, payload_type=payload.kind, ref=_payload_ref(payload))
        return record.seq

    def add_vertex(self, vertex: Vertex, tx_time: Optional[datetime] = None) -> int:
        return self.append(AddVertex(vertex=vertex), tx_time)

    def add_hyperedge(self, edge: Hyperedge, tx_time: Optional[datetime] = None) -> int:
        return self.append(AddHyperedge(edge=edge), tx_time)

    def terminate(self, edge_id: str, end_time: datetime, tx_time: Optional[datetime] = None) -> int:
        """Narrow an edge's validity; the original record stays in the log."""
        return self.append(TerminateHyperedge(edge_id=edge_id, end=end_time), tx_time)

    def add_link(self, link: CausalLink, tx_time: Optional[datetime] = None) -> int:
        return self.append(AddCausalLink(link=link), tx_time)

    def add_assessment(self, assessment: ConfidenceAssessment, tx_time: Optional[datetime] = None) -> int:
        return self.append(AddAssessment(assessment=assessment), tx_time)

    def add_context_rule(self, rule: ContextRule, tx_time: Optional[datetime] = None) -> int:
        return self.append(AddContextRule(rule=rule), tx_time)

    def ingest(self, records: Iterable[EventRecord]) -> Dict[str, int]:
        """Append records read from another log, re-sequenced after this store's tail."""
        counts = {t.value: 0 for t in PayloadType}
        for record in records:
            self.append(record.payload, record.tx_time)
            counts[record.payload_type.value] += 1
        return counts

    # Reads

    def snapshot(self, as_of_seq: Optional[int] = None) -> Snapshot:
        """Immutable snapshot of the log prefix up to ``as_of_seq`` (default: current)."""
        with self._write_lock:
            last = self.last_seq
            seq = last if as_of_seq is None else as_of_seq
            if seq < 0 or seq > last:
                raise SeqOutOfRange(f"as_of_seq {seq} outside 0..{last}")

            cached = self._cache.get(seq)
            if cached is not None:
                self._cache.move_to_end(seq)
                return cached

            if seq == last:
                snap = self._live.freeze()
            else:
                builder = SnapshotBuilder(self.confidence_policy)
                upto = bisect.bisect_right(self._seqs, seq)
                for record in self._records[:upto]:
                    builder.apply(record, validate=False)
                snap = builder.freeze()

            self._cache[snap.as_of_seq] = snap
            while len(self._cache) > self.snapshot_cache_size:
                self._cache.popitem(last=False)
        return snap

    def snapshot_at_tx(self, t: datetime) -> Snapshot:
        """Snapshot of what the store knew at transaction time ``t``."""
        known = [r.seq for r in self._records if r.tx_time <= t]
        return self.snapshot(known[-1] if known else 0)

    def get(self, edge_id: str, snapshot: Optional[Snapshot] = None) -> Hyperedge:
        """Fetch an edge by id alone, with effective validity and confidence."""
        return (snapshot or self.snapshot()).edge(edge_id)

    def stats(self, snapshot: Optional[Snapshot] = None) -> StoreStats:
        snap = snapshot or self.snapshot()
        edges = list(snap.edges())
        links = {kind.value: len(snap.links(kind)) for kind in LinkKind}
        return StoreStats(
            as_of_seq=snap.as_of_seq,
            vertices=len(snap.vertices()),
            edges=len(edges),
            terminated=sum(1 for e in edges if snap.is_terminated(e.id)),
            links=links,
            assessments=sum(len(snap.assessments(e.id)) for e in edges),
            rules=len(snap.rules()),
            avg_arity=(sum(e.arity for e in edges) / len(edges)) if edges else 0.0,
        )

    # Persistence

    @classmethod
    def replay(cls, lines: Iterable[str], **kwargs) -> "HypergraphStore":
        """Rebuild a store from log lines, keeping their seq and tx_time verbatim."""
        store = cls(**kwargs)
        for record in read_log(lines):
            store._live.apply(record, validate=True)
            store._records.append(record)
            store._seqs.append(record.seq)
        store._persisted = len(store._records)
        logger.info("log replayed", records=len(store._records), last_seq=store.last_seq)
        return store

    @classmethod
    def open(cls, path: Union[str, Path], writable: bool = False, **kwargs) -> "HypergraphStore":
        """Load a store from a log file; a missing file is an empty store.

        A writable store holds an exclusive lock on the file until closed.
        """
        path = Path(path)
        lock_file = None
        if writable:
            path.parent.mkdir(parents=True, exist_ok=True)
            lock_file = open(path, "a", encoding="utf-8")
            if fcntl is not None:
                fcntl.flock(lock_file.fileno(), fcntl.LOCK_EX)

        if path.exists():
            with open(path, "r", encoding="utf-8") as f:
                store = cls.replay(f, **kwargs)
        else:
            store = cls(**kwargs)
        store.path = path
        store._lock_file = lock_file
        return store

    def save(self, path: Union[str, Path, None] = None) -> int:
        """Append not-yet-persisted records to the log file; returns how many were written."""
        target = Path(path) if path is not None else self.path
        if target is None:
            raise ValueError("no log path to save to")
        pending = self._records[self._persisted:] if target == self.path else self._records
        mode = "a" if target == self.path else "w"
        with open(target, mode, encoding="utf-8") as f:
            for record in pending:
                f.write(encode_record(record) + "\n")
            f.flush()
            os.fsync(f.fileno())
        if target == self.path:
            self._persisted = len(self._records)
        logger.debug("log saved", path=str(target), written=len(pending))
        return len(pending)

    def close(self) -> None:
        if self._lock_file is not None:
            if fcntl is not None:
                fcntl.flock(self._lock_file.fileno(), fcntl.LOCK_UN)
            self._lock_file.close()
            self._lock_file = None

    def __enter__(self) -> "HypergraphStore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def _payload_ref(payload: PayloadLike) -> str:
    if isinstance(payload, AddVertex):
        return payload.vertex.id
    if isinstance(payload, AddHyperedge):
        return payload.edge.id
    if isinstance(payload, TerminateHyperedge):
        return payload.edge_id
    if isinstance(payload, AddCausalLink):
        return f"{payload.link.cause}->{payload.link.effect}"
    if isinstance(payload, AddAssessment):
        return payload.assessment.target
    return payload.rule.id

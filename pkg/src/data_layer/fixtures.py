"""Declarative YAML fixtures: worked examples loaded into a store."""

from datetime import datetime, timedelta
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import structlog
import yaml
from pydantic import ValidationError

from ..models.causal import CausalLink, ConfidenceAssessment, ContextRule
from ..models.errors import ConfigError, FixtureMissing, ValidationFailed
from ..models.hypergraph import Hyperedge, Vertex
from ..models.records import (
    AddAssessment, AddCausalLink, AddContextRule, AddHyperedge, AddVertex, PayloadType,
    TerminateHyperedge,
)
from ..models.temporal import parse_timestamp
from .store import HypergraphStore, PayloadLike

logger = structlog.get_logger(__name__)

DEFAULT_FIXTURE_FILE = Path(__file__).resolve().parents[2] / "data" / "fixtures.yaml"

_RECORD_STEP = timedelta(seconds=1)

TimedPayload = Tuple[PayloadLike, Optional[datetime]]


def _expand_group(group: Mapping[str, Any]) -> List[Dict[str, Any]]:
    """Generate ``count`` edges from a template; ``{cycle: [...]}`` values rotate per edge."""
    count = int(group["count"])
    prefix = group["id_prefix"]
    edges = []
    for i in range(count):
        attributes = {}
        for key, value in group.get("attributes", {}).items():
            if isinstance(value, dict) and "cycle" in value:
                value = value["cycle"][i % len(value["cycle"])]
            attributes[key] = value
        spec = {k: v for k, v in group.items() if k not in ("count", "id_prefix", "attributes")}
        spec.update(id=f"{prefix}{i + 1:02d}", attributes=attributes)
        edges.append(spec)
    return edges


def document_payloads(doc: Mapping[str, Any], name: str = "<document>") -> List[TimedPayload]:
    """Translate one fixture document into payloads with their transaction times."""
    entries: List[Tuple[PayloadLike, Any]] = []

    try:
        for v in doc.get("vertices", []):
            vertex = Vertex(id=v) if isinstance(v, str) else Vertex(**v)
            entries.append((AddVertex(vertex=vertex), None))

        edge_specs = list(doc.get("edges", []))
        for group in doc.get("edge_groups", []):
            edge_specs.extend(_expand_group(group))
        for spec in edge_specs:
            spec = dict(spec)
            tx = spec.pop("tx_time", None)
            entries.append((AddHyperedge(edge=Hyperedge(**spec)), tx))

        for t in doc.get("terminations", []):
            entries.append((TerminateHyperedge(edge_id=t["edge_id"], end=t["end"]), t.get("tx_time")))

        for spec in doc.get("links", []):
            spec = dict(spec)
            tx = spec.pop("tx_time", None)
            entries.append((AddCausalLink(link=CausalLink(**spec)), tx))

        for spec in doc.get("rules", []):
            entries.append((AddContextRule(rule=ContextRule(**spec)), None))

        for spec in doc.get("assessments", []):
            spec = dict(spec)
            tx = spec.pop("tx_time", None)
            entries.append((AddAssessment(assessment=ConfidenceAssessment(**spec)), tx))
    except (ValidationError, KeyError, TypeError, ValueError) as e:
        raise ValidationFailed(f"fixture {name!r}: {e}") from e

    # First record at tx_start, each later one a second after its predecessor.
    tx_start = doc.get("tx_start")
    previous: Optional[datetime] = None
    timed: List[TimedPayload] = []
    for payload, explicit in entries:
        if explicit is not None:
            tx = parse_timestamp(explicit)
        elif previous is not None:
            tx = previous + _RECORD_STEP
        elif tx_start is not None:
            tx = parse_timestamp(tx_start)
        else:
            tx = None
        timed.append((payload, tx))
        previous = tx if tx is not None else previous
    return timed


def load_document(store: HypergraphStore, doc: Mapping[str, Any], name: str = "<document>") -> Dict[str, int]:
    """Append a fixture document; returns counts by payload type."""
    counts = {t.value: 0 for t in PayloadType}
    for payload, tx in document_payloads(doc, name):
        store.append(payload, tx)
        counts[payload.kind] += 1
    logger.info("fixture loaded", fixture=name, records=sum(counts.values()))
    return counts


class FixtureLibrary:
    """Named fixtures from a YAML file (bundled data/fixtures.yaml by default)."""

    def __init__(self, fixture_file: Union[str, Path, None] = None):
        """Initialize fixture library."""
        self.fixture_file = Path(fixture_file) if fixture_file else DEFAULT_FIXTURE_FILE
        self._data = self._load_fixture_data()

    def _load_fixture_data(self) -> Dict[str, Any]:
        """Load fixtures from YAML file."""
        if not self.fixture_file.exists():
            raise FixtureMissing(f"Fixture file not found: {self.fixture_file}")

        try:
            with open(self.fixture_file, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid fixture file {self.fixture_file}: {e}") from e

        logger.debug("fixtures read", path=str(self.fixture_file), count=len(data.get('fixtures', {})))
        return data

    def names(self) -> List[str]:
        """Get list of all available fixtures."""
        return list(self._data.get('fixtures', {}).keys())

    def get(self, name: str) -> Dict[str, Any]:
        try:
            return self._data['fixtures'][name]
        except KeyError:
            raise FixtureMissing(f"no fixture named {name!r}") from None

    def describe(self, name: str) -> str:
        return self.get(name).get('description', '')

    def payloads(self, name: str) -> List[TimedPayload]:
        return document_payloads(self.get(name), name)

    def load(self, store: HypergraphStore, *names: str) -> Dict[str, int]:
        """Append the named fixtures to ``store`` in the given order."""
        totals = {t.value: 0 for t in PayloadType}
        for name in names:
            for kind, n in load_document(store, self.get(name), name).items():
                totals[kind] += n
        return totals

    def build(self, *names: str, **store_kwargs) -> HypergraphStore:
        """Fresh in-memory store holding the named fixtures."""
        store = HypergraphStore(**store_kwargs)
        self.load(store, *names)
        return store

    def benchmark_names(self) -> List[str]:
        benchmark = self._data.get('benchmark')
        if not benchmark:
            raise FixtureMissing("fixture file has no benchmark section")
        return list(benchmark.get('include', []))

    def benchmark_expectations(self) -> Dict[str, Any]:
        benchmark = self._data.get('benchmark')
        if not benchmark:
            raise FixtureMissing("fixture file has no benchmark section")
        return benchmark.get('expectations', {})

    def benchmark_store(self, **store_kwargs) -> HypergraphStore:
        return self.build(*self.benchmark_names(), **store_kwargs)

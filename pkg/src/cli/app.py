"""Command-line interface: ingest, query, trace, discover, resolve, audit, bench, loss and more.

Exit codes: 0 on success, 1 for usage and parse errors, 2 for domain errors.
Diagnostics go to standard error as ``error: <code>: <message>``.
"""

import argparse
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, TextIO

import structlog
import yaml

from ..config import Config, config as default_config, configure_logging
from ..data_layer.fixtures import FixtureLibrary, load_document
from ..data_layer.log_codec import read_log
from ..data_layer.store import HypergraphStore
from ..engine import causal, conflict, projection, temporal
from ..engine.benchmark import run_benchmark_suite
from ..engine.query import evaluate, parse_query
from ..models.errors import ATCHError, ConfigError, UsageError
from ..models.records import PayloadType
from ..models.results import Direction, Pillar
from ..models.temporal import TimeInterval, parse_timestamp
from . import formatters
from .models import CliConfig, OutputFormat

logger = structlog.get_logger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """Reports bad arguments as UsageError so they share the exit-code contract."""

    def error(self, message: str):
        raise UsageError(message)


def _timestamp(text: str):
    try:
        return parse_timestamp(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _unit(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {value}")
    return value


class Command:
    """State shared by one command invocation."""

    def __init__(self, args: argparse.Namespace, settings: CliConfig, out: TextIO):
        self.args = args
        self.settings = settings
        self.out = out

    @contextmanager
    def store(self, writable: bool = False) -> Iterator[HypergraphStore]:
        with HypergraphStore.open(self.settings.store_path, writable=writable, **self.settings.store_options()) as store:
            yield store
            if writable:
                store.save()

    def emit(self, value: Any, text: str) -> None:
        print(formatters.render(value, self.settings.output_format, text), file=self.out)

    @property
    def canonical(self) -> bool:
        return self.settings.output_format is OutputFormat.CANONICAL


def cmd_ingest(cmd: Command) -> int:
    """Append a log file, a YAML fixture document or bundled fixtures to the store."""
    args = cmd.args
    if not args.path and not args.fixture:
        raise UsageError("ingest needs a file or --fixture NAME")

    counts = {t.value: 0 for t in PayloadType}

    def add(more: Dict[str, int]) -> None:
        for kind, n in more.items():
            counts[kind] += n

    with cmd.store(writable=True) as store:
        if args.fixture:
            library = FixtureLibrary(args.fixtures_file)
            add(library.load(store, *args.fixture))
        if args.path:
            add(_ingest_file(store, Path(args.path)))

    logger.info("ingest complete", records=sum(counts.values()))
    cmd.emit(counts, formatters.counts_table(counts))
    return 0


def _ingest_file(store: HypergraphStore, path: Path) -> Dict[str, int]:
    if not path.exists():
        raise UsageError(f"no such file: {path}")
    with open(path, "r", encoding="utf-8") as f:
        if path.suffix.lower() in (".yaml", ".yml"):
            try:
                doc = yaml.safe_load(f) or {}
            except yaml.YAMLError as e:
                raise ConfigError(f"invalid YAML in {path}: {e}") from e
            return _ingest_yaml(store, doc, path.name)
        return store.ingest(read_log(f))


def _ingest_yaml(store: HypergraphStore, doc: Dict[str, Any], name: str) -> Dict[str, int]:
    if not isinstance(doc, dict):
        raise ConfigError(f"{name} must contain a mapping")
    if "fixtures" not in doc:
        return load_document(store, doc, name)
    counts = {t.value: 0 for t in PayloadType}
    for fixture_name, fixture in doc["fixtures"].items():
        for kind, n in load_document(store, fixture, fixture_name).items():
            counts[kind] += n
    return counts


def cmd_query(cmd: Command) -> int:
    """Evaluate a pattern query."""
    args = cmd.args
    pattern = parse_query(args.text)
    window = TimeInterval.of(args.during[0], args.during[1]) if args.during else None
    pattern = pattern.with_filters(at_time=args.at_time, window=window, min_confidence=args.min_confidence)

    with cmd.store() as store:
        bindings = evaluate(
            store.snapshot(args.as_of_seq), pattern,
            force_bruteforce=args.force_bruteforce or cmd.settings.force_bruteforce,
        )
    cmd.emit(bindings, formatters.bindings_table(bindings, pattern.variables))
    return 0


def cmd_trace(cmd: Command) -> int:
    """Causal history (or future) of an edge."""
    args = cmd.args
    depth = cmd.settings.default_depth if args.depth is None else args.depth
    with cmd.store() as store:
        snapshot = store.snapshot(args.as_of_seq)
        trace = causal.trace_causal_chain(
            snapshot, args.edge_id, depth, as_of=args.as_of, threshold=args.threshold, direction=args.direction,
        )
        if not args.confidence:
            cmd.emit(trace, formatters.trace_table(trace))
            return 0

        found = causal.chains(trace)
        combined = causal.combined_confidence(snapshot, trace, args.mode or cmd.settings.combination_mode)

    if cmd.canonical:
        cmd.emit({"chains": found, "combined_confidence": combined}, "")
        return 0
    lines = []
    for chain in found:
        lines.append(causal.format_chain(chain))
        lines.append(f"Chain confidence: {chain.chain_confidence:.2f}")
    if len(found) > 1:
        lines.append(f"Combined confidence: {combined:.2f}")
    print("\n".join(lines), file=cmd.out)
    return 0


def cmd_at_time(cmd: Command) -> int:
    """Edges valid at an instant."""
    args = cmd.args
    with cmd.store() as store:
        snapshot = store.snapshot(args.as_of_seq)
        if args.active_defaults:
            edges = sorted(causal.active_defaults(snapshot, args.time))
            if args.min_confidence is not None:
                edges = [e for e in edges if snapshot.effective_confidence(e) > args.min_confidence]
            cmd.emit(edges, formatters.edges_table(snapshot, edges))
            return 0
        result = temporal.at_time(snapshot, args.time, min_confidence=args.min_confidence)
        cmd.emit(result, formatters.edges_table(snapshot, result.edges))
    return 0


def cmd_during(cmd: Command) -> int:
    """Edges valid at some point of a closed interval."""
    args = cmd.args
    interval = TimeInterval.of(args.start, args.end)
    with cmd.store() as store:
        snapshot = store.snapshot(args.as_of_seq)
        edges = sorted(temporal.valid_in_interval(snapshot, interval))
        cmd.emit(edges, formatters.edges_table(snapshot, edges))
    return 0


def cmd_status(cmd: Command) -> int:
    """Edges involving an entity at an instant."""
    args = cmd.args
    with cmd.store() as store:
        snapshot = store.snapshot(args.as_of_seq)
        edges = temporal.status_of(snapshot, args.ref, args.time)
        cmd.emit(edges, formatters.edges_table(snapshot, edges))
    return 0


def cmd_blast_radius(cmd: Command) -> int:
    """Causal ancestors and descendants of an edge."""
    args = cmd.args
    with cmd.store() as store:
        snapshot = store.snapshot(args.as_of_seq)
        edges = sorted(temporal.blast_radius(snapshot, args.edge_id))
        cmd.emit(edges, formatters.edges_table(snapshot, edges))
    return 0


def cmd_discover(cmd: Command) -> int:
    """Look for the hidden context behind a contradiction."""
    args = cmd.args
    theta = cmd.settings.theta if args.theta is None else args.theta
    with cmd.store(writable=args.split) as store:
        snapshot = store.snapshot()
        signal = conflict.detect_contradiction(snapshot, args.proposition, theta, member_floor=args.member_floor)
        if signal is None:
            cmd.emit(None, f"no signal: {args.proposition} is not contradicted above {theta}")
            return 0

        discovery = conflict.discover_hidden_context(snapshot, signal, max_depth=cmd.settings.max_partition_depth)
        created = []
        if args.split and not discovery.no_separator:
            created = conflict.split_on_context(store, signal, discovery)

    text = formatters.discovery_table(discovery)
    if created:
        text += "\n" + formatters.table(
            [(e.id, f"{e.confidence:.6f}") for e in created], ("appended edge", "confidence")
        )
    cmd.emit({"discovery": discovery, "appended": [e.id for e in created]}, text)
    return 0


def cmd_resolve(cmd: Command) -> int:
    """Decide between two opposing claims."""
    with cmd.store() as store:
        verdict = conflict.resolve(store.snapshot(), cmd.args.edge_a, cmd.args.edge_b)
    cmd.emit(verdict, formatters.verdict_text(verdict))
    return 0


def cmd_audit(cmd: Command) -> int:
    """Trace two beliefs to their sources and flag an untrustworthy one."""
    args = cmd.args
    floor = cmd.settings.kappa_floor if args.kappa_floor is None else args.kappa_floor
    with cmd.store(writable=True) as store:
        report = conflict.causal_audit(store, args.edge_a, args.edge_b, floor)
    cmd.emit(report, formatters.audit_text(report))
    return 0


def cmd_bench(cmd: Command) -> int:
    """Run the Q1-Q7 reference queries."""
    library = FixtureLibrary(cmd.args.fixtures_file)
    if cmd.args.use_store:
        with cmd.store() as store:
            results = run_benchmark_suite(store, library)
    else:
        results = run_benchmark_suite(library=library)
    cmd.emit(results, formatters.benchmark_table(results))
    return 0 if all(r.passed for r in results) else 2


def cmd_loss(cmd: Command) -> int:
    """Information lost by the binary projection."""
    with cmd.store() as store:
        snapshot = store.snapshot(cmd.args.as_of_seq)
        report = projection.ambiguity_bound(snapshot)
        gap = projection.expressiveness_gap(snapshot, [Pillar(p) for p in cmd.args.missing or []])
    cmd.emit({"loss": report, "gap": gap}, formatters.loss_table(report, gap))
    return 0


def cmd_stats(cmd: Command) -> int:
    with cmd.store() as store:
        stats = store.stats(store.snapshot(cmd.args.as_of_seq))
    cmd.emit(stats, formatters.stats_table(stats))
    return 0


def cmd_export(cmd: Command) -> int:
    """Write the store's log to standard output."""
    with cmd.store() as store:
        cmd.out.write("".join(store.log_lines()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="atch", description="Bitemporal causal hypergraph store")
    parser.add_argument("--store", help="Event log file (default: $ATCH_STORE or store.path)")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], help="Output format")
    parser.add_argument("--config", help="Configuration file (default: $ATCH_CONFIG or config.yaml)")
    parser.add_argument("--log-level", help="Logging level (default: $LOG_LEVEL or logging.level)")
    commands = parser.add_subparsers(dest="command", parser_class=_ArgumentParser, required=True)

    def command(name: str, handler, help_text: str, seq: bool = True) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler)
        if seq:
            sub.add_argument("--as-of-seq", type=int, help="Read the store as of this log position")
        return sub

    sub = command("ingest", cmd_ingest, "Append a log file or YAML fixtures", seq=False)
    sub.add_argument("path", nargs="?", help="Log file, or .yaml/.yml fixture document")
    sub.add_argument("--fixture", action="append", help="Bundled fixture to ingest (repeatable)")
    sub.add_argument("--fixtures-file", help="Fixture library file (default: bundled)")

    sub = command("query", cmd_query, "Evaluate a pattern query")
    sub.add_argument("text", help='Query text, e.g. match (x, ...) where conf > 0.8')
    sub.add_argument("--at-time", type=_timestamp)
    sub.add_argument("--during", nargs=2, type=_timestamp, metavar=("START", "END"))
    sub.add_argument("--min-confidence", type=_unit)
    sub.add_argument("--force-bruteforce", action="store_true", help="Enumerate cyclic patterns by nested loops")

    sub = command("trace", cmd_trace, "Trace the causal history of an edge")
    sub.add_argument("edge_id")
    sub.add_argument("--depth", type=int)
    sub.add_argument("--as-of", type=_timestamp, help="Only follow edges valid at this instant")
    sub.add_argument("--threshold", type=_unit, help="Prune chains below this confidence")
    sub.add_argument("--direction", choices=[d.value for d in Direction], default=Direction.CAUSES.value)
    sub.add_argument("--confidence", action="store_true", help="Print chains with their confidence")
    sub.add_argument("--mode", choices=["noisy_or", "max", "auto"], help="How to combine several chains")

    sub = command("at-time", cmd_at_time, "Edges valid at an instant")
    sub.add_argument("time", type=_timestamp)
    sub.add_argument("--min-confidence", type=_unit)
    sub.add_argument("--active-defaults", action="store_true", help="Drop edges suppressed by a valid inhibitor")

    sub = command("during", cmd_during, "Edges valid during a closed interval")
    sub.add_argument("start", type=_timestamp)
    sub.add_argument("end", type=_timestamp, help="Timestamp or infinity")

    sub = command("status", cmd_status, "Edges involving an entity at an instant")
    sub.add_argument("ref")
    sub.add_argument("time", type=_timestamp)

    sub = command("blast-radius", cmd_blast_radius, "Causal ancestors and descendants of an edge")
    sub.add_argument("edge_id")

    sub = command("discover", cmd_discover, "Find the hidden context behind a contradiction", seq=False)
    sub.add_argument("proposition")
    sub.add_argument("--theta", type=_unit)
    sub.add_argument("--member-floor", type=_unit, default=0.0,
                     help="Ignore observations at or below this confidence")
    sub.add_argument("--split", action="store_true", help="Append one context-specific edge per branch")

    sub = command("resolve", cmd_resolve, "Decide between two opposing claims", seq=False)
    sub.add_argument("edge_a")
    sub.add_argument("edge_b")

    sub = command("audit", cmd_audit, "Blame an untrustworthy source of one of two beliefs", seq=False)
    sub.add_argument("edge_a")
    sub.add_argument("edge_b")
    sub.add_argument("--kappa-floor", type=_unit)

    sub = command("bench", cmd_bench, "Run the Q1-Q7 reference queries", seq=False)
    sub.add_argument("--fixtures-file", help="Fixture library file (default: bundled)")
    sub.add_argument("--use-store", action="store_true", help="Run against the store instead of fresh fixtures")

    sub = command("loss", cmd_loss, "Information lost by the binary projection")
    sub.add_argument("--missing", nargs="*", choices=[p.value for p in Pillar], help="Pillars the encoding lacks")

    command("stats", cmd_stats, "Store statistics")
    command("export", cmd_export, "Write the event log to standard output", seq=False)
    return parser


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """Run one command; returns the process exit code."""
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        settings_source = Config(config_file=args.config) if args.config else default_config
        configure_logging(args.log_level or settings_source.get_log_level(), settings_source.get_log_format())
        settings = CliConfig.from_config(settings_source, {"store_path": args.store, "output_format": args.format})
        return args.handler(Command(args, settings, out))
    except ATCHError as e:
        print(f"error: {e.code}: {e.message}", file=sys.stderr)
        return e.exit_code

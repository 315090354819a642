"""Line-oriented event-log codec and the canonical object notation.

One record per line: ``seq tx_time TAG payload``. The payload is key-sorted
JSON with reals printed at 17 significant digits so that a replayed log is
byte-identical to the original.
"""

import json
import math
from datetime import datetime
from typing import Any, Iterable, Iterator, List

from pydantic import BaseModel, ValidationError

from ..models.errors import ParseError
from ..models.records import PAYLOAD_CLASSES, EventRecord, PayloadType
from ..models.temporal import format_timestamp, parse_timestamp


def format_real(value: float) -> str:
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"non-finite real {value!r} has no canonical form")
    text = format(value, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def canonical_json(value: Any) -> str:
    """Deterministic object notation: sorted keys, no whitespace, 17-digit reals."""
    if isinstance(value, BaseModel):
        return canonical_json(value.model_dump(mode="json"))
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_real(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, datetime):
        return json.dumps(format_timestamp(value))
    if isinstance(value, dict):
        items = sorted((str(k), v) for k, v in value.items())
        return "{" + ",".join(f"{json.dumps(k, ensure_ascii=False)}:{canonical_json(v)}" for k, v in items) + "}"
    if isinstance(value, (list, tuple, set, frozenset)):
        seq = sorted(value) if isinstance(value, (set, frozenset)) else value
        return "[" + ",".join(canonical_json(v) for v in seq) + "]"
    raise TypeError(f"cannot encode {type(value).__name__} canonically")


def encode_record(record: EventRecord) -> str:
    """One log line, without the trailing newline."""
    return " ".join((
        str(record.seq),
        format_timestamp(record.tx_time),
        record.payload_type.value,
        canonical_json(record.payload.body()),
    ))


def decode_line(line: str, lineno: int) -> EventRecord:
    """Parse one log line; errors carry the 1-based line number."""
    parts = line.rstrip("\n").split(" ", 3)
    if len(parts) != 4:
        raise ParseError("expected 'seq tx_time tag payload'", line=lineno)
    seq_text, tx_text, tag, body_text = parts

    try:
        seq = int(seq_text)
    except ValueError:
        raise ParseError(f"bad sequence number {seq_text!r}", line=lineno) from None

    try:
        tx_time = parse_timestamp(tx_text)
    except ValueError as e:
        raise ParseError(str(e), line=lineno) from None

    try:
        payload_class = PAYLOAD_CLASSES[PayloadType(tag)]
    except ValueError:
        raise ParseError(f"unknown payload type {tag!r}", line=lineno) from None

    try:
        body = json.loads(body_text)
    except json.JSONDecodeError as e:
        raise ParseError(f"payload is not valid object notation: {e.msg}", line=lineno) from None
    if not isinstance(body, dict):
        raise ParseError("payload must be an object", line=lineno)

    try:
        return EventRecord(seq=seq, tx_time=tx_time, payload=payload_class.model_validate(body))
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise ParseError(f"{where}: {first['msg']}" if where else first["msg"], line=lineno) from None


def read_log(lines: Iterable[str]) -> Iterator[EventRecord]:
    """Decode records, skipping blank lines and enforcing strictly increasing seq."""
    last_seq = 0
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        record = decode_line(line, lineno)
        if record.seq <= last_seq:
            raise ParseError(f"sequence number {record.seq} does not follow {last_seq}", line=lineno)
        last_seq = record.seq
        yield record


def write_log(records: Iterable[EventRecord]) -> List[str]:
    return [encode_record(r) + "\n" for r in records]

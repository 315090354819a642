"""Tests for the event-log line format and canonical object notation."""

import pytest

from src.data_layer.log_codec import canonical_json, decode_line, encode_record, format_real, read_log
from src.models.errors import ParseError
from src.models.records import AddHyperedge, EventRecord, PayloadType

from .conftest import edge, ts


def test_format_real_uses_seventeen_digits():
    assert format_real(0.1) == "0.10000000000000001"
    assert format_real(1.0) == "1.0"
    assert format_real(0.5) == "0.5"


def test_format_real_rejects_non_finite():
    with pytest.raises(ValueError):
        format_real(float("nan"))


def test_canonical_json_sorts_keys_without_whitespace():
    assert canonical_json({"b": 1, "a": [True, None, 0.25]}) == '{"a":[true,null,0.25],"b":1}'


def test_canonical_json_sets_are_sorted():
    assert canonical_json({"c", "a", "b"}) == '["a","b","c"]'


def test_encode_record_layout():
    record = EventRecord(
        seq=3,
        tx_time=ts("2024-01-02T00:00:00Z"),
        payload=AddHyperedge(edge=edge("e1", ["A", "B"], start="2024-01-01", confidence=0.85)),
    )
    line = encode_record(record)
    seq, tx, tag, body = line.split(" ", 3)
    assert (seq, tx, tag) == ("3", "2024-01-02T00:00:00.000000+00:00", "AddHyperedge")
    assert body.startswith('{"edge":{')
    assert '"confidence":0.84999999999999998' in body
    assert '"end":"infinity"' in body
    assert "tx_time" not in body


def test_decoded_record_reencodes_identically():
    record = EventRecord(
        seq=1,
        tx_time=ts("2024-01-02T00:00:00Z"),
        payload=AddHyperedge(edge=edge("e1", ["A"], attributes={"name": "x", "count": 2})),
    )
    line = encode_record(record)
    decoded = decode_line(line, 1)
    assert decoded.payload_type is PayloadType.ADD_HYPEREDGE
    assert encode_record(decoded) == line


@pytest.mark.parametrize("line,fragment", [
    ("1 2024-01-01T00:00:00Z AddVertex", "expected"),
    ("x 2024-01-01T00:00:00Z AddVertex {}", "sequence number"),
    ("1 yesterday AddVertex {}", "invalid timestamp"),
    ("1 2024-01-01T00:00:00Z Frobnicate {}", "unknown payload type"),
    ("1 2024-01-01T00:00:00Z AddVertex {not json", "object notation"),
    ("1 2024-01-01T00:00:00Z AddVertex [1]", "must be an object"),
    ("1 2024-01-01T00:00:00Z AddVertex {}", "vertex"),
])
def test_decode_line_errors_carry_line_numbers(line, fragment):
    with pytest.raises(ParseError) as info:
        decode_line(line, 7)
    assert info.value.line == 7
    assert fragment in info.value.message


def test_read_log_skips_blank_lines_and_enforces_order():
    lines = [
        '1 2024-01-01T00:00:00Z AddVertex {"vertex":{"attributes":{},"id":"A"}}\n',
        "\n",
        '1 2024-01-01T00:00:01Z AddVertex {"vertex":{"attributes":{},"id":"B"}}\n',
    ]
    records = read_log(lines)
    assert next(records).payload.vertex.id == "A"
    with pytest.raises(ParseError) as info:
        next(records)
    assert info.value.line == 3

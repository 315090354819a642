"""Timestamps and closed time intervals."""

from datetime import datetime, timedelta, timezone
from typing import Any, Optional, Union

from dateutil import parser as date_parser
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

from .errors import MalformedInterval

# +infinity sentinel for open-ended validity.
FOREVER = datetime.max.replace(tzinfo=timezone.utc)
INFINITY_TOKEN = "infinity"

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
_MICROSECOND = timedelta(microseconds=1)

TimestampLike = Union[datetime, str]


def utc_now() -> datetime:
    """Current UTC time at microsecond precision."""
    return datetime.now(timezone.utc)


def parse_timestamp(value: TimestampLike) -> datetime:
    """Parse an RFC 3339 timestamp (or bare date) into an aware UTC datetime.

    Naive values are taken to be UTC. The literal ``infinity`` maps to FOREVER.
    """
    if isinstance(value, datetime):
        dt = value
    else:
        text = str(value).strip()
        if text.lower() in (INFINITY_TOKEN, "inf", "+infinity", "∞"):
            return FOREVER
        try:
            dt = date_parser.isoparse(text)
        except (ValueError, OverflowError) as e:
            raise ValueError(f"invalid timestamp {text!r}: {e}") from e
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    if dt == FOREVER:
        return FOREVER
    return dt.astimezone(timezone.utc)


def format_timestamp(value: datetime) -> str:
    """RFC 3339 with explicit offset and microsecond precision."""
    if value == FOREVER:
        return INFINITY_TOKEN
    return value.astimezone(timezone.utc).isoformat(timespec="microseconds")


def ticks(value: datetime) -> int:
    """Integer microseconds since the epoch (FOREVER included)."""
    return (value - EPOCH) // _MICROSECOND


class TimeInterval(BaseModel):
    """Closed interval [start, end]; end may be FOREVER."""

    model_config = ConfigDict(frozen=True)

    start: datetime = Field(..., description="Inclusive start (UTC)")
    end: datetime = Field(FOREVER, description="Inclusive end (UTC) or FOREVER")

    @field_validator("start", "end", mode="before")
    @classmethod
    def _coerce_timestamp(cls, v: Any) -> datetime:
        return parse_timestamp(v)

    @field_serializer("start", "end")
    def _serialize_timestamp(self, v: datetime) -> str:
        return format_timestamp(v)

    @classmethod
    def of(cls, start: TimestampLike, end: Optional[TimestampLike] = None) -> "TimeInterval":
        """Build a well-formed interval, raising MalformedInterval when start > end."""
        interval = cls(start=start, end=FOREVER if end is None else end)
        if not interval.is_well_formed():
            raise MalformedInterval(
                f"interval start {format_timestamp(interval.start)} is after end {format_timestamp(interval.end)}"
            )
        return interval

    @classmethod
    def point(cls, at: TimestampLike) -> "TimeInterval":
        return cls(start=at, end=at)

    def is_well_formed(self) -> bool:
        return self.start <= self.end

    @property
    def is_open(self) -> bool:
        return self.end == FOREVER

    def contains(self, t: datetime) -> bool:
        return self.start <= t <= self.end

    def overlaps(self, other: "TimeInterval") -> bool:
        return self.start <= other.end and other.start <= self.end

    def narrowed_to(self, end: datetime) -> "TimeInterval":
        """Interval with end replaced by min(end, current end)."""
        return TimeInterval(start=self.start, end=min(self.end, end))

    def __str__(self) -> str:
        closing = ")" if self.is_open else "]"
        return f"[{format_timestamp(self.start)}, {format_timestamp(self.end)}{closing}"

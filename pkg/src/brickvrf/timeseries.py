"""Embedded telemetry store keyed by point id.

Rows arrive as ``[id, time, value]`` triples (CSV or NDJSON), are validated
individually, and land in per-stream time-ordered sequences with
last-write-wins semantics on duplicate timestamps.  Range reads are
inclusive on both ends and operate on immutable per-stream snapshots, so a
concurrent ingest never tears a read.  Persistence is NDJSON with a
versioned header line.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
import threading
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Sequence

from .errors import BrickVrfError

FORMAT_NAME = "brickvrf-series"
FORMAT_VERSION = 1


class InvertedRange(BrickVrfError):
    def __init__(self, t0: int, t1: int):
        self.t0 = t0
        self.t1 = t1
        super().__init__(f"inverted time range: {t0} > {t1}")


class CorruptFile(BrickVrfError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class Sample:
    """One telemetry reading.  Units are carried by the point's class."""

    stream_id: str
    timestamp: int  # UTC seconds
    value: float


@dataclass(frozen=True)
class RowError:
    row: int  # zero-based position in the submitted batch
    kind: str  # NonFiniteValue | MalformedTimestamp | EmptyId
    detail: str


@dataclass
class IngestReport:
    accepted: int = 0
    rejected: int = 0
    errors: list[RowError] = field(default_factory=list)

    def merge(self, other: "IngestReport") -> "IngestReport":
        self.accepted += other.accepted
        self.rejected += other.rejected
        self.errors.extend(other.errors)
        return self


@dataclass(frozen=True)
class StreamStats:
    count: int
    t_min: int
    t_max: int


class _Snapshot:
    """Immutable sorted view of one stream: parallel time/value tuples."""

    __slots__ = ("times", "values")

    def __init__(self, times: tuple[int, ...], values: tuple[float, ...]):
        self.times = times
        self.values = values


_EMPTY = _Snapshot((), ())

_ISO_Z_RE = re.compile(r"[Zz]$")


def parse_timestamp(text: str) -> int:
    """Accept integer UTC seconds or an ISO 8601 instant; return UTC seconds."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        # datetime.fromisoformat rejects a 'Z' suffix on this Python
        dt = datetime.fromisoformat(_ISO_Z_RE.sub("+00:00", text))
    except ValueError:
        raise ValueError(f"not an integer or ISO 8601 timestamp: {text!r}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def _check_row(row: Sample, index: int) -> RowError | None:
    if not isinstance(row.stream_id, str) or not row.stream_id.strip():
        return RowError(index, "EmptyId", "stream id is empty")
    if isinstance(row.timestamp, bool) or not isinstance(row.timestamp, int) or row.timestamp < 0:
        return RowError(index, "MalformedTimestamp", f"bad timestamp {row.timestamp!r}")
    try:
        value = float(row.value)
    except (TypeError, ValueError):
        return RowError(index, "NonFiniteValue", f"bad value {row.value!r}")
    if not math.isfinite(value):
        return RowError(index, "NonFiniteValue", f"non-finite value {row.value!r}")
    return None


class TimeseriesStore:
    """Single-writer, multi-reader sample store.

    Writers serialize behind one lock and publish fresh per-stream
    snapshots; readers only ever dereference published snapshots.
    """

    def __init__(self) -> None:
        self._streams: dict[str, _Snapshot] = {}
        self._write_lock = threading.Lock()

    # -- writes ---------------------------------------------------------

    def ingest(self, rows: Sequence[Sample]) -> IngestReport:
        report = IngestReport()
        staged: dict[str, dict[int, float]] = {}
        for index, row in enumerate(rows):
            problem = _check_row(row, index)
            if problem is not None:
                report.rejected += 1
                report.errors.append(problem)
                continue
            staged.setdefault(row.stream_id, {})[row.timestamp] = float(row.value)
            report.accepted += 1
        if not staged:
            return report
        with self._write_lock:
            for stream_id, updates in staged.items():
                old = self._streams.get(stream_id, _EMPTY)
                merged = dict(zip(old.times, old.values))
                merged.update(updates)
                times = tuple(sorted(merged))
                self._streams[stream_id] = _Snapshot(times, tuple(merged[t] for t in times))
        return report

    # -- reads ----------------------------------------------------------

    def range(self, ids: Sequence[str], t0: int, t1: int) -> dict[str, list[Sample]]:
        """Samples with t0 <= timestamp <= t1 per id, ascending.

        Unknown ids yield empty lists rather than errors.
        """
        if t0 > t1:
            raise InvertedRange(t0, t1)
        streams = self._streams
        out: dict[str, list[Sample]] = {}
        for stream_id in ids:
            snap = streams.get(stream_id, _EMPTY)
            lo = bisect_left(snap.times, t0)
            hi = bisect_right(snap.times, t1)
            out[stream_id] = [
                Sample(stream_id, snap.times[i], snap.values[i]) for i in range(lo, hi)
            ]
        return out

    def latest_at_or_before(self, stream_id: str, timestamp: int) -> Sample | None:
        """Most recent sample with time <= timestamp, or None."""
        snap = self._streams.get(stream_id, _EMPTY)
        i = bisect_right(snap.times, timestamp) - 1
        if i < 0:
            return None
        return Sample(stream_id, snap.times[i], snap.values[i])

    def stream_ids(self) -> list[str]:
        return sorted(self._streams)

    def stats(self) -> dict[str, StreamStats]:
        return {
            stream_id: StreamStats(len(snap.times), snap.times[0], snap.times[-1])
            for stream_id, snap in sorted(self._streams.items())
            if snap.times
        }

    @property
    def total_samples(self) -> int:
        return sum(len(snap.times) for snap in self._streams.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TimeseriesStore):
            return NotImplemented
        mine = {k: (s.times, s.values) for k, s in self._streams.items() if s.times}
        theirs = {k: (s.times, s.values) for k, s in other._streams.items() if s.times}
        return mine == theirs

    # -- persistence ----------------------------------------------------

    def persist(self, path: str) -> None:
        lines = [json.dumps({"format": FORMAT_NAME, "version": FORMAT_VERSION})]
        for stream_id in sorted(self._streams):
            snap = self._streams[stream_id]
            for t, v in zip(snap.times, snap.values):
                lines.append(json.dumps({"id": stream_id, "t": t, "v": v}))
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path: str) -> "TimeseriesStore":
        store = cls()
        samples: list[Sample] = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    doc = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorruptFile(lineno, f"invalid JSON: {exc.msg}") from None
                if lineno == 1:
                    if doc.get("format") != FORMAT_NAME:
                        raise CorruptFile(1, f"unrecognized format header: {line}")
                    if doc.get("version") != FORMAT_VERSION:
                        raise CorruptFile(1, f"unsupported version {doc.get('version')!r}")
                    continue
                try:
                    samples.append(Sample(doc["id"], doc["t"], doc["v"]))
                except (KeyError, TypeError) as exc:
                    raise CorruptFile(lineno, f"bad sample record: {exc}") from None
        report = store.ingest(samples)
        if report.rejected:
            first = report.errors[0]
            raise CorruptFile(first.row + 2, f"{first.kind}: {first.detail}")
        return store


# -- text ingestion -----------------------------------------------------


def rows_from_csv(text: str) -> tuple[list[tuple[int, Sample]], list[RowError]]:
    """Parse `id,time,value` CSV with a header row.

    Returns (source-row-index, sample) pairs plus per-row errors; indices
    are zero-based over the data rows (header excluded).
    """
    reader = csv.reader(io.StringIO(text))
    rows: list[tuple[int, Sample]] = []
    errors: list[RowError] = []
    header_seen = False
    index = 0
    for fields in reader:
        if not fields or all(not f.strip() for f in fields):
            continue
        if not header_seen:
            header_seen = True
            normalized = [f.strip().lower() for f in fields]
            if normalized[:3] == ["id", "time", "value"]:
                continue
            raise CorruptFile(1, "expected header id,time,value")
        if len(fields) < 3:
            errors.append(RowError(index, "MalformedTimestamp", f"expected 3 fields, got {len(fields)}"))
        else:
            stream_id = fields[0].strip()
            try:
                timestamp = parse_timestamp(fields[1])
            except ValueError as exc:
                errors.append(RowError(index, "MalformedTimestamp", str(exc)))
                index += 1
                continue
            try:
                value = float(fields[2])
            except ValueError:
                errors.append(RowError(index, "NonFiniteValue", f"bad value {fields[2]!r}"))
                index += 1
                continue
            rows.append((index, Sample(stream_id, timestamp, value)))
        index += 1
    return rows, errors


def rows_from_ndjson(text: str) -> tuple[list[tuple[int, Sample]], list[RowError]]:
    """Parse NDJSON sample lines; a leading format-header line is skipped."""
    rows: list[tuple[int, Sample]] = []
    errors: list[RowError] = []
    index = 0
    for raw in text.splitlines():
        raw = raw.strip()
        if not raw:
            continue
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            errors.append(RowError(index, "MalformedTimestamp", f"invalid JSON: {exc.msg}"))
            index += 1
            continue
        if isinstance(doc, dict) and doc.get("format") == FORMAT_NAME:
            continue
        if not isinstance(doc, dict):
            errors.append(RowError(index, "MalformedTimestamp", "expected a JSON object per line"))
            index += 1
            continue
        timestamp = doc.get("t", doc.get("time"))
        if isinstance(timestamp, str):
            try:
                timestamp = parse_timestamp(timestamp)
            except ValueError as exc:
                errors.append(RowError(index, "MalformedTimestamp", str(exc)))
                index += 1
                continue
        rows.append((index, Sample(doc.get("id", ""), timestamp, doc.get("v", doc.get("value")))))
        index += 1
    return rows, errors


def ingest_text(store: TimeseriesStore, text: str, fmt: str | None = None) -> IngestReport:
    """Ingest CSV or NDJSON text; fmt=None sniffs by the first character.

    Error rows in the report are indexed over the source data rows, with
    parse-level and value-level rejections interleaved in source order.
    """
    if fmt is None:
        stripped = text.lstrip()
        fmt = "ndjson" if stripped.startswith("{") else "csv"
    if fmt == "csv":
        rows, errors = rows_from_csv(text)
    elif fmt == "ndjson":
        rows, errors = rows_from_ndjson(text)
    else:
        raise ValueError(f"unknown ingest format {fmt!r}")
    report = IngestReport(rejected=len(errors), errors=list(errors))
    good: list[Sample] = []
    for index, row in rows:
        problem = _check_row(row, index)
        if problem is not None:
            report.rejected += 1
            report.errors.append(problem)
        else:
            good.append(row)
    report.accepted = store.ingest(good).accepted
    report.errors.sort(key=lambda e: e.row)
    return report

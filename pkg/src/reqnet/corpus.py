"""Ingestion of issue-tracker / review exports into an analysis-ready corpus.

Handles CSV and JSONL inputs, text cleaning, per-type filtering and
partitioning of records over a release schedule.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import date, timedelta
from importlib import resources
from typing import Iterable

ISSUE_TYPES = ("defect", "enhancement", "other")
REPORTER_ROLES = ("developer", "user", "anonymous")

CSV_COLUMNS = [
    "issue_id", "type", "summary", "stars",
    "open_date", "reporter", "reporter_role", "os_version",
]
REQUIRED_COLUMNS = ["issue_id", "type", "summary", "open_date"]

BEFORE_FIRST = "__before_first__"
AFTER_LAST = "__after_last__"


class FormatError(Exception):
    """Fatal input-format problem (e.g. a required column is missing)."""


@dataclass(frozen=True)
class IssueRecord:
    issue_id: str
    issue_type: str  # one of ISSUE_TYPES
    summary: str     # already cleaned
    stars: int = 0
    open_date: date | None = None
    reporter: str = ""
    reporter_role: str = "anonymous"
    os_version: str | None = None

    def to_dict(self) -> dict:
        return {
            "issue_id": self.issue_id,
            "type": self.issue_type,
            "summary": self.summary,
            "stars": self.stars,
            "open_date": self.open_date.isoformat() if self.open_date else "",
            "reporter": self.reporter,
            "reporter_role": self.reporter_role,
            "os_version": self.os_version or "",
        }


@dataclass(frozen=True)
class CorpusSnapshot:
    records: tuple[IssueRecord, ...]
    source_label: str = ""

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class Reject:
    location: str  # "row 7" / "line 12"
    reason: str
    raw: str

    def to_dict(self) -> dict:
        return {"location": self.location, "reason": self.reason, "raw": self.raw}


@dataclass(frozen=True)
class ReleaseWindow:
    name: str
    start_date: date  # exclusive (end of previous window)
    end_date: date    # inclusive


@dataclass(frozen=True)
class ReleaseStats:
    window: ReleaseWindow
    days: int
    total_requests: int
    mean_per_day: float


@dataclass
class PartitionResult:
    stats: list[ReleaseStats]
    buckets: dict[str, list[IssueRecord]] = field(default_factory=dict)


PRINTABLE_ASCII = frozenset(chr(c) for c in range(0x20, 0x7F))


def clean_text(text: str) -> str:
    """Strip markup tags and non-printable-ASCII characters, normalize spaces.

    Tag spans run from ``<`` to the next ``>``; an unmatched ``<`` is kept
    literal. Characters outside printable ASCII (0x20-0x7E) are dropped.
    Idempotent by construction.
    """
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "<":
            close = text.find(">", i + 1)
            if close == -1:
                out.append(ch)
                i += 1
            else:
                out.append(" ")  # tag acts as a separator
                i = close + 1
            continue
        if ch in PRINTABLE_ASCII:
            out.append(ch)
        i += 1
    return " ".join("".join(out).split())


def _normalize_type(value: str) -> str:
    v = (value or "").strip().lower()
    return v if v in ISSUE_TYPES else "other"


def _normalize_role(value: str) -> str:
    v = (value or "").strip().lower()
    return v if v in REPORTER_ROLES else "anonymous"


def _parse_date(value: str) -> date:
    return date.fromisoformat(value.strip())


def _build_record(fields: dict, location: str, raw: str,
                  seen_ids: set[str]) -> IssueRecord | Reject:
    issue_id = str(fields.get("issue_id", "") or "").strip()
    if not issue_id:
        return Reject(location, "empty issue_id", raw)
    if issue_id in seen_ids:
        return Reject(location, "duplicate issue_id %r" % issue_id, raw)
    try:
        open_date = _parse_date(str(fields["open_date"]))
    except (KeyError, ValueError, TypeError):
        return Reject(location, "unparseable open_date %r" % fields.get("open_date"), raw)
    stars_raw = fields.get("stars", 0)
    try:
        stars = int(stars_raw) if stars_raw not in (None, "") else 0
        if stars < 0:
            raise ValueError
    except (ValueError, TypeError):
        return Reject(location, "invalid stars %r" % stars_raw, raw)
    return IssueRecord(
        issue_id=issue_id,
        issue_type=_normalize_type(str(fields.get("type", ""))),
        summary=clean_text(str(fields.get("summary", "") or "")),
        stars=stars,
        open_date=open_date,
        reporter=str(fields.get("reporter", "") or "").strip(),
        reporter_role=_normalize_role(str(fields.get("reporter_role", ""))),
        os_version=(str(fields["os_version"]).strip() or None)
        if fields.get("os_version") not in (None, "") else None,
    )


def parse_records(stream, fmt: str,
                  source_label: str = "") -> tuple[CorpusSnapshot, list[Reject]]:
    """Parse a CSV or JSONL export.

    Malformed rows become :class:`Reject` entries and parsing continues;
    a missing required column (CSV header) raises :class:`FormatError`.
    """
    if isinstance(stream, (bytes, bytearray)):
        stream = io.StringIO(stream.decode("utf-8", errors="replace"))
    elif isinstance(stream, str):
        stream = io.StringIO(stream)
    if fmt == "csv":
        return _parse_csv(stream, source_label)
    if fmt == "jsonl":
        return _parse_jsonl(stream, source_label)
    raise FormatError("unknown format %r (expected csv or jsonl)" % fmt)


def _parse_csv(stream, source_label):
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        return CorpusSnapshot((), source_label), []
    header = [h.strip() for h in header]
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise FormatError("missing required column(s): %s" % ", ".join(missing))
    records: list[IssueRecord] = []
    rejects: list[Reject] = []
    seen: set[str] = set()
    for rownum, row in enumerate(reader, start=2):
        if not row:
            continue
        raw = ",".join(row)
        if len(row) != len(header):
            rejects.append(Reject("row %d" % rownum,
                                  "expected %d fields, got %d" % (len(header), len(row)),
                                  raw))
            continue
        fields = dict(zip(header, row))
        result = _build_record(fields, "row %d" % rownum, raw, seen)
        if isinstance(result, Reject):
            rejects.append(result)
        else:
            seen.add(result.issue_id)
            records.append(result)
    return CorpusSnapshot(tuple(records), source_label), rejects


def _parse_jsonl(stream, source_label):
    records: list[IssueRecord] = []
    rejects: list[Reject] = []
    seen: set[str] = set()
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        loc = "line %d" % lineno
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            rejects.append(Reject(loc, "invalid JSON: %s" % exc.msg, line))
            continue
        if not isinstance(obj, dict):
            rejects.append(Reject(loc, "expected a JSON object", line))
            continue
        missing = [k for k in REQUIRED_COLUMNS if k not in obj]
        if missing:
            rejects.append(Reject(loc, "missing key(s): %s" % ", ".join(missing), line))
            continue
        result = _build_record(obj, loc, line, seen)
        if isinstance(result, Reject):
            rejects.append(result)
        else:
            seen.add(result.issue_id)
            records.append(result)
    return CorpusSnapshot(tuple(records), source_label), rejects


def write_jsonl(corpus: CorpusSnapshot, fh) -> None:
    for rec in corpus.records:
        fh.write(json.dumps(rec.to_dict(), sort_keys=True) + "\n")


def write_rejects(rejects: list[Reject], fh) -> None:
    for rej in rejects:
        fh.write(json.dumps(rej.to_dict(), sort_keys=True) + "\n")


def filter_by_type(corpus: CorpusSnapshot, issue_type: str) -> CorpusSnapshot:
    if issue_type not in ISSUE_TYPES:
        raise ValueError("unknown issue type %r" % issue_type)
    kept = tuple(r for r in corpus.records if r.issue_type == issue_type)
    return CorpusSnapshot(kept, corpus.source_label)


def load_schedule(source: str) -> list[ReleaseWindow]:
    """Load a release schedule from a JSON file, or the built-in preset
    by name (``android-preset``)."""
    if source == "android-preset":
        text = resources.files("reqnet.data").joinpath("android_releases.json").read_text()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    entries = json.loads(text)
    windows = [
        ReleaseWindow(e["name"], _parse_date(e["start"]), _parse_date(e["end"]))
        for e in entries
    ]
    validate_schedule(windows)
    return windows


def validate_schedule(windows: list[ReleaseWindow]) -> None:
    if not windows:
        raise ValueError("empty release schedule")
    for w in windows:
        if not w.start_date < w.end_date:
            raise ValueError("window %r has start >= end" % w.name)
    for prev, cur in zip(windows, windows[1:]):
        if cur.start_date != prev.end_date:
            raise ValueError(
                "windows %r and %r are not contiguous" % (prev.name, cur.name))


def partition_by_release(corpus: CorpusSnapshot,
                         schedule: list[ReleaseWindow]) -> PartitionResult:
    """Assign records to release windows by open_date.

    A window covers dates d with start_date < d <= end_date. Records dated
    on/before the first start go to the BEFORE_FIRST bucket; records after
    the last end go to AFTER_LAST. Window length in days is end - start,
    i.e. end minus the previous window's end for contiguous schedules.
    """
    validate_schedule(schedule)
    buckets: dict[str, list[IssueRecord]] = {w.name: [] for w in schedule}
    buckets[BEFORE_FIRST] = []
    buckets[AFTER_LAST] = []
    first_start = schedule[0].start_date
    last_end = schedule[-1].end_date
    for rec in corpus.records:
        d = rec.open_date
        if d is None or d <= first_start:
            buckets[BEFORE_FIRST].append(rec)
        elif d > last_end:
            buckets[AFTER_LAST].append(rec)
        else:
            for w in schedule:
                if w.start_date < d <= w.end_date:
                    buckets[w.name].append(rec)
                    break
    stats = []
    for w in schedule:
        days = (w.end_date - w.start_date).days
        total = len(buckets[w.name])
        stats.append(ReleaseStats(w, days, total, total / days))
    return PartitionResult(stats, buckets)

"""Append-only event log with JSONL persistence and snapshots.

Every state change in the service is an event; replaying the log from
the start (or from a snapshot) reconstructs the exact server state. The
log itself is not thread-safe; the store serializes access.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, StateError

EVENT_KINDS = frozenset({
    "campaign_created",
    "participant_admitted",
    "session_built",
    "tutorial_issued",
    "tutorial_scored",
    "trial_issued",
    "trial_answered",
    "sample_recorded",
    "session_abandoned",
})

LOG_FILENAME = "events.jsonl"
SNAPSHOT_FILENAME = "snapshot.json"


@dataclass(frozen=True)
class EventRecord:
    seq: int
    timestamp: float
    kind: str
    payload: dict

    def to_dict(self):
        return {"seq": self.seq, "timestamp": self.timestamp,
                "kind": self.kind, "payload": self.payload}

    @classmethod
    def from_dict(cls, data):
        return cls(seq=int(data["seq"]), timestamp=float(data["timestamp"]),
                   kind=str(data["kind"]), payload=dict(data["payload"]))


class EventLog:
    """Dense-sequence append log, optionally mirrored to a JSONL file."""

    def __init__(self, path=None, start_seq=0):
        self._path = Path(path) if path is not None else None
        self._records = []
        self._next_seq = int(start_seq)
        self._fh = None
        if self._path is not None:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            self._fh = open(self._path, "a", encoding="utf-8")

    @property
    def next_seq(self):
        return self._next_seq

    @property
    def records(self):
        return tuple(self._records)

    def append(self, kind, payload, timestamp) -> EventRecord:
        if kind not in EVENT_KINDS:
            raise StateError(f"unknown event kind {kind!r}")
        record = EventRecord(seq=self._next_seq, timestamp=float(timestamp),
                             kind=kind, payload=payload)
        self._records.append(record)
        self._next_seq += 1
        if self._fh is not None:
            self._fh.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")
            self._fh.flush()
            os.fsync(self._fh.fileno())
        return record

    def adopt(self, record: EventRecord):
        """Take over an already-persisted record during replay (no rewrite)."""
        if self._records and record.seq != self._next_seq:
            raise StateError(
                f"event sequence gap: expected {self._next_seq}, got {record.seq}"
            )
        self._records.append(record)
        self._next_seq = record.seq + 1

    def set_next_seq(self, seq):
        self._next_seq = int(seq)

    def attach(self, path):
        """Start appending to a JSONL file (creating it if needed)."""
        self.close()
        self._path = Path(path)
        self._path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self._path, "a", encoding="utf-8")

    def close(self):
        if self._fh is not None:
            self._fh.close()
            self._fh = None


def read_log(path):
    """All records from a JSONL log file, validating dense sequence numbers."""
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = EventRecord.from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad event at line {lineno}: {exc}",
                                 line_numbers=(lineno,)) from exc
            records.append(record)
    for i, record in enumerate(records):
        expect = records[0].seq + i
        if record.seq != expect:
            raise ParseError(
                f"event sequence gap: expected {expect}, found {record.seq}",
                line_numbers=(i + 1,),
            )
    return records

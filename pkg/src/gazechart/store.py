"""Event-sourced experiment state.

The store is the single writer: every public method validates against
current state, appends one or more events, and mutates state only by
applying those events through _apply. Replaying a log through the same
_apply reconstructs the state exactly, so live handling and recovery
share one code path.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
import uuid
from dataclasses import dataclass
from pathlib import Path

from . import defaults
from .errors import ProtocolError, StateError
from .events import LOG_FILENAME, SNAPSHOT_FILENAME, EventLog, EventRecord, read_log
from .session import (
    Campaign,
    GazeSample,
    Session,
    SessionStatus,
    admit_participant,
    build_session,
    submit_trial_response,
)
from .chart import ChartParams
from .seeding import NS_TUTORIAL, derive_seed
from .tutorial import (
    PathParams,
    ScreeningState,
    ScreeningStatus,
    TutorialSpec,
    generate_tutorial,
    record_attempt,
    score_tutorial,
)


@dataclass
class ParticipantRecord:
    participant_id: str
    screen_width: int
    screen_height: int
    screening: ScreeningState

    def to_dict(self):
        return {
            "participant_id": self.participant_id,
            "screen_width": self.screen_width,
            "screen_height": self.screen_height,
            "screening": self.screening.to_dict(),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            participant_id=str(data["participant_id"]),
            screen_width=int(data["screen_width"]),
            screen_height=int(data["screen_height"]),
            screening=ScreeningState.from_dict(data["screening"]),
        )


@dataclass
class SessionRecord:
    session: Session
    pending_step: str | None = None
    pending_tutorial: TutorialSpec | None = None
    last_activity: float = 0.0

    def to_dict(self):
        return {
            "session": self.session.to_dict(),
            "pending_step": self.pending_step,
            "pending_tutorial": None if self.pending_tutorial is None else self.pending_tutorial.to_dict(),
            "last_activity": self.last_activity,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            session=Session.from_dict(data["session"]),
            pending_step=data["pending_step"],
            pending_tutorial=None if data["pending_tutorial"] is None else TutorialSpec.from_dict(data["pending_tutorial"]),
            last_activity=float(data["last_activity"]),
        )


def _id_number(prefix, value):
    if value.startswith(prefix) and value[len(prefix):].isdigit():
        return int(value[len(prefix):])
    return 0


class ExperimentStore:
    """All campaigns, participants, sessions and samples behind one lock."""

    def __init__(self, data_dir=None, clock=time.time, abandon_after=None,
                 snapshot_every=0):
        self._lock = threading.RLock()
        self._clock = clock
        self._abandon_after = abandon_after
        self._snapshot_every = int(snapshot_every)
        self._data_dir = Path(data_dir) if data_dir is not None else None
        log_path = self._data_dir / LOG_FILENAME if self._data_dir is not None else None
        if log_path is not None and log_path.exists() and log_path.stat().st_size > 0:
            raise StateError(
                f"{log_path} already holds events; use ExperimentStore.open to resume"
            )
        self._log = EventLog(log_path)
        self.campaigns = {}
        self.participants = {}
        self.sessions = {}
        self.samples = []
        self._counters = {"campaign": 0, "session": 0}

    # -- construction from persisted data ---------------------------------

    @classmethod
    def open(cls, data_dir, clock=time.time, abandon_after=None, snapshot_every=0):
        """Reconstruct a store from its data directory and keep appending to it.

        Loads the snapshot when present, then replays every logged event
        at or past the snapshot sequence.
        """
        data_dir = Path(data_dir)
        store = cls(data_dir=None, clock=clock, abandon_after=abandon_after,
                    snapshot_every=snapshot_every)
        store._data_dir = data_dir
        base_seq = 0
        snap_path = data_dir / SNAPSHOT_FILENAME
        if snap_path.exists():
            blob = json.loads(snap_path.read_text(encoding="utf-8"))
            base_seq = int(blob["next_seq"])
            store._load_state(blob["state"])
            store._log.set_next_seq(base_seq)
        log_path = data_dir / LOG_FILENAME
        if log_path.exists():
            for record in read_log(log_path):
                if record.seq < base_seq:
                    continue
                store._log.adopt(record)
                store._apply(record)
        store._log.attach(log_path)
        return store

    @classmethod
    def from_records(cls, records, clock=time.time):
        """In-memory store rebuilt purely from an event sequence."""
        store = cls(data_dir=None, clock=clock)
        for record in records:
            store._log.adopt(record)
            store._apply(record)
        return store

    def close(self):
        self._log.close()

    @property
    def log_records(self):
        return self._log.records

    # -- event plumbing ----------------------------------------------------

    def _append(self, kind, payload, now):
        record = self._log.append(kind, payload, now)
        result = self._apply(record)
        if self._snapshot_every and record.seq % self._snapshot_every == self._snapshot_every - 1:
            self.snapshot()
        return result

    def _apply(self, record: EventRecord):
        """The only mutation path, for live events and replay alike."""
        kind, p, ts = record.kind, record.payload, record.timestamp
        if kind == "campaign_created":
            campaign = Campaign.from_dict(p["campaign"])
            self.campaigns[campaign.campaign_id] = campaign
            n = _id_number("c", campaign.campaign_id)
            self._counters["campaign"] = max(self._counters["campaign"], n)
        elif kind == "participant_admitted":
            rec = ParticipantRecord(
                participant_id=p["participant_id"],
                screen_width=int(p["screen_width"]),
                screen_height=int(p["screen_height"]),
                screening=ScreeningState(),
            )
            self.participants[rec.participant_id] = rec
        elif kind == "session_built":
            session = Session.from_dict(p["session"])
            self.sessions[session.session_id] = SessionRecord(session=session, last_activity=ts)
            n = _id_number("s", session.session_id)
            self._counters["session"] = max(self._counters["session"], n)
        elif kind == "tutorial_issued":
            sr = self.sessions[p["session_id"]]
            sr.pending_step = p["step_id"]
            sr.pending_tutorial = TutorialSpec.from_dict(p["tutorial"])
            sr.last_activity = ts
        elif kind == "tutorial_scored":
            sr = self.sessions[p["session_id"]]
            participant = self.participants[sr.session.participant_id]
            participant.screening = record_attempt(participant.screening, bool(p["passed"]))
            for other in self.sessions.values():
                if other.session.participant_id == participant.participant_id:
                    other.session.screening = participant.screening
            sr.pending_step = None
            sr.pending_tutorial = None
            sr.last_activity = ts
        elif kind == "trial_issued":
            sr = self.sessions[p["session_id"]]
            sr.pending_step = p["step_id"]
            sr.last_activity = ts
        elif kind == "trial_answered":
            sr = self.sessions[p["session_id"]]
            campaign = self.campaigns[sr.session.campaign_id]
            sample = submit_trial_response(
                sr.session, campaign, int(p["trial_index"]), p["text"], ts
            )
            sr.pending_step = None
            sr.last_activity = ts
            return sample
        elif kind == "sample_recorded":
            self.samples.append(GazeSample.from_dict(p["sample"]))
        elif kind == "session_abandoned":
            sr = self.sessions[p["session_id"]]
            sr.session.abandoned = True
            sr.pending_step = None
            sr.pending_tutorial = None
            sr.last_activity = ts
        else:
            raise StateError(f"unknown event kind {kind!r}")
        return None

    # -- public API --------------------------------------------------------

    def create_campaign(self, definition: dict) -> Campaign:
        """Validate and register a campaign; raises ConfigurationError."""
        with self._lock:
            data = dict(definition)
            if not data.get("campaign_id"):
                data["campaign_id"] = f"c{self._counters['campaign'] + 1}"
            campaign = Campaign.from_dict(data)
            if campaign.campaign_id in self.campaigns:
                raise ProtocolError(f"campaign {campaign.campaign_id!r} already exists")
            self._append("campaign_created", {"campaign": campaign.to_dict()}, self._clock())
            return self.campaigns[campaign.campaign_id]

    def admit(self, screen_width: int, screen_height: int):
        """Admission gate. Returns the new ParticipantRecord, or None if refused.

        Refusals change no state and are not logged.
        """
        with self._lock:
            if not admit_participant(int(screen_width), int(screen_height)):
                return None
            pid = uuid.uuid4().hex
            self._append("participant_admitted", {
                "participant_id": pid,
                "screen_width": int(screen_width),
                "screen_height": int(screen_height),
            }, self._clock())
            return self.participants[pid]

    def create_session(self, campaign_id: str, participant_id: str, seed=None) -> SessionRecord:
        """Build a session for an admitted participant. KeyError for unknown ids."""
        with self._lock:
            campaign = self.campaigns[campaign_id]
            participant = self.participants[participant_id]
            if seed is None:
                seed = secrets.randbits(62)
            session = build_session(
                campaign, participant_id, int(seed),
                session_id=f"s{self._counters['session'] + 1}",
                screening=participant.screening,
            )
            self._append("session_built", {"session": session.to_dict()}, self._clock())
            return self.sessions[session.session_id]

    def _maybe_abandon(self, sr: SessionRecord, now: float):
        if self._abandon_after is None:
            return
        if sr.session.status in (SessionStatus.SCREENING, SessionStatus.RUNNING):
            if now - sr.last_activity > self._abandon_after:
                self._append("session_abandoned", {"session_id": sr.session.session_id}, now)

    def sweep_abandoned(self):
        """Mark every timed-out session abandoned; returns their ids."""
        with self._lock:
            now = self._clock()
            marked = []
            for sr in self.sessions.values():
                was = sr.session.status
                self._maybe_abandon(sr, now)
                if was is not sr.session.status:
                    marked.append(sr.session.session_id)
            return marked

    def _tutorial_params(self, campaign: Campaign):
        # tutorials have no video; they run on the first video's frame size
        video = campaign.videos[0]
        chart_params = ChartParams(
            frame_width=video.frame_width,
            frame_height=video.frame_height,
            font_size=campaign.params.font_size,
            density=campaign.params.density,
            jitter_fraction=campaign.params.jitter_fraction,
            seed=0,
        )
        path_params = PathParams(edge_margin=2.0 * campaign.params.font_size)
        return path_params, chart_params

    def next_step(self, session_id: str) -> dict:
        """What the session should do now; issues a step when one is due.

        Idempotent: repeated calls without an intervening submission
        return the same step rather than consuming another one.
        """
        with self._lock:
            sr = self.sessions[session_id]
            now = self._clock()
            self._maybe_abandon(sr, now)
            session = sr.session
            status = session.status
            if status is SessionStatus.ABANDONED:
                return {"kind": "abandoned", "status": status.value}
            if status is SessionStatus.REJECTED:
                return {"kind": "rejected", "status": status.value}
            if status is SessionStatus.COMPLETED:
                campaign = self.campaigns[session.campaign_id]
                return {
                    "kind": "done",
                    "status": status.value,
                    "pay": campaign.pay_per_session,
                    "trials_answered": session.cursor,
                }
            campaign = self.campaigns[session.campaign_id]
            if status is SessionStatus.SCREENING:
                if sr.pending_step is None or sr.pending_tutorial is None:
                    attempts = session.screening.attempts
                    step_id = f"t{attempts + 1}"
                    path_params, chart_params = self._tutorial_params(campaign)
                    spec = generate_tutorial(
                        path_params, chart_params,
                        derive_seed(session.seed, NS_TUTORIAL, attempts),
                        duration=campaign.params.tutorial_seconds,
                    )
                    self._append("tutorial_issued", {
                        "session_id": session_id,
                        "step_id": step_id,
                        "tutorial": spec.to_dict(),
                    }, now)
                return {
                    "kind": "tutorial",
                    "status": session.status.value,
                    "step_id": sr.pending_step,
                    "tutorial": sr.pending_tutorial.to_dict(),
                    "chart_seconds": campaign.params.chart_seconds,
                    "attempts": session.screening.attempts,
                    "passes": session.screening.passes,
                }
            # running: serve the trial at the cursor
            if sr.pending_step is None or not sr.pending_step.startswith("v"):
                step_id = f"v{session.cursor + 1}"
                self._append("trial_issued", {
                    "session_id": session_id,
                    "step_id": step_id,
                    "trial_index": session.cursor,
                }, now)
            trial = session.trials[session.cursor]
            return {
                "kind": "trial",
                "status": session.status.value,
                "step_id": sr.pending_step,
                "trial_index": session.cursor,
                "trial_count": len(session.trials),
                "trial": trial.to_dict(),
            }

    def submit_step(self, session_id: str, step_id: str, raw_text: str) -> dict:
        """Score the outstanding step. Stale, duplicate or foreign step ids
        raise ProtocolError without changing state."""
        with self._lock:
            sr = self.sessions[session_id]
            now = self._clock()
            self._maybe_abandon(sr, now)
            session = sr.session
            if session.status not in (SessionStatus.SCREENING, SessionStatus.RUNNING):
                raise ProtocolError(
                    f"session {session_id} is {session.status.value}; nothing can be submitted"
                )
            if sr.pending_step is None:
                raise ProtocolError("no step is outstanding; call next first")
            if step_id != sr.pending_step:
                raise ProtocolError(
                    f"step {step_id!r} is not the outstanding step {sr.pending_step!r}"
                )
            campaign = self.campaigns[session.campaign_id]
            if step_id.startswith("t"):
                if session.screening.status is not ScreeningStatus.IN_TRAINING:
                    raise ProtocolError("screening already settled; call next for the new step")
                score = score_tutorial(
                    sr.pending_tutorial, raw_text,
                    radius=campaign.params.approval_radius,
                )
                self._append("tutorial_scored", {
                    "session_id": session_id,
                    "step_id": step_id,
                    "passed": score.passed,
                    "reason": score.reason,
                    "distance": score.distance,
                }, now)
                return {
                    "kind": "tutorial_result",
                    "step_id": step_id,
                    "passed": score.passed,
                    "reason": score.reason,
                    "distance": score.distance,
                    "attempts": session.screening.attempts,
                    "passes": session.screening.passes,
                    "status": session.status.value,
                }
            index = int(step_id[1:]) - 1
            sample = self._append("trial_answered", {
                "session_id": session_id,
                "step_id": step_id,
                "trial_index": index,
                "text": raw_text,
            }, now)
            self._append("sample_recorded", {"sample": sample.to_dict()}, now)
            return {
                "kind": "trial_result",
                "step_id": step_id,
                "valid": sample.valid,
                "status": session.status.value,
            }

    def samples_for(self, campaign_id: str, video_id: str, frame_time_ms: int):
        with self._lock:
            return [
                s for s in self.samples
                if s.campaign_id == campaign_id and s.video_id == video_id
                and s.frame_time_ms == int(frame_time_ms)
            ]

    # -- snapshots and replay comparison ----------------------------------

    def state_dict(self) -> dict:
        """Complete JSON-able state; equality means identical stores."""
        with self._lock:
            return {
                "campaigns": {cid: c.to_dict() for cid, c in sorted(self.campaigns.items())},
                "participants": {pid: p.to_dict() for pid, p in sorted(self.participants.items())},
                "sessions": {sid: sr.to_dict() for sid, sr in sorted(self.sessions.items())},
                "samples": [s.to_dict() for s in self.samples],
                "counters": dict(self._counters),
            }

    def _load_state(self, state: dict):
        self.campaigns = {cid: Campaign.from_dict(d) for cid, d in state["campaigns"].items()}
        self.participants = {pid: ParticipantRecord.from_dict(d) for pid, d in state["participants"].items()}
        self.sessions = {sid: SessionRecord.from_dict(d) for sid, d in state["sessions"].items()}
        self.samples = [GazeSample.from_dict(d) for d in state["samples"]]
        self._counters = dict(state["counters"])

    def snapshot(self):
        """Write state + next sequence to the data directory atomically."""
        if self._data_dir is None:
            raise StateError("store has no data directory to snapshot into")
        with self._lock:
            blob = {"next_seq": self._log.next_seq, "state": self.state_dict()}
            self._data_dir.mkdir(parents=True, exist_ok=True)
            tmp = self._data_dir / (SNAPSHOT_FILENAME + ".tmp")
            tmp.write_text(json.dumps(blob, sort_keys=True), encoding="utf-8")
            tmp.replace(self._data_dir / SNAPSHOT_FILENAME)

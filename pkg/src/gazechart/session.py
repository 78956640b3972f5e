"""Campaigns, sessions and trial bookkeeping.

A campaign names videos and the frames of interest inside them. A
session is one participant's paid unit of work: screening tutorials (if
not yet approved) followed by a batch of trials, each trial being a clip
that ends at a frame of interest and is replaced by a probe chart. The
participant's report for each trial becomes one gaze sample.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from . import defaults
from .chart import ChartParams, ChartSpec, generate_chart, lookup
from .errors import ConfigurationError, ParameterError, ProtocolError
from .seeding import NS_TRIAL, derive_seed, rng_from
from .tutorial import ScreeningState, ScreeningStatus


@dataclass(frozen=True)
class Video:
    video_id: str
    duration_s: float
    frame_width: int
    frame_height: int
    uri: str = ""

    def to_dict(self):
        return {
            "video_id": self.video_id,
            "duration_s": self.duration_s,
            "frame_width": self.frame_width,
            "frame_height": self.frame_height,
            "uri": self.uri,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            video_id=str(data["video_id"]),
            duration_s=float(data["duration_s"]),
            frame_width=int(data["frame_width"]),
            frame_height=int(data["frame_height"]),
            uri=str(data.get("uri", "")),
        )


@dataclass(frozen=True)
class FrameOfInterest:
    video_id: str
    frame_time_ms: int

    def to_dict(self):
        return {"video_id": self.video_id, "frame_time_ms": self.frame_time_ms}

    @classmethod
    def from_dict(cls, data):
        return cls(video_id=str(data["video_id"]), frame_time_ms=int(data["frame_time_ms"]))


@dataclass(frozen=True)
class ExperimentParams:
    """Per-campaign timing and chart parameters."""

    clip_seconds: float = defaults.CLIP_SECONDS
    tutorial_seconds: float = defaults.TUTORIAL_SECONDS
    chart_seconds: float = defaults.CHART_SECONDS
    font_size: int = defaults.FONT_SIZE_PX
    density: float = defaults.TRIPLET_DENSITY
    jitter_fraction: float = defaults.JITTER_FRACTION
    approval_radius: float = defaults.APPROVAL_RADIUS_PX

    def to_dict(self):
        return {
            "clip_seconds": self.clip_seconds,
            "tutorial_seconds": self.tutorial_seconds,
            "chart_seconds": self.chart_seconds,
            "font_size": self.font_size,
            "density": self.density,
            "jitter_fraction": self.jitter_fraction,
            "approval_radius": self.approval_radius,
        }

    @classmethod
    def from_dict(cls, data):
        base = cls().to_dict()
        base.update(data)
        return cls(
            clip_seconds=float(base["clip_seconds"]),
            tutorial_seconds=float(base["tutorial_seconds"]),
            chart_seconds=float(base["chart_seconds"]),
            font_size=int(base["font_size"]),
            density=float(base["density"]),
            jitter_fraction=float(base["jitter_fraction"]),
            approval_radius=float(base["approval_radius"]),
        )


@dataclass(frozen=True)
class Campaign:
    campaign_id: str
    videos: tuple
    frames_of_interest: tuple
    params: ExperimentParams = field(default_factory=ExperimentParams)
    pay_per_session: float = defaults.PAY_PER_SESSION
    batch_size: int = defaults.BATCH_SIZE

    def __post_init__(self):
        issues = validate_campaign(self)
        if issues:
            raise ConfigurationError(issues)

    def video(self, video_id) -> Video:
        for v in self.videos:
            if v.video_id == video_id:
                return v
        raise KeyError(video_id)

    def to_dict(self):
        return {
            "campaign_id": self.campaign_id,
            "videos": [v.to_dict() for v in self.videos],
            "frames_of_interest": [f.to_dict() for f in self.frames_of_interest],
            "params": self.params.to_dict(),
            "pay_per_session": self.pay_per_session,
            "batch_size": self.batch_size,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            campaign_id=str(data["campaign_id"]),
            videos=tuple(Video.from_dict(v) for v in data["videos"]),
            frames_of_interest=tuple(FrameOfInterest.from_dict(f) for f in data["frames_of_interest"]),
            params=ExperimentParams.from_dict(data.get("params", {})),
            pay_per_session=float(data.get("pay_per_session", defaults.PAY_PER_SESSION)),
            batch_size=int(data.get("batch_size", defaults.BATCH_SIZE)),
        )


def validate_campaign(campaign) -> list:
    """All configuration problems with a campaign, one message each.

    Empty list means the campaign is usable. Checks referential
    integrity (frames must name listed videos, frame times must fall
    inside their video), positive durations and pay, a usable batch
    size, and that each video's frame can actually hold a chart.
    """
    issues = []
    if not campaign.campaign_id:
        issues.append("campaign_id: must be non-empty")
    seen = set()
    for v in campaign.videos:
        if v.video_id in seen:
            issues.append(f"videos: duplicate video_id {v.video_id!r}")
        seen.add(v.video_id)
        if v.duration_s < 0:
            issues.append(f"videos[{v.video_id}]: duration_s must be >= 0, got {v.duration_s}")
        if v.frame_width <= 0 or v.frame_height <= 0:
            issues.append(
                f"videos[{v.video_id}]: frame must have positive dimensions, "
                f"got {v.frame_width}x{v.frame_height}"
            )
    if not campaign.videos:
        issues.append("videos: at least one video is required")
    if not campaign.frames_of_interest:
        issues.append("frames_of_interest: at least one frame is required")
    for i, f in enumerate(campaign.frames_of_interest):
        if f.video_id not in seen:
            issues.append(f"frames_of_interest[{i}]: unknown video_id {f.video_id!r}")
            continue
        v = campaign.video(f.video_id)
        if not 0 <= f.frame_time_ms <= v.duration_s * 1000.0:
            issues.append(
                f"frames_of_interest[{i}]: frame_time_ms {f.frame_time_ms} outside "
                f"video {f.video_id!r} of {v.duration_s:g}s"
            )
    p = campaign.params
    for name in ("clip_seconds", "tutorial_seconds", "chart_seconds", "approval_radius"):
        if getattr(p, name) <= 0:
            issues.append(f"params.{name}: must be positive, got {getattr(p, name)}")
    if p.font_size <= 0:
        issues.append(f"params.font_size: must be positive, got {p.font_size}")
    if p.density <= 0:
        issues.append(f"params.density: must be positive, got {p.density}")
    if not 0 <= p.jitter_fraction <= 0.5:
        issues.append(f"params.jitter_fraction: must be in [0, 0.5], got {p.jitter_fraction}")
    if campaign.pay_per_session < 0:
        issues.append(f"pay_per_session: must be >= 0, got {campaign.pay_per_session}")
    if campaign.batch_size < 1:
        issues.append(f"batch_size: must be >= 1, got {campaign.batch_size}")
    # charts must be generatable on every referenced video's frame
    if p.font_size > 0 and p.density > 0 and 0 <= p.jitter_fraction <= 0.5:
        for v in campaign.videos:
            if v.frame_width <= 0 or v.frame_height <= 0:
                continue
            try:
                generate_chart(ChartParams(
                    frame_width=v.frame_width,
                    frame_height=v.frame_height,
                    font_size=p.font_size,
                    density=p.density,
                    jitter_fraction=p.jitter_fraction,
                    seed=0,
                ))
            except Exception as exc:  # noqa: BLE001 - collect, do not raise
                issues.append(f"videos[{v.video_id}]: chart generation fails: {exc}")
    return issues


@dataclass(frozen=True)
class TrialSpec:
    """One clip-then-chart unit inside a session."""

    video_id: str
    frame_time_ms: int
    clip_start_ms: int
    chart: ChartSpec
    chart_seconds: float

    def to_dict(self):
        return {
            "video_id": self.video_id,
            "frame_time_ms": self.frame_time_ms,
            "clip_start_ms": self.clip_start_ms,
            "chart": self.chart.to_dict(),
            "chart_seconds": self.chart_seconds,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            video_id=str(data["video_id"]),
            frame_time_ms=int(data["frame_time_ms"]),
            clip_start_ms=int(data["clip_start_ms"]),
            chart=ChartSpec.from_dict(data["chart"]),
            chart_seconds=float(data["chart_seconds"]),
        )


class SessionStatus(Enum):
    SCREENING = "screening"
    RUNNING = "running"
    COMPLETED = "completed"
    ABANDONED = "abandoned"
    REJECTED = "rejected"


@dataclass
class Session:
    """One participant's work unit. Status is derived, never stored.

    screening mirrors the participant's current screening state; trials
    are pre-built at session creation so the whole session is a pure
    function of (campaign, participant, seed).
    """

    session_id: str
    campaign_id: str
    participant_id: str
    seed: int
    trials: tuple
    screening: ScreeningState = field(default_factory=ScreeningState)
    cursor: int = 0
    abandoned: bool = False

    @property
    def status(self) -> SessionStatus:
        if self.abandoned:
            return SessionStatus.ABANDONED
        s = self.screening.status
        if s is ScreeningStatus.REJECTED:
            return SessionStatus.REJECTED
        if s is ScreeningStatus.IN_TRAINING:
            return SessionStatus.SCREENING
        if self.cursor >= len(self.trials):
            return SessionStatus.COMPLETED
        return SessionStatus.RUNNING

    def to_dict(self):
        return {
            "session_id": self.session_id,
            "campaign_id": self.campaign_id,
            "participant_id": self.participant_id,
            "seed": self.seed,
            "trials": [t.to_dict() for t in self.trials],
            "screening": self.screening.to_dict(),
            "cursor": self.cursor,
            "abandoned": self.abandoned,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            session_id=str(data["session_id"]),
            campaign_id=str(data["campaign_id"]),
            participant_id=str(data["participant_id"]),
            seed=int(data["seed"]),
            trials=tuple(TrialSpec.from_dict(t) for t in data["trials"]),
            screening=ScreeningState.from_dict(data["screening"]),
            cursor=int(data["cursor"]),
            abandoned=bool(data["abandoned"]),
        )


def build_session(campaign: Campaign, participant_id: str, seed: int,
                  session_id: str | None = None,
                  screening: ScreeningState | None = None) -> Session:
    """Assemble a session: sample a batch of frames and pre-build charts.

    Frames are drawn without replacement from the campaign's frames of
    interest (all of them when there are fewer than batch_size). Each
    trial's clip runs the clip_seconds window ending at its frame, and
    its chart seed is derived from (seed, trial index) so charts are
    replayable and distinct.
    """
    k = min(campaign.batch_size, len(campaign.frames_of_interest))
    order = rng_from(seed, NS_TRIAL).permutation(len(campaign.frames_of_interest))[:k]
    trials = []
    for j, idx in enumerate(order):
        foi = campaign.frames_of_interest[int(idx)]
        video = campaign.video(foi.video_id)
        clip_start = max(0, foi.frame_time_ms - int(round(campaign.params.clip_seconds * 1000)))
        chart = generate_chart(ChartParams(
            frame_width=video.frame_width,
            frame_height=video.frame_height,
            font_size=campaign.params.font_size,
            density=campaign.params.density,
            jitter_fraction=campaign.params.jitter_fraction,
            seed=derive_seed(seed, NS_TRIAL, j),
        ))
        trials.append(TrialSpec(
            video_id=foi.video_id,
            frame_time_ms=foi.frame_time_ms,
            clip_start_ms=clip_start,
            chart=chart,
            chart_seconds=campaign.params.chart_seconds,
        ))
    return Session(
        session_id=session_id if session_id is not None else f"s{seed:x}",
        campaign_id=campaign.campaign_id,
        participant_id=participant_id,
        seed=int(seed),
        trials=tuple(trials),
        screening=screening if screening is not None else ScreeningState(),
    )


SAMPLE_CSV_HEADER = (
    "campaign_id,video_id,frame_time_ms,participant_id,session_id,"
    "reported_text,x,y,valid,submitted_at"
)


@dataclass(frozen=True)
class GazeSample:
    """One trial report resolved against its chart."""

    campaign_id: str
    video_id: str
    frame_time_ms: int
    participant_id: str
    session_id: str
    reported_text: str
    x: float | None
    y: float | None
    valid: bool
    submitted_at: float  # unix seconds

    def to_dict(self):
        return {
            "campaign_id": self.campaign_id,
            "video_id": self.video_id,
            "frame_time_ms": self.frame_time_ms,
            "participant_id": self.participant_id,
            "session_id": self.session_id,
            "reported_text": self.reported_text,
            "x": self.x,
            "y": self.y,
            "valid": self.valid,
            "submitted_at": self.submitted_at,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            campaign_id=str(data["campaign_id"]),
            video_id=str(data["video_id"]),
            frame_time_ms=int(data["frame_time_ms"]),
            participant_id=str(data["participant_id"]),
            session_id=str(data["session_id"]),
            reported_text=str(data["reported_text"]),
            x=None if data["x"] is None else float(data["x"]),
            y=None if data["y"] is None else float(data["y"]),
            valid=bool(data["valid"]),
            submitted_at=float(data["submitted_at"]),
        )


def submit_trial_response(session: Session, campaign: Campaign, trial_index: int,
                          raw_text: str, submitted_at: float) -> GazeSample:
    """Resolve one trial report, advance the cursor and emit a sample.

    Only the trial at the cursor of a running session may be answered;
    anything else (already answered, skipped ahead, session not running)
    raises ProtocolError. Off-chart text still produces a sample, just
    one with valid=False and no location.
    """
    if session.status is not SessionStatus.RUNNING:
        raise ProtocolError(
            f"session {session.session_id} is {session.status.value}, not running"
        )
    if trial_index != session.cursor:
        if 0 <= trial_index < session.cursor:
            raise ProtocolError(f"trial {trial_index} was already answered")
        raise ProtocolError(
            f"trial {trial_index} is out of order; next expected is {session.cursor}"
        )
    trial = session.trials[trial_index]
    loc = lookup(trial.chart, raw_text)
    session.cursor += 1
    return GazeSample(
        campaign_id=campaign.campaign_id,
        video_id=trial.video_id,
        frame_time_ms=trial.frame_time_ms,
        participant_id=session.participant_id,
        session_id=session.session_id,
        reported_text=raw_text,
        x=None if loc is None else loc[0],
        y=None if loc is None else loc[1],
        valid=loc is not None,
        submitted_at=submitted_at,
    )


def _format_timestamp(unix_seconds):
    return datetime.fromtimestamp(unix_seconds, tz=timezone.utc).isoformat()


def write_samples_csv(samples, fileobj=None) -> str:
    """Render samples in the export schema; returns the CSV text.

    Invalid samples keep their reported_text but have empty x and y
    cells. submitted_at is ISO 8601 UTC.
    """
    out = fileobj if fileobj is not None else io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SAMPLE_CSV_HEADER.split(","))
    for s in samples:
        writer.writerow([
            s.campaign_id,
            s.video_id,
            s.frame_time_ms,
            s.participant_id,
            s.session_id,
            s.reported_text,
            "" if s.x is None else repr(float(s.x)),
            "" if s.y is None else repr(float(s.y)),
            "true" if s.valid else "false",
            _format_timestamp(s.submitted_at),
        ])
    return out.getvalue() if fileobj is None else ""


def admit_participant(screen_width: int, screen_height: int,
                      min_width: int = defaults.MIN_SCREEN_WIDTH,
                      min_height: int = defaults.MIN_SCREEN_HEIGHT) -> bool:
    """Screen-size gate: both dimensions must meet the minimum."""
    return screen_width >= min_width and screen_height >= min_height


def estimate_cost(n_locations: int, pay_per_session: float = defaults.PAY_PER_SESSION,
                  batch_size: int = defaults.BATCH_SIZE,
                  reports_per_location: int = 1) -> float:
    """Cost of collecting reports_per_location reports at n_locations.

    Each paid session yields batch_size reports, so the estimate is
    n_locations * reports_per_location / batch_size sessions, prorated
    rather than rounded up: campaigns mix locations across sessions, so
    partial batches amortize away at any realistic scale.
    """
    if n_locations < 0 or reports_per_location < 0:
        raise ParameterError("location and report counts must be >= 0")
    if batch_size < 1:
        raise ParameterError(f"batch_size must be >= 1, got {batch_size}")
    if pay_per_session < 0:
        raise ParameterError(f"pay_per_session must be >= 0, got {pay_per_session}")
    return n_locations * reports_per_location * pay_per_session / batch_size


def success_rate(samples) -> float:
    """Fraction of samples with a resolvable report. Zero samples is an error."""
    samples = list(samples)
    if not samples:
        raise ParameterError("success_rate needs at least one sample")
    return sum(1 for s in samples if s.valid) / len(samples)

"""Screening tutorials: moving-dot paths, scoring, and the pass/fail gate.

A tutorial shows a colored letter moving smoothly for a few seconds,
then flashes a probe chart. The participant reports the triplet nearest
to where the letter ended; if that triplet's anchor lies within the
approval radius of the letter's final position, the attempt passes.
Participants are approved after two passes and rejected after ten
attempts without them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from . import defaults
from .chart import ChartParams, ChartSpec, generate_chart, lookup
from .errors import ParameterError, StateError
from .seeding import NS_CHART, NS_COLOR, NS_PATH, derive_seed, rng_from

TUTORIAL_LETTER = "X"
COLORS = ("red", "green", "yellow", "cyan", "magenta")


@dataclass(frozen=True)
class PathParams:
    """Random-walk parameters for the moving letter.

    The letter starts at the frame center moving in initial_heading
    (drawn uniformly when None) at constant speed, with its heading
    perturbed by a normal step each sample and specular reflection off a
    margin band around the frame edge.
    """

    speed: float = 150.0  # px/s
    sample_rate: float = 60.0  # samples/s
    heading_sigma: float = 0.15  # radians per sample
    edge_margin: float = 2.0 * defaults.FONT_SIZE_PX
    initial_heading: float | None = None

    def __post_init__(self):
        if self.speed <= 0:
            raise ParameterError(f"speed must be positive, got {self.speed}")
        if self.sample_rate <= 0:
            raise ParameterError(f"sample_rate must be positive, got {self.sample_rate}")
        if self.heading_sigma < 0:
            raise ParameterError(f"heading_sigma must be >= 0, got {self.heading_sigma}")
        if self.edge_margin < 0:
            raise ParameterError(f"edge_margin must be >= 0, got {self.edge_margin}")


@dataclass(frozen=True)
class TutorialSpec:
    """One issued tutorial: the path to animate and the chart that follows."""

    duration: float
    letter: str
    color: str
    path: tuple  # ((t_seconds, x, y), ...) in sample order
    final_position: tuple
    chart: ChartSpec
    seed: int

    def to_dict(self):
        return {
            "duration": self.duration,
            "letter": self.letter,
            "color": self.color,
            "path": [[t, x, y] for (t, x, y) in self.path],
            "final_position": list(self.final_position),
            "chart": self.chart.to_dict(),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            duration=float(data["duration"]),
            letter=str(data["letter"]),
            color=str(data["color"]),
            path=tuple((float(t), float(x), float(y)) for t, x, y in data["path"]),
            final_position=tuple(float(v) for v in data["final_position"]),
            chart=ChartSpec.from_dict(data["chart"]),
            seed=int(data["seed"]),
        )


def generate_tutorial(path_params: PathParams, chart_params: ChartParams, seed: int,
                      duration: float = defaults.TUTORIAL_SECONDS) -> TutorialSpec:
    """Build a tutorial from a seed: path, color and chart are all derived.

    chart_params supplies the frame geometry; its own seed field is
    ignored and replaced by a sub-seed so tutorial charts never repeat
    across attempts. The path is a bounded random walk at exactly
    path_params.speed: each step turns by a normal heading increment and
    reflects off the margin band, so every sample keeps the letter at
    constant speed and inside the frame.
    """
    if duration <= 0:
        raise ParameterError(f"duration must be positive, got {duration}")
    width = float(chart_params.frame_width)
    height = float(chart_params.frame_height)
    margin = float(path_params.edge_margin)
    if margin < chart_params.font_size:
        raise ParameterError(
            f"edge_margin {margin:g} must be at least the font size {chart_params.font_size}"
        )
    lo_x, hi_x = margin, width - margin
    lo_y, hi_y = margin, height - margin
    if lo_x >= hi_x or lo_y >= hi_y:
        raise ParameterError(
            f"margin {margin:g} leaves no room inside a {width:g}x{height:g} frame"
        )

    n_steps = round(duration * path_params.sample_rate)
    if n_steps < 1:
        raise ParameterError("duration times sample_rate must be at least one sample")
    dt = duration / n_steps
    step = path_params.speed * dt
    if 2.0 * step > min(hi_x - lo_x, hi_y - lo_y):
        raise ParameterError(
            f"step {step:g}px too large for the {hi_x - lo_x:g}x{hi_y - lo_y:g} walk band"
        )

    rng = rng_from(seed, NS_PATH)
    x, y = width / 2.0, height / 2.0
    if path_params.initial_heading is None:
        theta = rng.random() * 2.0 * math.pi
    else:
        theta = float(path_params.initial_heading)

    path = [(0.0, x, y)]
    for k in range(1, n_steps + 1):
        theta += rng.normal(0.0, path_params.heading_sigma)
        dx = step * math.cos(theta)
        dy = step * math.sin(theta)
        if not lo_x <= x + dx <= hi_x:
            dx = -dx
            theta = math.pi - theta
        if not lo_y <= y + dy <= hi_y:
            dy = -dy
            theta = -theta
        x += dx
        y += dy
        path.append((k * dt, x, y))

    color = COLORS[int(rng_from(seed, NS_COLOR).integers(len(COLORS)))]
    chart = generate_chart(replace(chart_params, seed=derive_seed(seed, NS_CHART)))
    return TutorialSpec(
        duration=float(duration),
        letter=TUTORIAL_LETTER,
        color=color,
        path=tuple(path),
        final_position=(x, y),
        chart=chart,
        seed=int(seed),
    )


@dataclass(frozen=True)
class TutorialScore:
    passed: bool
    reason: str | None  # None, "invalid_triplet" or "outside_radius"
    distance: float | None  # anchor-to-letter distance, None for invalid text


def score_tutorial(spec: TutorialSpec, raw_text: str,
                   radius: float = defaults.APPROVAL_RADIUS_PX) -> TutorialScore:
    """Score one reported triplet against the letter's final position.

    Passing requires the resolved anchor to be strictly closer than the
    radius; a distance exactly equal to the radius fails. Text that does
    not resolve to a triplet on the chart (including empty input) fails
    with reason "invalid_triplet".
    """
    if radius <= 0:
        raise ParameterError(f"radius must be positive, got {radius}")
    loc = lookup(spec.chart, raw_text)
    if loc is None:
        return TutorialScore(passed=False, reason="invalid_triplet", distance=None)
    fx, fy = spec.final_position
    dist = math.hypot(loc[0] - fx, loc[1] - fy)
    if dist < radius:
        return TutorialScore(passed=True, reason=None, distance=dist)
    return TutorialScore(passed=False, reason="outside_radius", distance=dist)


class ScreeningStatus(Enum):
    IN_TRAINING = "in_training"
    APPROVED = "approved"
    REJECTED = "rejected"


@dataclass(frozen=True)
class ScreeningState:
    """Per-participant screening progress. Survives across sessions."""

    attempts: int = 0
    passes: int = 0

    def __post_init__(self):
        if not 0 <= self.passes <= self.attempts:
            raise ParameterError(
                f"passes {self.passes} must be within [0, attempts={self.attempts}]"
            )
        if self.attempts > defaults.MAX_TUTORIAL_ATTEMPTS:
            raise ParameterError(
                f"attempts {self.attempts} exceeds the cap of {defaults.MAX_TUTORIAL_ATTEMPTS}"
            )

    @property
    def status(self) -> ScreeningStatus:
        # approval is checked before rejection, so a pass on the final
        # allowed attempt still approves
        if self.passes >= defaults.REQUIRED_PASSES:
            return ScreeningStatus.APPROVED
        if self.attempts >= defaults.MAX_TUTORIAL_ATTEMPTS:
            return ScreeningStatus.REJECTED
        return ScreeningStatus.IN_TRAINING

    def to_dict(self):
        return {"attempts": self.attempts, "passes": self.passes}

    @classmethod
    def from_dict(cls, data):
        return cls(attempts=int(data["attempts"]), passes=int(data["passes"]))


def record_attempt(state: ScreeningState, passed: bool) -> ScreeningState:
    """Fold one tutorial outcome into the screening state.

    Terminal states are absorbing: recording an attempt for an approved
    or rejected participant raises StateError, so no more than ten
    tutorials can ever be recorded and none after approval.
    """
    if state.status is not ScreeningStatus.IN_TRAINING:
        raise StateError(f"screening already {state.status.value}; no further attempts allowed")
    return ScreeningState(attempts=state.attempts + 1, passes=state.passes + (1 if passed else 0))

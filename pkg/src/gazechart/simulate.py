"""Synthetic participants: reporting model, parameter sweeps, pipelines.

Nothing here touches the service; simulations drive the same chart,
scoring and analysis code a live deployment uses, which is what makes
sweep results transferable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import defaults
from .analysis import SampleSet, compare
from .chart import ChartParams, ChartSpec, generate_chart
from .errors import ParameterError
from .seeding import NS_SIM, NS_TRUTH, rng_from
from .tutorial import PathParams, generate_tutorial, score_tutorial

# sweep axes and the closed ranges they may cover
DENSITY_RANGE = (0.3, 1.0)
DURATION_RANGE = (0.1, 1.5)

DEFAULT_RADII = tuple(float(r) for r in range(20, 201, 20))


def default_read_probability(chart_seconds: float, density: float) -> float:
    """Chance a simulated participant reads a triplet correctly.

    Reading saturates once the chart is visible for half a second, and
    degrades linearly as density rises past the default 0.5 (tighter
    packing makes glyphs harder to isolate). Clamped to [0, 1].
    """
    time_factor = min(1.0, chart_seconds / 0.5)
    density_factor = 1.0 - 2.0 * max(0.0, density - 0.5)
    return min(1.0, max(0.0, time_factor * density_factor))


@dataclass(frozen=True)
class ParticipantModel:
    """Behavioral knobs for simulated reporters.

    When a participant fails to read the probed triplet they either type
    garbage (an impossible triplet, since "I" is never used) or misreport
    a random triplet that is on the chart.
    """

    gaze_noise_px: float = 15.0
    garbage_probability: float = 0.5
    read_probability: object = None  # callable (chart_seconds, density) -> [0, 1]

    def __post_init__(self):
        if self.gaze_noise_px < 0:
            raise ParameterError(f"gaze_noise_px must be >= 0, got {self.gaze_noise_px}")
        if not 0 <= self.garbage_probability <= 1:
            raise ParameterError(
                f"garbage_probability must be in [0, 1], got {self.garbage_probability}"
            )
        if self.read_probability is None:
            object.__setattr__(self, "read_probability", default_read_probability)

    def p_read(self, chart_seconds, density):
        p = float(self.read_probability(chart_seconds, density))
        return min(1.0, max(0.0, p))


def simulate_report(model: ParticipantModel, chart: ChartSpec, gaze,
                    chart_seconds: float, rng) -> str:
    """Text a simulated participant types after seeing the chart at gaze.

    The participant perceives the gaze point with isotropic normal noise
    and, on a successful read, reports the nearest triplet. The rng draw
    order is fixed (two noise draws, one read draw, then failure draws),
    so streams are stable across code paths.
    """
    px = gaze[0] + rng.normal(0.0, model.gaze_noise_px)
    py = gaze[1] + rng.normal(0.0, model.gaze_noise_px)
    if rng.random() < model.p_read(chart_seconds, chart.params.density):
        return chart.nearest_placement(px, py).label
    if rng.random() < model.garbage_probability:
        # "I" is excluded from the alphabet, so this never matches a chart
        return f"I{int(rng.integers(100)):02d}"
    return chart.placements[int(rng.integers(len(chart.placements)))].label


class UniformGaze:
    """True gaze uniform over the frame."""

    def draw(self, rng, width, height):
        return (rng.random() * width, rng.random() * height)


@dataclass(frozen=True)
class MixtureComponent:
    weight: float
    mean_x: float
    mean_y: float
    sigma_x: float
    sigma_y: float


@dataclass(frozen=True)
class GaussianMixtureGaze:
    """True gaze from a Gaussian mixture, truncated to the frame."""

    components: tuple

    def __post_init__(self):
        if not self.components:
            raise ParameterError("mixture needs at least one component")
        total = sum(c.weight for c in self.components)
        if total <= 0:
            raise ParameterError("mixture weights must sum to a positive value")
        for c in self.components:
            if c.weight < 0 or c.sigma_x <= 0 or c.sigma_y <= 0:
                raise ParameterError("weights must be >= 0 and sigmas positive")

    def draw(self, rng, width, height):
        weights = np.array([c.weight for c in self.components], dtype=np.float64)
        weights /= weights.sum()
        for _ in range(100):
            c = self.components[int(rng.choice(len(self.components), p=weights))]
            x = rng.normal(c.mean_x, c.sigma_x)
            y = rng.normal(c.mean_y, c.sigma_y)
            if 0 <= x < width and 0 <= y < height:
                return (x, y)
        # pathological mixture: clamp the last draw just inside the frame
        return (min(max(x, 0.0), math.nextafter(width, 0.0)),
                min(max(y, 0.0), math.nextafter(height, 0.0)))


@dataclass(frozen=True)
class SweepConfig:
    """One sweep axis: which parameter varies, and the trial budget."""

    axis: str  # "density" or "chart_seconds"
    values: tuple
    radii: tuple = DEFAULT_RADII
    trials: int = 200

    def __post_init__(self):
        if self.axis not in ("density", "chart_seconds"):
            raise ParameterError(f"unknown sweep axis {self.axis!r}")
        if not self.values:
            raise ParameterError("sweep needs at least one axis value")
        lo, hi = DENSITY_RANGE if self.axis == "density" else DURATION_RANGE
        for v in self.values:
            if not lo <= v <= hi:
                raise ParameterError(
                    f"{self.axis} value {v:g} outside the supported range [{lo:g}, {hi:g}]"
                )
        if not self.radii or any(r <= 0 for r in self.radii):
            raise ParameterError("radii must be a non-empty list of positive values")
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class SweepPoint:
    param_value: float
    radius: float
    trials: int
    successes: int

    @property
    def rate(self):
        return self.successes / self.trials


SWEEP_CSV_HEADER = "param_value,R_a,trials,successes,rate"


def write_sweep_csv(points, fileobj=None) -> str:
    import io

    out = fileobj if fileobj is not None else io.StringIO()
    out.write(SWEEP_CSV_HEADER + "\n")
    for p in points:
        out.write(f"{p.param_value:g},{p.radius:g},{p.trials},{p.successes},{p.rate!r}\n")
    return out.getvalue() if fileobj is None else ""


def run_tutorial_sweep(config: SweepConfig, model: ParticipantModel,
                       path_params: PathParams, chart_params: ChartParams,
                       seed: int, chart_seconds: float = defaults.CHART_SECONDS):
    """Simulated screening success rates across one parameter axis.

    Every trial generates a tutorial, simulates a report of the triplet
    chart shown at its end, and scores that single report against every
    radius in the config, so rates are exactly non-decreasing in the
    radius by construction. Returns SweepPoints in (value, radius) order.
    """
    points = []
    for vi, value in enumerate(config.values):
        if config.axis == "density":
            cp = replace(chart_params, density=float(value))
            t_c = chart_seconds
        else:
            cp = chart_params
            t_c = float(value)
        successes = {r: 0 for r in config.radii}
        for t in range(config.trials):
            trial_seed = rng_from(seed, NS_SIM, vi, t).integers(2**63)
            spec = generate_tutorial(path_params, cp, int(trial_seed))
            rng = rng_from(seed, NS_SIM, vi, t, 1)
            text = simulate_report(model, spec.chart, spec.final_position, t_c, rng)
            for r in config.radii:
                if score_tutorial(spec, text, radius=r).passed:
                    successes[r] += 1
        for r in config.radii:
            points.append(SweepPoint(
                param_value=float(value), radius=float(r),
                trials=config.trials, successes=successes[r],
            ))
    return points


@dataclass(frozen=True)
class PipelineRecord:
    """One simulated trial: where the participant looked and what came back."""

    gaze: tuple
    reported_text: str
    location: tuple | None


@dataclass(frozen=True)
class PipelineResult:
    ours: SampleSet  # resolved anchors (valid reports only)
    truth: SampleSet  # fresh draws from the true distribution
    records: tuple


def run_pipeline(truth_model, n_participants: int, chart_params: ChartParams,
                 model: ParticipantModel, seed: int,
                 chart_seconds: float = defaults.CHART_SECONDS,
                 truth_draws: int | None = None) -> PipelineResult:
    """End-to-end collection simulation against a known gaze distribution.

    Each participant gets their own chart (fresh seed) and one gaze draw
    from truth_model; the resolved anchors become the collected sample
    set. A disjoint stream draws the truth reference set.
    """
    if n_participants < 1:
        raise ParameterError(f"n_participants must be >= 1, got {n_participants}")
    width = chart_params.frame_width
    height = chart_params.frame_height
    records = []
    ours = []
    for i in range(n_participants):
        rng = rng_from(seed, NS_SIM, i)
        chart = generate_chart(replace(chart_params, seed=int(rng.integers(2**63))))
        gaze = truth_model.draw(rng, width, height)
        text = simulate_report(model, chart, gaze, chart_seconds, rng)
        loc = chart.location_of(text)
        records.append(PipelineRecord(gaze=gaze, reported_text=text, location=loc))
        if loc is not None:
            ours.append(loc)
    t_rng = rng_from(seed, NS_TRUTH)
    n_truth = truth_draws if truth_draws is not None else max(len(ours), 1)
    truth_pts = [truth_model.draw(t_rng, width, height) for _ in range(n_truth)]
    return PipelineResult(
        ours=SampleSet.from_points(width, height, ours),
        truth=SampleSet.from_points(width, height, truth_pts),
        records=tuple(records),
    )

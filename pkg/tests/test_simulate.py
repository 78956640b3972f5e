import numpy as np
import pytest

from gazechart.chart import ChartParams, generate_chart
from gazechart.errors import ParameterError
from gazechart.seeding import rng_from
from gazechart.simulate import (
    DEFAULT_RADII,
    SWEEP_CSV_HEADER,
    GaussianMixtureGaze,
    MixtureComponent,
    ParticipantModel,
    SweepConfig,
    UniformGaze,
    default_read_probability,
    run_pipeline,
    run_tutorial_sweep,
    simulate_report,
    write_sweep_csv,
)
from gazechart.tutorial import PathParams

CP = ChartParams(frame_width=1024, frame_height=576, seed=0)

ALWAYS_READ = ParticipantModel(gaze_noise_px=0.0,
                               read_probability=lambda t, d: 1.0)
NEVER_READ_GARBAGE = ParticipantModel(garbage_probability=1.0,
                                      read_probability=lambda t, d: 0.0)
NEVER_READ_MISREPORT = ParticipantModel(garbage_probability=0.0,
                                        read_probability=lambda t, d: 0.0)


def test_default_read_probability_shape():
    assert default_read_probability(1.0, 0.5) == 1.0
    assert default_read_probability(0.25, 0.5) == 0.5  # linear below saturation
    assert default_read_probability(2.0, 0.5) == 1.0  # saturates
    assert default_read_probability(1.0, 1.0) == 0.0  # fully degraded
    assert default_read_probability(1.0, 0.75) == pytest.approx(0.5)
    assert default_read_probability(1.0, 0.3) == 1.0  # no penalty below default
    # monotone: non-increasing in density, non-decreasing in duration
    for t in (0.1, 0.5, 1.5):
        probs = [default_read_probability(t, d) for d in np.linspace(0.3, 1.0, 15)]
        assert all(a >= b - 1e-12 for a, b in zip(probs, probs[1:]))
    for d in (0.3, 0.5, 0.8):
        probs = [default_read_probability(t, d) for t in np.linspace(0.1, 1.5, 15)]
        assert all(b >= a - 1e-12 for a, b in zip(probs, probs[1:]))


def test_simulate_report_perfect_reader_reports_nearest():
    chart = generate_chart(CP)
    rng = rng_from(1)
    for _ in range(50):
        gaze = (rng.random() * 1024, rng.random() * 576)
        text = simulate_report(ALWAYS_READ, chart, gaze, 1.0, rng)
        assert text == chart.nearest_placement(*gaze).label


def test_simulate_report_garbage_never_resolves():
    chart = generate_chart(CP)
    rng = rng_from(2)
    for _ in range(50):
        text = simulate_report(NEVER_READ_GARBAGE, chart, (500.0, 300.0), 1.0, rng)
        assert text.startswith("I")
        assert chart.location_of(text) is None


def test_simulate_report_misreport_is_on_chart():
    chart = generate_chart(CP)
    rng = rng_from(3)
    labels = {p.label for p in chart.placements}
    for _ in range(50):
        text = simulate_report(NEVER_READ_MISREPORT, chart, (500.0, 300.0), 1.0, rng)
        assert text in labels


def test_simulate_report_valid_fraction_tracks_model():
    # expected valid fraction = p_read + (1 - p_read) * (1 - p_garbage)
    chart = generate_chart(CP)
    model = ParticipantModel(read_probability=lambda t, d: 0.6,
                             garbage_probability=0.5)
    rng = rng_from(4)
    n = 4000
    valid = sum(
        chart.location_of(simulate_report(model, chart, (500.0, 300.0), 1.0, rng)) is not None
        for _ in range(n)
    )
    assert valid / n == pytest.approx(0.6 + 0.4 * 0.5, abs=0.03)


def test_model_validation():
    with pytest.raises(ParameterError):
        ParticipantModel(gaze_noise_px=-1.0)
    with pytest.raises(ParameterError):
        ParticipantModel(garbage_probability=1.5)


def test_sweep_config_validation():
    with pytest.raises(ParameterError):
        SweepConfig(axis="speed", values=(0.5,))
    with pytest.raises(ParameterError):
        SweepConfig(axis="density", values=(0.2,))  # below supported range
    with pytest.raises(ParameterError):
        SweepConfig(axis="chart_seconds", values=(2.0,))
    with pytest.raises(ParameterError):
        SweepConfig(axis="density", values=(0.5,), trials=0)
    with pytest.raises(ParameterError):
        SweepConfig(axis="density", values=(0.5,), radii=())
    with pytest.raises(ParameterError):
        SweepConfig(axis="density", values=())


def test_sweep_rates_monotone_in_radius_and_deterministic():
    cfg = SweepConfig(axis="density", values=(0.4, 0.6), radii=(20.0, 60.0, 120.0),
                      trials=40)
    pts = run_tutorial_sweep(cfg, ParticipantModel(), PathParams(), CP, seed=5)
    assert len(pts) == 2 * 3
    by_value = {}
    for p in pts:
        by_value.setdefault(p.param_value, []).append(p)
    for value, group in by_value.items():
        rates = [p.rate for p in sorted(group, key=lambda p: p.radius)]
        assert all(a <= b + 1e-12 for a, b in zip(rates, rates[1:]))
    again = run_tutorial_sweep(cfg, ParticipantModel(), PathParams(), CP, seed=5)
    assert pts == again


def test_sweep_csv_format():
    cfg = SweepConfig(axis="density", values=(0.5,), radii=(100.0,), trials=10)
    pts = run_tutorial_sweep(cfg, ParticipantModel(), PathParams(), CP, seed=6)
    text = write_sweep_csv(pts)
    lines = text.strip().split("\n")
    assert lines[0] == SWEEP_CSV_HEADER
    assert len(lines) == 2
    value, radius, trials, successes, rate = lines[1].split(",")
    assert float(value) == 0.5 and float(radius) == 100.0
    assert int(trials) == 10
    assert float(rate) == pytest.approx(int(successes) / 10)


def test_default_radii_cover_20_to_200():
    assert DEFAULT_RADII[0] == 20.0
    assert DEFAULT_RADII[-1] == 200.0
    assert len(DEFAULT_RADII) == 10


def test_uniform_gaze_in_frame():
    rng = rng_from(7)
    model = UniformGaze()
    for _ in range(200):
        x, y = model.draw(rng, 100, 50)
        assert 0 <= x < 100 and 0 <= y < 50


def test_mixture_gaze_in_frame_and_clustered():
    truth = GaussianMixtureGaze(components=(
        MixtureComponent(weight=1.0, mean_x=50.0, mean_y=25.0, sigma_x=5.0, sigma_y=5.0),
    ))
    rng = rng_from(8)
    pts = np.array([truth.draw(rng, 100, 50) for _ in range(300)])
    assert np.all((pts[:, 0] >= 0) & (pts[:, 0] < 100))
    assert np.all((pts[:, 1] >= 0) & (pts[:, 1] < 50))
    assert abs(pts[:, 0].mean() - 50.0) < 2.0


def test_mixture_validation():
    with pytest.raises(ParameterError):
        GaussianMixtureGaze(components=())
    with pytest.raises(ParameterError):
        GaussianMixtureGaze(components=(
            MixtureComponent(weight=1.0, mean_x=0, mean_y=0, sigma_x=0, sigma_y=1),
        ))


def test_run_pipeline_accounting():
    truth = GaussianMixtureGaze(components=(
        MixtureComponent(weight=1.0, mean_x=500.0, mean_y=300.0, sigma_x=80.0, sigma_y=60.0),
    ))
    res = run_pipeline(truth, 50, CP, ParticipantModel(), seed=9, truth_draws=70)
    assert len(res.records) == 50
    assert res.truth.n == 70
    valid = [r for r in res.records if r.location is not None]
    assert res.ours.n == len(valid)
    # with the default model at defaults, most reports resolve
    assert res.ours.n >= 40
    again = run_pipeline(truth, 50, CP, ParticipantModel(), seed=9, truth_draws=70)
    assert again.records == res.records
    with pytest.raises(ParameterError):
        run_pipeline(truth, 0, CP, ParticipantModel(), seed=1)

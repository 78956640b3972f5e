import json
import subprocess
import sys

import pytest

from gazechart.analysis import write_reference_csv
from gazechart.cli import run


def gazechart(*args):
    return subprocess.run([sys.executable, "-m", "gazechart", *args],
                          capture_output=True, text=True)


@pytest.fixture()
def sample_csv(tmp_path):
    rows = [(0, 100.0 + 7 * i, 50.0 + 3 * i) for i in range(30)]
    path = tmp_path / "samples.csv"
    path.write_text(write_reference_csv(640, 360, rows))
    return path


def test_chart_is_byte_deterministic(tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert run(["chart", "--seed", "5", "--out", str(out1)]) == 0
    assert run(["chart", "--seed", "5", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    spec = json.loads(out1.read_text())
    assert spec["d_v"] == 40 and spec["d_h"] == 80
    assert len(spec["placements"]) == 168


def test_chart_seed_required():
    result = gazechart("chart")
    assert result.returncode == 2


def test_chart_infeasible_geometry_exits_2(tmp_path):
    assert run(["chart", "--seed", "1", "--width", "50", "--height", "20",
                "--out", str(tmp_path / "x.json")]) == 2


def test_cost_output(capsys):
    assert run(["cost", "--locations", "100"]) == 0
    assert capsys.readouterr().out == "2.50\n"
    assert run(["cost", "--locations", "100", "--pay", "0.30", "--batch-size", "5"]) == 0
    assert capsys.readouterr().out == "6.00\n"


def test_aggregate_writes_density_and_heatmap(tmp_path, sample_csv):
    dens = tmp_path / "d.json"
    heat = tmp_path / "h.pgm"
    assert run(["aggregate", str(sample_csv), "--downsample", "4",
                "--out-density", str(dens), "--out-heatmap", str(heat)]) == 0
    grid = json.loads(dens.read_text())
    assert grid["width"] == 640 and grid["downsample"] == 4
    total = sum(sum(row) for row in grid["values"])
    assert abs(total - 1.0) < 1e-9
    assert heat.read_bytes().startswith(b"P5\n160 90\n255\n")


def test_aggregate_malformed_csv_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("# width=64 height=36\nframe_time_ms,x,y\n0,what,3\n")
    assert run(["aggregate", str(bad)]) == 2
    assert "line" in capsys.readouterr().err


def test_aggregate_empty_data_exits_3(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("# width=64 height=36\nframe_time_ms,x,y\n")
    assert run(["aggregate", str(empty)]) == 3


def test_aggregate_missing_file_exits_2(tmp_path):
    assert run(["aggregate", str(tmp_path / "nope.csv")]) == 2


def test_compare_reports_chi2(tmp_path, sample_csv, capsys):
    other = tmp_path / "other.csv"
    rows = [(0, 104.0 + 7 * i, 52.0 + 3 * i) for i in range(30)]
    other.write_text(write_reference_csv(640, 360, rows))
    assert run(["compare", str(sample_csv), str(other), "--downsample", "4"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert set(report) >= {"chi2_ours", "chi2_uniform", "n_ours", "n_reference"}
    assert report["chi2_ours"] < report["chi2_uniform"]


def test_compare_dimension_mismatch_exits_3(tmp_path, sample_csv):
    other = tmp_path / "other.csv"
    other.write_text(write_reference_csv(64, 36, [(0, 5, 5)] * 3))
    assert run(["compare", str(sample_csv), str(other)]) == 3


def test_sweep_csv_complete(tmp_path):
    out = tmp_path / "sweep.csv"
    assert run(["sweep", "--axis", "density", "--start", "0.4", "--stop", "0.6",
                "--step", "0.1", "--radii", "50,100", "--trials", "4",
                "--seed", "9", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "param_value,R_a,trials,successes,rate"
    assert len(lines) == 1 + 3 * 2
    values = {line.split(",")[0] for line in lines[1:]}
    assert values == {"0.4", "0.5", "0.6"}


def test_sweep_zero_trials_exits_2():
    assert run(["sweep", "--axis", "density", "--trials", "0", "--seed", "1"]) == 2


def test_sweep_out_of_range_values_exit_2():
    assert run(["sweep", "--axis", "density", "--start", "0.1", "--stop", "0.2",
                "--step", "0.1", "--trials", "2", "--seed", "1"]) == 2


def test_sweep_deterministic(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["sweep", "--axis", "duration", "--start", "0.5", "--stop", "0.7",
            "--step", "0.2", "--radii", "100", "--trials", "3", "--seed", "4"]
    assert run([*args, "--out", str(a)]) == 0
    assert run([*args, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entrypoint_runs():
    result = gazechart("cost", "--locations", "6")
    assert result.returncode == 0
    assert result.stdout == "0.15\n"

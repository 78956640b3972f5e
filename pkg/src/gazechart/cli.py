"""Command line tools: chart generation, sweeps, aggregation, comparison, cost.

Outputs are byte-deterministic for a fixed seed and inputs; commands
that need randomness require an explicit --seed and never fall back to
wall-clock seeding. Exit codes: 0 success, 2 unusable invocation or
malformed input, 3 well-formed data that cannot support the request.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import defaults
from .analysis import compare, estimate_density, ingest_reference, render_heatmap
from .chart import ChartParams, generate_chart
from .errors import DataError, GazechartError, ParameterError, ParseError
from .session import estimate_cost
from .simulate import (
    DEFAULT_RADII,
    ParticipantModel,
    SweepConfig,
    run_tutorial_sweep,
    write_sweep_csv,
)
from .tutorial import PathParams


def _add_chart_geometry(parser):
    parser.add_argument("--width", type=int, default=1024, help="frame width in px")
    parser.add_argument("--height", type=int, default=576, help="frame height in px")
    parser.add_argument("--font-size", type=int, default=defaults.FONT_SIZE_PX)
    parser.add_argument("--density", type=float, default=defaults.TRIPLET_DENSITY)
    parser.add_argument("--jitter", type=float, default=defaults.JITTER_FRACTION)


def _write_out(path, data):
    if path is None or path == "-":
        if isinstance(data, bytes):
            sys.stdout.buffer.write(data)
        else:
            sys.stdout.write(data)
        return
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(path, mode) as fh:
        fh.write(data)


def cmd_chart(args) -> int:
    params = ChartParams(
        frame_width=args.width,
        frame_height=args.height,
        font_size=args.font_size,
        density=args.density,
        jitter_fraction=args.jitter,
        seed=args.seed,
    )
    spec = generate_chart(params)
    _write_out(args.out, spec.to_json_bytes() + b"\n")
    return 0


def _axis_values(args):
    if args.axis == "density":
        start, stop, step = 0.3, 1.0, 0.1
    else:
        start, stop, step = 0.1, 1.5, 0.2
    start = args.start if args.start is not None else start
    stop = args.stop if args.stop is not None else stop
    step = args.step if args.step is not None else step
    if step <= 0 or stop < start:
        raise ParameterError(f"bad axis range start={start} stop={stop} step={step}")
    count = int((stop - start) / step + 0.5) + 1
    return tuple(round(start + i * step, 9) for i in range(count))


def cmd_sweep(args) -> int:
    axis = "density" if args.axis == "density" else "chart_seconds"
    values = _axis_values(args)
    radii = tuple(float(r) for r in args.radii.split(","))
    config = SweepConfig(axis=axis, values=values, radii=radii, trials=args.trials)
    chart_params = ChartParams(
        frame_width=args.width,
        frame_height=args.height,
        font_size=args.font_size,
        density=args.density,
        jitter_fraction=args.jitter,
        seed=0,
    )
    points = run_tutorial_sweep(
        config, ParticipantModel(), PathParams(edge_margin=2.0 * args.font_size),
        chart_params, seed=args.seed,
    )
    _write_out(args.out, write_sweep_csv(points))
    return 0


def cmd_aggregate(args) -> int:
    samples = ingest_reference(args.input)
    grid = estimate_density(samples, downsample=args.downsample, bandwidth=args.bandwidth)
    if args.out_density:
        _write_out(args.out_density,
                   json.dumps(grid.to_dict(), sort_keys=True, separators=(",", ":")) + "\n")
    if args.out_heatmap:
        _write_out(args.out_heatmap, render_heatmap(grid))
    if not args.out_density and not args.out_heatmap:
        _write_out(None, json.dumps(grid.to_dict(), sort_keys=True, separators=(",", ":")) + "\n")
    return 0


def cmd_compare(args) -> int:
    ours = ingest_reference(args.ours)
    reference = ingest_reference(args.reference)
    report = compare(ours, reference, downsample=args.downsample, bandwidth=args.bandwidth)
    sys.stdout.write(json.dumps(report.to_dict(), sort_keys=True) + "\n")
    return 0


def cmd_cost(args) -> int:
    amount = estimate_cost(args.locations, args.pay, args.batch_size,
                           reports_per_location=args.reports)
    sys.stdout.write(f"{amount:.2f}\n")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="gazechart")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chart", help="generate a probe chart as JSON")
    _add_chart_geometry(p)
    p.add_argument("--seed", type=int, required=True, help="chart seed (required)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("sweep", help="simulate screening over a parameter axis")
    p.add_argument("--axis", choices=("density", "duration"), required=True)
    p.add_argument("--start", type=float, default=None)
    p.add_argument("--stop", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--radii", default=",".join(f"{r:g}" for r in DEFAULT_RADII),
                   help="comma-separated approval radii in px")
    p.add_argument("--trials", type=int, default=50, help="simulated attempts per point")
    p.add_argument("--seed", type=int, required=True)
    _add_chart_geometry(p)
    p.add_argument("--out", default=None, help="output CSV path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("aggregate", help="estimate a density from a gaze CSV")
    p.add_argument("input", help="gaze CSV (# width=W height=H header)")
    p.add_argument("--downsample", type=int, default=1)
    p.add_argument("--bandwidth", type=float, default=None)
    p.add_argument("--out-density", default=None, help="density JSON output path")
    p.add_argument("--out-heatmap", default=None, help="PGM heatmap output path")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("compare", help="chi-square compare two gaze CSVs")
    p.add_argument("ours")
    p.add_argument("reference")
    p.add_argument("--downsample", type=int, default=1)
    p.add_argument("--bandwidth", type=float, default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("cost", help="estimate collection cost")
    p.add_argument("--locations", type=int, required=True)
    p.add_argument("--pay", type=float, default=defaults.PAY_PER_SESSION)
    p.add_argument("--batch-size", type=int, default=defaults.BATCH_SIZE)
    p.add_argument("--reports", type=int, default=1, help="reports wanted per location")
    p.set_defaults(func=cmd_cost)
    return parser


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        lines = ", ".join(map(str, exc.line_numbers)) or "?"
        print(f"error: {exc} (line {lines})", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GazechartError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())

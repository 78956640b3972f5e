"""Gaze density estimation and distribution comparison.

Reported anchors for a frame are turned into a continuous density with a
Gaussian kernel estimate evaluated on a pixel grid (optionally
downsampled), and densities are compared with the chi-square histogram
distance. All grids are row-major with the origin at the top-left pixel
center, matching screen coordinates.
"""

from __future__ import annotations

import io
import re
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import defaults, kernels
from .errors import DataError, EmptyDataError, ParameterError, ParseError

GRID_SUM_TOLERANCE = 1e-9

REFERENCE_HEADER = "frame_time_ms,x,y"
_DIMS_RE = re.compile(r"#\s*width=(\d+)\s+height=(\d+)\s*")


@dataclass(frozen=True)
class SampleSet:
    """Gaze points for one frame size. Coordinates live in [0, width) x [0, height)."""

    width: int
    height: int
    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ParameterError(f"frame must be at least 1x1, got {self.width}x{self.height}")
        xs = np.asarray(self.xs, dtype=np.float64).reshape(-1)
        ys = np.asarray(self.ys, dtype=np.float64).reshape(-1)
        if xs.shape != ys.shape:
            raise ParameterError(f"xs and ys differ in length: {xs.shape[0]} vs {ys.shape[0]}")
        if xs.size and not (
            np.all(xs >= 0) and np.all(xs < self.width)
            and np.all(ys >= 0) and np.all(ys < self.height)
        ):
            raise ParameterError("sample coordinates must lie inside the frame")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self):
        return int(self.xs.size)

    @classmethod
    def from_points(cls, width, height, points):
        pts = [(float(x), float(y)) for x, y in points]
        return cls(width=width, height=height,
                   xs=np.array([p[0] for p in pts]), ys=np.array([p[1] for p in pts]))

    @classmethod
    def from_gaze_samples(cls, width, height, samples):
        """Valid samples only; invalid reports carry no location."""
        pts = [(s.x, s.y) for s in samples if s.valid]
        return cls.from_points(width, height, pts)


def ingest_reference(source, frame_time_ms=None) -> SampleSet:
    """Parse a reference gaze CSV into a SampleSet.

    Expected layout: a dimension comment on line 1 ("# width=W height=H"),
    the header "frame_time_ms,x,y" on line 2, then one point per row.
    Malformed rows raise ParseError naming every offending 1-based line.
    In-file points outside the frame are dropped, with the count reported
    through a UserWarning. frame_time_ms, when given, keeps only rows for
    that frame time.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    else:
        lines = source.read().splitlines()
    if not lines:
        raise ParseError("empty file: missing dimension comment", line_numbers=(1,))
    m = _DIMS_RE.fullmatch(lines[0].strip())
    if m is None:
        raise ParseError(
            f"line 1 must be '# width=W height=H', got {lines[0]!r}", line_numbers=(1,)
        )
    width, height = int(m.group(1)), int(m.group(2))
    if len(lines) < 2 or lines[1].strip() != REFERENCE_HEADER:
        got = lines[1] if len(lines) > 1 else ""
        raise ParseError(
            f"line 2 must be the header {REFERENCE_HEADER!r}, got {got!r}", line_numbers=(2,)
        )
    xs, ys = [], []
    bad = []
    dropped = 0
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        parts = line.split(",")
        try:
            if len(parts) != 3:
                raise ValueError
            t = int(parts[0])
            x = float(parts[1])
            y = float(parts[2])
            if not (np.isfinite(x) and np.isfinite(y)):
                raise ValueError
        except ValueError:
            bad.append(lineno)
            continue
        if frame_time_ms is not None and t != int(frame_time_ms):
            continue
        if 0 <= x < width and 0 <= y < height:
            xs.append(x)
            ys.append(y)
        else:
            dropped += 1
    if bad:
        raise ParseError(
            f"malformed rows at line(s) {', '.join(map(str, bad))}", line_numbers=bad
        )
    if dropped:
        warnings.warn(f"dropped {dropped} out-of-frame point(s)", UserWarning, stacklevel=2)
    return SampleSet(width=width, height=height, xs=np.array(xs), ys=np.array(ys))


def write_reference_csv(width, height, rows, fileobj=None) -> str:
    """Inverse of ingest_reference; rows are (frame_time_ms, x, y) triples."""
    out = fileobj if fileobj is not None else io.StringIO()
    out.write(f"# width={int(width)} height={int(height)}\n")
    out.write(REFERENCE_HEADER + "\n")
    for t, x, y in rows:
        out.write(f"{int(t)},{float(x)!r},{float(y)!r}\n")
    return out.getvalue() if fileobj is None else ""


@dataclass(frozen=True)
class DensityGrid:
    """A discrete probability distribution over (downsampled) pixels.

    values[j, i] is the mass of the cell covering pixels
    [i*k, (i+1)*k) x [j*k, (j+1)*k) for k = downsample; edge cells may
    cover fewer pixels. Total mass is 1 within GRID_SUM_TOLERANCE.
    """

    width: int
    height: int
    downsample: int
    values: np.ndarray

    def __post_init__(self):
        if self.downsample < 1:
            raise ParameterError(f"downsample must be >= 1, got {self.downsample}")
        vals = np.asarray(self.values, dtype=np.float64)
        gw = -(-self.width // self.downsample)
        gh = -(-self.height // self.downsample)
        if vals.shape != (gh, gw):
            raise ParameterError(
                f"values shape {vals.shape} does not match expected ({gh}, {gw})"
            )
        if np.any(vals < 0):
            raise ParameterError("density values must be non-negative")
        total = float(vals.sum())
        if abs(total - 1.0) > GRID_SUM_TOLERANCE:
            raise ParameterError(f"density must sum to 1, got {total!r}")
        object.__setattr__(self, "values", vals)

    @property
    def grid_width(self):
        return self.values.shape[1]

    @property
    def grid_height(self):
        return self.values.shape[0]

    @classmethod
    def uniform(cls, width, height, downsample=1):
        gw = -(-width // downsample)
        gh = -(-height // downsample)
        vals = np.full((gh, gw), 1.0 / (gw * gh))
        return cls(width=width, height=height, downsample=downsample, values=vals)

    def to_dict(self):
        return {
            "width": self.width,
            "height": self.height,
            "downsample": self.downsample,
            "values": self.values.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            width=int(data["width"]),
            height=int(data["height"]),
            downsample=int(data["downsample"]),
            values=np.asarray(data["values"], dtype=np.float64),
        )


def cell_centers(extent, downsample):
    """Pixel-space x (or y) coordinates of cell centers along one axis."""
    count = -(-extent // downsample)
    return np.arange(count, dtype=np.float64) * downsample + (downsample - 1) / 2.0


def scott_bandwidth(values, fallback=defaults.BANDWIDTH_FALLBACK_PX):
    """Scott's rule for one axis: sample std (ddof=1) times n^(-1/6).

    Falls back to a fixed pixel bandwidth when the axis is degenerate
    (fewer than two points, or zero spread), where the rule collapses.
    """
    values = np.asarray(values, dtype=np.float64)
    n = values.size
    if n < 2:
        return float(fallback)
    sigma = float(np.std(values, ddof=1))
    if sigma == 0.0:
        return float(fallback)
    return sigma * n ** (-1.0 / 6.0)


def estimate_density(samples: SampleSet, downsample: int = 1,
                     bandwidth: float | None = None) -> DensityGrid:
    """Gaussian kernel density of a sample set on the pixel grid.

    Bandwidths default to Scott's rule per axis; pass bandwidth to force
    one isotropic value. The grid is renormalized to exactly unit mass,
    so tails cut off at the frame edge do not bias comparisons.
    """
    if samples.n == 0:
        raise EmptyDataError("cannot estimate a density from zero samples")
    if downsample < 1:
        raise ParameterError(f"downsample must be >= 1, got {downsample}")
    if bandwidth is not None:
        if bandwidth <= 0:
            raise ParameterError(f"bandwidth must be positive, got {bandwidth}")
        h_x = h_y = float(bandwidth)
    else:
        h_x = scott_bandwidth(samples.xs)
        h_y = scott_bandwidth(samples.ys)
    cx = cell_centers(samples.width, downsample)
    cy = cell_centers(samples.height, downsample)
    raw = kernels.gaussian_grid(samples.xs, samples.ys, cx, cy, h_x, h_y)
    total = float(raw.sum())
    if total <= 0:
        raise DataError("density mass vanished; bandwidth too small for this grid")
    vals = raw / total
    return DensityGrid(width=samples.width, height=samples.height,
                       downsample=downsample, values=vals)


def downsample_grid(grid: DensityGrid, factor: int) -> DensityGrid:
    """Block-sum an existing grid by an integer factor (edge cells ragged)."""
    if factor < 1:
        raise ParameterError(f"factor must be >= 1, got {factor}")
    if factor == 1:
        return grid
    vals = grid.values
    rows = np.add.reduceat(vals, np.arange(0, vals.shape[0], factor), axis=0)
    both = np.add.reduceat(rows, np.arange(0, vals.shape[1], factor), axis=1)
    return DensityGrid(width=grid.width, height=grid.height,
                       downsample=grid.downsample * factor, values=both)


def chi2_distance(p, q) -> float:
    """Chi-square histogram distance: 0.5 * sum((p-q)^2 / (p+q)).

    Cells empty in both distributions contribute zero. Symmetric, and
    bounded by [0, 1] for distributions of equal mass.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ParameterError(f"distributions differ in shape: {p.shape} vs {q.shape}")
    if np.any(p < 0) or np.any(q < 0):
        raise ParameterError("distributions must be non-negative")
    num = (p - q) ** 2
    den = p + q
    terms = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
    return 0.5 * float(terms.sum())


def compare_density(a: DensityGrid, b: DensityGrid) -> float:
    """chi2_distance for two grids over the same frame and downsampling."""
    if (a.width, a.height, a.downsample) != (b.width, b.height, b.downsample):
        raise DataError(
            f"grids cover different spaces: {a.width}x{a.height}/{a.downsample} "
            f"vs {b.width}x{b.height}/{b.downsample}"
        )
    return chi2_distance(a.values, b.values)


@dataclass(frozen=True)
class ComparisonReport:
    """How well collected samples reproduce a reference distribution."""

    chi2_ours: float  # collected density vs reference density
    chi2_uniform: float  # uniform density vs reference density
    n_ours: int
    n_reference: int
    downsample: int

    def to_dict(self):
        return {
            "chi2_ours": self.chi2_ours,
            "chi2_uniform": self.chi2_uniform,
            "n_ours": self.n_ours,
            "n_reference": self.n_reference,
            "downsample": self.downsample,
        }


def compare(ours: SampleSet, reference: SampleSet, downsample: int = 1,
            bandwidth: float | None = None) -> ComparisonReport:
    """Density-compare two sample sets over the same frame.

    Each set gets its own Scott bandwidths (unless one is forced), and
    the uniform distance is included as the no-information baseline.
    """
    if (ours.width, ours.height) != (reference.width, reference.height):
        raise DataError(
            f"sample sets cover different frames: {ours.width}x{ours.height} "
            f"vs {reference.width}x{reference.height}"
        )
    d_ours = estimate_density(ours, downsample=downsample, bandwidth=bandwidth)
    d_ref = estimate_density(reference, downsample=downsample, bandwidth=bandwidth)
    d_uni = DensityGrid.uniform(reference.width, reference.height, downsample)
    return ComparisonReport(
        chi2_ours=compare_density(d_ours, d_ref),
        chi2_uniform=compare_density(d_uni, d_ref),
        n_ours=ours.n,
        n_reference=reference.n,
        downsample=downsample,
    )


def render_heatmap(grid: DensityGrid) -> bytes:
    """Binary PGM (P5) image of a density grid.

    The cell with maximum mass maps to 255 and zero mass to 0, linearly
    with round-half-up, one pixel per grid cell, row-major from the
    top-left.
    """
    vals = grid.values
    vmax = float(vals.max())
    if vmax <= 0:
        raise DataError("cannot render a heatmap of an all-zero grid")
    pix = np.floor(vals * (255.0 / vmax) + 0.5).astype(np.uint8)
    header = f"P5\n{grid.grid_width} {grid.grid_height}\n255\n".encode("ascii")
    return header + pix.tobytes()


def parse_pgm(blob: bytes):
    """Inverse of render_heatmap: (width, height, uint8 array)."""
    if not blob.startswith(b"P5"):
        raise ParseError("not a binary PGM (P5) image", line_numbers=(1,))
    parts = blob.split(b"\n", 3)
    if len(parts) < 4:
        raise ParseError("truncated PGM header", line_numbers=(1,))
    dims = parts[1].split()
    width, height = int(dims[0]), int(dims[1])
    maxval = int(parts[2])
    if maxval != 255:
        raise ParseError(f"unsupported PGM maxval {maxval}", line_numbers=(2,))
    data = parts[3]
    if len(data) != width * height:
        raise ParseError(f"PGM payload has {len(data)} bytes, expected {width * height}")
    return width, height, np.frombuffer(data, dtype=np.uint8).reshape(height, width)

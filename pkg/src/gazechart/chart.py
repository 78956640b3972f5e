"""Probe chart construction and triplet lookup.

A chart briefly replaces one video frame with a grid of character
triplets (one letter, two digits, e.g. "K37") rendered in 40% gray on
black. The viewer types the triplet they saw most clearly and the
reported text resolves back to that triplet's pixel anchor, which is the
gaze estimate for the frame.

Geometry: triplet anchors sit on a grid with vertical spacing d_v and
horizontal spacing d_h = 2 * d_v, where d_v = round(font_size / density).
Each anchor is then jittered so the grid is not visually obvious. Jitter
is drawn uniformly per axis and capped so every glyph box stays inside
its own grid cell, which makes overlap between neighbours impossible by
construction; at the default parameters the cap equals the nominal
+-0.25 * d_v range, so this changes nothing in the common case and only
bites at densities close to the packing limit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from . import defaults
from .errors import LayoutError, ParameterError
from .seeding import rng_from

# 24 usable letters: I and O are dropped to avoid confusion with 1 and 0
LETTERS = "ABCDEFGHJKLMNPQRSTUVWXYZ"
LABEL_SPACE = len(LETTERS) * 100  # 2400 distinct triplets

# glyph box around an anchor: three glyphs at 0.6 em advance, one em tall
BBOX_WIDTH_EM = 1.8
BBOX_HEIGHT_EM = 1.0

CHARACTER_GRAY = 0.4
BACKGROUND = "black"

JITTER_REDRAW_ATTEMPTS = 16


def label_text(index):
    """Canonical triplet text for a label index in [0, 2400)."""
    if not 0 <= index < LABEL_SPACE:
        raise ParameterError(f"label index {index} outside [0, {LABEL_SPACE})")
    return f"{LETTERS[index // 100]}{index % 100:02d}"


def normalize_text(raw):
    """Canonical form of a participant-typed triplet: stripped, uppercased."""
    return raw.strip().upper()


def derive_spacing(font_size, density):
    """Grid spacings (d_v, d_h) in pixels for a font size and density.

    Density is the ratio font_size / d_v, so d_v = round(font_size /
    density) with halves rounding up, and columns are spaced twice as far
    apart as rows because a triplet is wider than it is tall.
    """
    if font_size <= 0:
        raise ParameterError(f"font_size must be positive, got {font_size}")
    if density <= 0:
        raise ParameterError(f"density must be positive, got {density}")
    d_v = int(math.floor(font_size / density + 0.5))
    if d_v < 1:
        raise ParameterError(
            f"density {density} too high for font size {font_size}: spacing rounds to zero"
        )
    return d_v, 2 * d_v


@dataclass(frozen=True)
class ChartParams:
    """Inputs that fully determine a chart (together with the seed)."""

    frame_width: int
    frame_height: int
    font_size: int = defaults.FONT_SIZE_PX
    density: float = defaults.TRIPLET_DENSITY
    jitter_fraction: float = defaults.JITTER_FRACTION
    seed: int = 0

    def __post_init__(self):
        if self.frame_width <= 0 or self.frame_height <= 0:
            raise ParameterError(
                f"frame must have positive dimensions, got {self.frame_width}x{self.frame_height}"
            )
        if self.font_size <= 0:
            raise ParameterError(f"font_size must be positive, got {self.font_size}")
        if self.density <= 0:
            raise ParameterError(f"density must be positive, got {self.density}")
        if not 0 <= self.jitter_fraction <= 0.5:
            raise ParameterError(
                f"jitter_fraction must be in [0, 0.5], got {self.jitter_fraction}"
            )
        if not 0 <= int(self.seed) < 2**64:
            raise ParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def to_dict(self):
        return {
            "frame_width": self.frame_width,
            "frame_height": self.frame_height,
            "font_size": self.font_size,
            "density": self.density,
            "jitter_fraction": self.jitter_fraction,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            frame_width=int(data["frame_width"]),
            frame_height=int(data["frame_height"]),
            font_size=int(data["font_size"]),
            density=float(data["density"]),
            jitter_fraction=float(data["jitter_fraction"]),
            seed=int(data["seed"]),
        )


@dataclass(frozen=True)
class TripletPlacement:
    label: str
    x: float
    y: float

    def bbox(self, font_size):
        """Glyph box (x0, y0, x1, y1) for this placement at a font size."""
        hw = BBOX_WIDTH_EM * font_size / 2.0
        hh = BBOX_HEIGHT_EM * font_size / 2.0
        return (self.x - hw, self.y - hh, self.x + hw, self.y + hh)


@dataclass(frozen=True)
class ChartSpec:
    """A fully placed chart: params, derived spacings and all placements."""

    params: ChartParams
    d_v: int
    d_h: int
    placements: tuple

    def __post_init__(self):
        by_label = {}
        for p in self.placements:
            if p.label in by_label:
                raise LayoutError(f"duplicate label {p.label} on chart")
            by_label[p.label] = (p.x, p.y)
        object.__setattr__(self, "_by_label", by_label)

    @property
    def character_gray(self):
        return CHARACTER_GRAY

    @property
    def background(self):
        return BACKGROUND

    def location_of(self, raw_text):
        """Anchor (x, y) for a reported triplet, or None if not on the chart."""
        return self._by_label.get(normalize_text(raw_text))

    def nearest_placement(self, x, y):
        """The placement whose anchor is closest to (x, y)."""
        return min(self.placements, key=lambda p: (p.x - x) ** 2 + (p.y - y) ** 2)

    def to_dict(self):
        return {
            "params": self.params.to_dict(),
            "d_v": self.d_v,
            "d_h": self.d_h,
            "placements": [{"label": p.label, "x": p.x, "y": p.y} for p in self.placements],
        }

    def to_json_bytes(self):
        """Canonical byte serialization: sorted keys, no whitespace."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode("ascii")

    @classmethod
    def from_dict(cls, data):
        return cls(
            params=ChartParams.from_dict(data["params"]),
            d_v=int(data["d_v"]),
            d_h=int(data["d_h"]),
            placements=tuple(
                TripletPlacement(label=str(p["label"]), x=float(p["x"]), y=float(p["y"]))
                for p in data["placements"]
            ),
        )

    @classmethod
    def from_json_bytes(cls, blob):
        return cls.from_dict(json.loads(blob))


def _fits(anchor, col, row, occupied, bbox_w, bbox_h, width, height):
    x, y = anchor
    if x - bbox_w / 2.0 < 0 or x + bbox_w / 2.0 > width:
        return False
    if y - bbox_h / 2.0 < 0 or y + bbox_h / 2.0 > height:
        return False
    # only cells already placed in row-major order can conflict
    for nc, nr in ((col - 1, row), (col - 1, row - 1), (col, row - 1), (col + 1, row - 1)):
        other = occupied.get((nc, nr))
        if other is not None and abs(other[0] - x) < bbox_w and abs(other[1] - y) < bbox_h:
            return False
    return True


def generate_chart(params: ChartParams) -> ChartSpec:
    """Place jittered triplets over the frame described by params.

    The same params (including seed) always produce the same chart, byte
    for byte. Raises LayoutError when the geometry cannot work: frame
    smaller than one grid cell, spacing tighter than a glyph box, or more
    grid nodes than there are distinct labels.
    """
    d_v, d_h = derive_spacing(params.font_size, params.density)
    bbox_w = BBOX_WIDTH_EM * params.font_size
    bbox_h = BBOX_HEIGHT_EM * params.font_size
    if d_h < bbox_w or d_v < bbox_h:
        raise LayoutError(
            f"spacing {d_h}x{d_v} cannot hold a {bbox_w:g}x{bbox_h:g} glyph box; lower the density"
        )
    n_cols = params.frame_width // d_h
    n_rows = params.frame_height // d_v
    if n_cols < 1 or n_rows < 1:
        raise LayoutError(
            f"frame {params.frame_width}x{params.frame_height} smaller than one {d_h}x{d_v} cell"
        )
    n = n_cols * n_rows
    if n > LABEL_SPACE:
        raise LayoutError(f"grid needs {n} labels but only {LABEL_SPACE} exist")

    # jitter caps: nominal range is +-jitter_fraction * d_v on both axes,
    # tightened so the glyph box cannot leave its own cell
    cap_x = min(params.jitter_fraction * d_v, (d_h - bbox_w) / 2.0)
    cap_y = min(params.jitter_fraction * d_v, (d_v - bbox_h) / 2.0)

    rng = rng_from(params.seed)
    labels = rng.permutation(LABEL_SPACE)[:n]

    placements = []
    occupied = {}
    k = 0
    for row in range(n_rows):
        node_y = d_v / 2.0 + row * d_v
        for col in range(n_cols):
            node_x = d_h / 2.0 + col * d_h
            anchor = None
            for _ in range(JITTER_REDRAW_ATTEMPTS):
                jx = (rng.random() * 2.0 - 1.0) * cap_x
                jy = (rng.random() * 2.0 - 1.0) * cap_y
                cand = (node_x + jx, node_y + jy)
                if _fits(cand, col, row, occupied, bbox_w, bbox_h,
                         params.frame_width, params.frame_height):
                    anchor = cand
                    break
            if anchor is None:
                # unreachable with capped jitter; kept as a final guard
                anchor = (node_x, node_y)
                if not _fits(anchor, col, row, occupied, bbox_w, bbox_h,
                             params.frame_width, params.frame_height):
                    raise LayoutError(f"could not place a triplet at grid node ({col}, {row})")
            occupied[(col, row)] = anchor
            placements.append(TripletPlacement(label=label_text(int(labels[k])), x=anchor[0], y=anchor[1]))
            k += 1
    return ChartSpec(params=params, d_v=d_v, d_h=d_h, placements=tuple(placements))


def lookup(chart: ChartSpec, raw_text: str):
    """Resolve reported text to its anchor, or None for off-chart text."""
    return chart.location_of(raw_text)

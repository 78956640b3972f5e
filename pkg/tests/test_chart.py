import json

import numpy as np
import pytest

from gazechart.chart import (
    BBOX_HEIGHT_EM,
    BBOX_WIDTH_EM,
    LABEL_SPACE,
    LETTERS,
    ChartParams,
    ChartSpec,
    derive_spacing,
    generate_chart,
    label_text,
    lookup,
    normalize_text,
)
from gazechart.errors import LayoutError, ParameterError


def test_letters_exclude_confusables():
    assert "I" not in LETTERS
    assert "O" not in LETTERS
    assert len(LETTERS) == 24
    assert LABEL_SPACE == 2400


def test_label_text_enumeration():
    # oracle: enumerate the whole label space independently
    expected = [f"{letter}{d:02d}" for letter in LETTERS for d in range(100)]
    got = [label_text(i) for i in range(LABEL_SPACE)]
    assert got == expected
    assert len(set(got)) == LABEL_SPACE
    with pytest.raises(ParameterError):
        label_text(LABEL_SPACE)
    with pytest.raises(ParameterError):
        label_text(-1)


def test_normalize_text():
    assert normalize_text("  k37\n") == "K37"
    assert normalize_text("A01") == "A01"


def test_derive_spacing_default():
    assert derive_spacing(20, 0.5) == (40, 80)


@pytest.mark.parametrize("font,density,expected_dv", [
    (20, 0.5, 40),
    (20, 1.0, 20),
    (20, 0.3, 67),   # 66.67 rounds up
    (20, 0.8, 25),
    (16, 0.5, 32),
    (20, 0.55, 36),  # 36.36 rounds down
])
def test_derive_spacing_rounding(font, density, expected_dv):
    d_v, d_h = derive_spacing(font, density)
    assert d_v == expected_dv
    assert d_h == 2 * d_v


def test_derive_spacing_rejects_nonpositive():
    with pytest.raises(ParameterError):
        derive_spacing(0, 0.5)
    with pytest.raises(ParameterError):
        derive_spacing(20, 0)
    with pytest.raises(ParameterError):
        derive_spacing(20, -1)


def test_small_frame_grid_enumeration():
    # oracle for 160x80 at defaults: 2 cols x 2 rows with nodes at
    # (40, 20), (120, 20), (40, 60), (120, 60)
    spec = generate_chart(ChartParams(frame_width=160, frame_height=80,
                                      jitter_fraction=0.0, seed=3))
    assert spec.d_v == 40 and spec.d_h == 80
    anchors = [(p.x, p.y) for p in spec.placements]
    assert anchors == [(40.0, 20.0), (120.0, 20.0), (40.0, 60.0), (120.0, 60.0)]


def test_default_frame_has_168_placements():
    spec = generate_chart(ChartParams(frame_width=1024, frame_height=576, seed=0))
    assert len(spec.placements) == (1024 // 80) * (576 // 40) == 168


def test_regeneration_is_byte_identical():
    params = ChartParams(frame_width=1024, frame_height=576, seed=123)
    a = generate_chart(params).to_json_bytes()
    b = generate_chart(params).to_json_bytes()
    assert a == b


def test_different_seeds_differ():
    a = generate_chart(ChartParams(frame_width=1024, frame_height=576, seed=1))
    b = generate_chart(ChartParams(frame_width=1024, frame_height=576, seed=2))
    assert a.to_json_bytes() != b.to_json_bytes()


def _bbox_overlaps(spec):
    # independent all-pairs check, no neighbourhood shortcuts
    f = spec.params.font_size
    hw = BBOX_WIDTH_EM * f / 2.0
    hh = BBOX_HEIGHT_EM * f / 2.0
    xs = np.array([p.x for p in spec.placements])
    ys = np.array([p.y for p in spec.placements])
    dx = np.abs(xs[:, None] - xs[None, :])
    dy = np.abs(ys[:, None] - ys[None, :])
    hit = (dx < 2 * hw) & (dy < 2 * hh)
    np.fill_diagonal(hit, False)
    return bool(hit.any())


def test_properties_over_random_params():
    rng = np.random.default_rng(2024)
    for _ in range(25):
        width = int(rng.integers(300, 1600))
        height = int(rng.integers(200, 1000))
        font = int(rng.integers(12, 30))
        density = float(rng.uniform(0.3, 1.0))
        jitter = float(rng.uniform(0.0, 0.5))
        params = ChartParams(frame_width=width, frame_height=height, font_size=font,
                             density=density, jitter_fraction=jitter,
                             seed=int(rng.integers(2**32)))
        try:
            spec = generate_chart(params)
        except LayoutError:
            continue  # infeasible geometry is allowed to refuse
        labels = [p.label for p in spec.placements]
        assert len(set(labels)) == len(labels)
        assert all(lb[0] in LETTERS for lb in labels)
        assert not _bbox_overlaps(spec)
        # every anchor stays within the jitter bound of its grid node
        bound = jitter * spec.d_v + 1e-9
        cols = width // spec.d_h
        for k, p in enumerate(spec.placements):
            node_x = spec.d_h / 2.0 + (k % cols) * spec.d_h
            node_y = spec.d_v / 2.0 + (k // cols) * spec.d_v
            assert abs(p.x - node_x) <= bound
            assert abs(p.y - node_y) <= bound
        # glyph boxes stay inside the frame
        for p in spec.placements:
            x0, y0, x1, y1 = p.bbox(font)
            assert x0 >= -1e-9 and y0 >= -1e-9
            assert x1 <= width + 1e-9 and y1 <= height + 1e-9


def test_layout_errors():
    with pytest.raises(LayoutError):
        generate_chart(ChartParams(frame_width=70, frame_height=30, seed=0))  # < one cell
    with pytest.raises(LayoutError):
        # density 1.0 with font 20 gives 20px rows for 20px-tall glyphs, ok;
        # density high enough that spacing is under the glyph box must fail
        generate_chart(ChartParams(frame_width=1024, frame_height=576,
                                   font_size=20, density=1.5, seed=0))
    with pytest.raises(LayoutError):
        # more grid nodes than labels
        generate_chart(ChartParams(frame_width=8000, frame_height=5000,
                                   font_size=10, density=0.5, seed=0))


def test_lookup_roundtrip():
    spec = generate_chart(ChartParams(frame_width=1024, frame_height=576, seed=9))
    p = spec.placements[17]
    assert lookup(spec, p.label) == (p.x, p.y)
    assert lookup(spec, p.label.lower()) == (p.x, p.y)
    assert lookup(spec, f"  {p.label} ") == (p.x, p.y)
    assert lookup(spec, "I00") is None
    assert lookup(spec, "") is None
    assert lookup(spec, "ZZZ") is None


def test_nearest_placement():
    spec = generate_chart(ChartParams(frame_width=160, frame_height=80,
                                      jitter_fraction=0.0, seed=3))
    assert spec.nearest_placement(41.0, 21.0).label == spec.placements[0].label
    assert spec.nearest_placement(119.0, 59.0).label == spec.placements[3].label


def test_serialization_roundtrip():
    spec = generate_chart(ChartParams(frame_width=640, frame_height=360, seed=77))
    blob = spec.to_json_bytes()
    back = ChartSpec.from_json_bytes(blob)
    assert back == spec
    assert back.to_json_bytes() == blob
    # wire format carries exactly the documented keys
    data = json.loads(blob)
    assert set(data) == {"params", "d_v", "d_h", "placements"}
    assert set(data["placements"][0]) == {"label", "x", "y"}


def test_params_validation():
    with pytest.raises(ParameterError):
        ChartParams(frame_width=0, frame_height=100)
    with pytest.raises(ParameterError):
        ChartParams(frame_width=100, frame_height=100, jitter_fraction=0.6)
    with pytest.raises(ParameterError):
        ChartParams(frame_width=100, frame_height=100, seed=-1)
    with pytest.raises(ParameterError):
        ChartParams(frame_width=100, frame_height=100, density=-0.5)

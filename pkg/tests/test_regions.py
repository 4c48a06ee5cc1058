import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aleinfer.regions import (
    ABOVE,
    BELOW,
    OVERLAP,
    classify_curve,
    classify_relative_to_band,
    has_significant_region,
    regions,
    regions_categorical,
    regions_numeric,
    trend,
)
from aleinfer.stats import AlerBand

from helpers import make_curve
from oracles import runs_bruteforce

BAND = AlerBand(lower=-1.0, upper=1.0, outer_lower=-2.0, outer_upper=2.0, center=0.0)


def test_classify_examples():
    assert classify_relative_to_band(0.0, 0.0, BAND) == OVERLAP
    assert classify_relative_to_band(-3.0, -1.0 - 1e-12, BAND) == BELOW
    assert classify_relative_to_band(-3.0, -1.0, BAND) == OVERLAP
    assert classify_relative_to_band(1.0 + 1e-12, 3.0, BAND) == ABOVE


def test_trend_examples():
    assert trend((0, 0), (1, 1), 1, 1) == 1
    assert trend((2, 5), (2, 5), 1, 1) == 0
    with pytest.raises(ValueError):
        trend((0, 0), (1, 1), 0, 1)


def test_runs_example():
    # statuses below, below, overlap, above
    c = make_curve([0, 1, 2, 3], [1, 2, 3, 4], [-2, -2, 0, 2])
    rows = regions_numeric(c, BAND, y_range=4.0)
    assert [(r.start_x, r.end_x, r.relative_to_mid) for r in rows] == [
        (0, 1, BELOW), (2, 2, OVERLAP), (3, 3, ABOVE)
    ]
    assert [r.n for r in rows] == [3, 3, 4]
    assert rows[0].x_span == pytest.approx(1 / 3)
    assert rows[1].trend == 0 and rows[1].x_span == 0
    assert rows[0].trend == 0  # flat run
    assert has_significant_region(rows)


def test_single_overlap_region():
    x = np.linspace(-2.397, 2.608, 40)
    c = make_curve(x, [4] * 40, np.linspace(-0.2, 0.3, 40), lo=np.full(40, -0.5), hi=np.full(40, 0.5))
    (row,) = regions_numeric(c, BAND, y_range=10.0)
    assert (row.start_x, row.end_x, row.x_span, row.n, row.n_pct) == (-2.397, 2.608, 1.0, 160, 1.0)
    assert row.relative_to_mid == OVERLAP
    assert not has_significant_region([row])


def test_categorical_rows():
    band = AlerBand(12.5, 13.4, 12.0, 14.0, 12.9)
    c = make_curve(["FALSE", "TRUE"], [70, 90], [13.302, 12.613], lo=[12.192, 11.892],
                   hi=[14.176, 13.350], kind="categorical", center=12.9)
    rows = regions_categorical(c, band)
    assert [(r.x, r.n, round(r.n_pct, 3), r.y, r.relative_to_mid) for r in rows] == [
        ("FALSE", 70, 0.438, 13.302, OVERLAP),
        ("TRUE", 90, 0.562, 12.613, OVERLAP),
    ]
    one = make_curve(["a"], [5], [0.0], kind="categorical")
    assert [r.relative_to_mid for r in regions_categorical(one, BAND)] == [OVERLAP]
    two = make_curve(["a", "b"], [5, 5], [2.0, 0.0], lo=[1.5, -3.0], hi=[2.5, -1.5], kind="categorical")
    assert [r.relative_to_mid for r in regions(two, BAND, 1.0)] == [ABOVE, BELOW]


def test_kind_and_empty_errors():
    num = make_curve([0, 1], [1, 1], [0, 0])
    with pytest.raises(ValueError):
        regions_categorical(num, BAND)
    with pytest.raises(ValueError):
        regions_numeric(make_curve(["a"], [1], [0], kind="categorical"), BAND, 1.0)
    with pytest.raises(ValueError):
        regions_numeric(make_curve([], [], []), BAND, 1.0)
    with pytest.raises(ValueError):
        regions_numeric(num, BAND, 0.0)


def test_degenerate_x_domain():
    (row,) = regions_numeric(make_curve([3.0], [9], [0.0]), BAND, 1.0)
    assert row.x_span == 1.0 and row.trend == 0.0 and row.n_pct == 1.0


@st.composite
def curve_and_band(draw):
    k = draw(st.integers(1, 30))
    xs = np.cumsum(draw(st.lists(st.floats(0.01, 5), min_size=k, max_size=k)))
    n = draw(st.lists(st.integers(0, 20), min_size=k, max_size=k))
    if sum(n) == 0:
        n[0] = 1
    mean = np.array(draw(st.lists(st.floats(-3, 3), min_size=k, max_size=k)))
    half = np.array(draw(st.lists(st.floats(0, 1.5), min_size=k, max_size=k)))
    lo_b = draw(st.floats(-2, 0))
    hi_b = draw(st.floats(0, 2))
    band = AlerBand(lo_b, hi_b, lo_b - 1, hi_b + 1, 0.0)
    return make_curve(xs, n, mean, mean - half, mean + half), band


@settings(max_examples=200, deadline=None)
@given(curve_and_band())
def test_regions_roundtrip_oracle(case):
    curve, band = case
    rows = regions_numeric(curve, band, y_range=6.0)
    statuses = classify_curve(curve, band)
    expected = runs_bruteforce(statuses)
    assert len(rows) == len(expected)
    x = curve.ale_x
    rebuilt = []
    for row, (i, j, s) in zip(rows, expected):
        assert (row.start_x, row.end_x, row.relative_to_mid) == (x[i], x[j], s)
        assert row.n == int(curve.ale_n[i : j + 1].sum())
        rebuilt += [row.relative_to_mid] * (j - i + 1)
    assert rebuilt == statuses
    assert sum(r.n for r in rows) == curve.ale_n.sum()
    assert sum(r.n_pct for r in rows) == pytest.approx(1.0, abs=1e-12)
    assert all(a.relative_to_mid != b.relative_to_mid for a, b in zip(rows, rows[1:]))

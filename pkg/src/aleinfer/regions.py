"""Confidence-region tables: where an ALE curve sits relative to the ALER band."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bootstrap import BootAleCurve
from .stats import AlerBand

BELOW = "below"
OVERLAP = "overlap"
ABOVE = "above"


@dataclass(frozen=True)
class RegionRowNumeric:
    start_x: float
    end_x: float
    x_span: float
    n: int
    n_pct: float
    start_y: float
    end_y: float
    trend: float
    relative_to_mid: str


@dataclass(frozen=True)
class RegionRowCategorical:
    x: str
    n: int
    n_pct: float
    y: float
    relative_to_mid: str


def classify_relative_to_band(lo: float, hi: float, band: AlerBand) -> str:
    """``below`` if the whole interval is under the band, ``above`` if over it."""
    if hi < band.lower:
        return BELOW
    if lo > band.upper:
        return ABOVE
    return OVERLAP


def classify_curve(curve: BootAleCurve, band: AlerBand) -> list[str]:
    return [classify_relative_to_band(lo, hi, band) for lo, hi in zip(curve.ale_y_lo, curve.ale_y_hi)]


def trend(start: tuple[float, float], end: tuple[float, float], x_range: float, y_range: float) -> float:
    """Slope between two points with x and y each rescaled to 0..1."""
    if x_range <= 0 or y_range <= 0:
        raise ValueError("trend needs positive x and y ranges")
    dx = end[0] - start[0]
    if dx == 0:
        return 0.0
    return ((end[1] - start[1]) / y_range) / (dx / x_range)


def _runs(statuses: list[str]) -> list[tuple[int, int]]:
    """Inclusive (first, last) index pairs of maximal equal-status runs."""
    runs = []
    start = 0
    for i in range(1, len(statuses) + 1):
        if i == len(statuses) or statuses[i] != statuses[start]:
            runs.append((start, i - 1))
            start = i
    return runs


def regions_numeric(curve: BootAleCurve, band: AlerBand, y_range: float) -> list[RegionRowNumeric]:
    """One row per maximal run of consecutive ``ale_x`` points sharing a status.

    ``y_range`` normalises the trend's y axis; the x axis is normalised by the
    span of ``ale_x``.  Start and end y values come from the bootstrap mean.
    """
    if curve.kind != "numeric":
        raise ValueError(f"{curve.variable!r} is not numeric")
    x = np.asarray(curve.ale_x, dtype=np.float64)
    if x.size == 0:
        raise ValueError("empty curve")
    if y_range <= 0:
        raise ValueError("y_range must be positive")
    y = curve.ale_y_mean
    ale_n = np.asarray(curve.ale_n)
    total = int(ale_n.sum())
    x_min, x_max = float(x[0]), float(x[-1])
    x_range = x_max - x_min
    statuses = classify_curve(curve, band)
    rows = []
    for first, last in _runs(statuses):
        n = int(ale_n[first : last + 1].sum())
        start_x, end_x = float(x[first]), float(x[last])
        if x_range > 0:
            x_span = (end_x - start_x) / x_range
            slope = trend((start_x, y[first]), (end_x, y[last]), x_range, y_range)
        else:
            x_span, slope = 1.0, 0.0
        rows.append(
            RegionRowNumeric(
                start_x=start_x,
                end_x=end_x,
                x_span=x_span,
                n=n,
                n_pct=n / total,
                start_y=float(y[first]),
                end_y=float(y[last]),
                trend=float(slope),
                relative_to_mid=statuses[first],
            )
        )
    return rows


def regions_categorical(curve: BootAleCurve, band: AlerBand) -> list[RegionRowCategorical]:
    if curve.kind != "categorical":
        raise ValueError(f"{curve.variable!r} is not categorical")
    if len(curve.ale_x) == 0:
        raise ValueError("empty curve")
    total = int(np.sum(curve.ale_n))
    statuses = classify_curve(curve, band)
    return [
        RegionRowCategorical(str(level), int(n), int(n) / total, float(y), status)
        for level, n, y, status in zip(curve.ale_x, curve.ale_n, curve.ale_y_mean, statuses)
    ]


def regions(curve: BootAleCurve, band: AlerBand, y_range: float):
    if curve.kind == "numeric":
        return regions_numeric(curve, band, y_range)
    return regions_categorical(curve, band)


def has_significant_region(rows) -> bool:
    """True when some region lies entirely outside the band."""
    return any(r.relative_to_mid != OVERLAP for r in rows)

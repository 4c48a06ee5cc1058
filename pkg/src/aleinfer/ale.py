"""First-order accumulated local effects.

Numeric variables are cut into intervals ``z_0 < z_1 < ... < z_k``.  Each row
in ``(z_{j-1}, z_j]`` (rows at ``z_0`` join the first interval) contributes
the prediction difference between moving the variable to ``z_j`` and to
``z_{j-1}``; per-interval mean differences are accumulated from ``z_0`` and
the curve is shifted so that its ``ale_n``-weighted mean is zero.

Categorical variables use replace-and-predict: each level's mean prediction
with the variable forced to that level, minus the frequency-weighted mean
over levels.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .data import Dataset, DataError
from .model import Predictor
from .quantile import median, quantile7

NUMERIC = "numeric"
CATEGORICAL = "categorical"

CENTER_KINDS = ("median", "mean", "zero")
DEFAULT_MAX_BINS = 100


@dataclass(frozen=True)
class AleIntervals:
    variable: str
    kind: str
    boundaries: np.ndarray | None = None
    levels: tuple[str, ...] | None = None

    @property
    def ale_x(self):
        return self.boundaries if self.kind == NUMERIC else self.levels

    def __len__(self):
        return len(self.ale_x)


@dataclass(frozen=True)
class AleCurve:
    """ALE values of one variable.

    ``ale_y`` is on display scale: the zero-centered curve plus
    ``center_value``.
    """

    variable: str
    kind: str
    ale_x: np.ndarray | tuple[str, ...]
    ale_n: np.ndarray
    ale_y: np.ndarray
    center_kind: str = "zero"
    center_value: float = 0.0

    @property
    def ale_y0(self) -> np.ndarray:
        """Zero-centered ALE values."""
        return self.ale_y - self.center_value


def compute_intervals(d: Dataset, variable: str, max_bins: int = DEFAULT_MAX_BINS) -> AleIntervals:
    """ALE x intervals for ``variable``.

    Numeric variables with fewer than ``max_bins`` distinct values use every
    distinct value; otherwise the type-7 quantiles at ``j / max_bins``,
    with duplicates merged.  On tied data an interpolated quantile can fall
    inside a run of equal values and leave an interval with no rows; such
    boundaries are merged as well, so every interval of the full data is
    populated.  Categorical and logical variables use the dataset's level
    order.
    """
    if variable == d.outcome:
        raise DataError(f"{variable!r} is the outcome, not a predictor")
    col = d.column(variable)
    if not col.is_numeric:
        return AleIntervals(variable, CATEGORICAL, levels=col.levels)
    if max_bins < 1:
        raise ValueError("max_bins must be >= 1")
    distinct = np.unique(col.values)
    if distinct.size < max_bins:
        bounds = distinct
    else:
        xs = np.sort(col.values)
        bounds = np.unique([quantile7(xs, Fraction(j, max_bins)) for j in range(max_bins + 1)])
        bounds = _drop_empty(bounds, xs)
    return AleIntervals(variable, NUMERIC, boundaries=bounds)


def _drop_empty(bounds: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Keep z_0 and each z_j whose interval (previous kept, z_j] holds data."""
    # count of sorted data <= each boundary; an interval is empty when it does not grow
    upto = np.searchsorted(xs, bounds, side="right")
    keep = [0]
    for j in range(1, bounds.size):
        if upto[j] > upto[keep[-1]]:
            keep.append(j)
    return bounds[keep]


def _interval_positions(x: np.ndarray, bounds: np.ndarray) -> np.ndarray:
    """Index j of the boundary each value is counted at (0 only for x <= z_0)."""
    return np.searchsorted(bounds, np.clip(x, bounds[0], bounds[-1]), side="left")


def _zero_center(acc: np.ndarray, weights: np.ndarray) -> np.ndarray:
    total = weights.sum()
    if total == 0:
        return acc - acc.mean()
    return acc - float(weights @ acc) / total


def compute_ale_numeric(p: Predictor, d: Dataset, iv: AleIntervals) -> AleCurve:
    if iv.kind != NUMERIC:
        raise ValueError(f"{iv.variable!r}: numeric intervals required")
    x = d.column(iv.variable).values
    z = iv.boundaries
    k = z.size - 1
    n = d.n_rows
    pos = _interval_positions(x, z)
    ale_n = np.bincount(pos, minlength=k + 1)
    if k == 0:
        return AleCurve(iv.variable, NUMERIC, z, ale_n, np.zeros(1))
    interval = np.maximum(pos, 1)
    rows = np.arange(n)
    doubled = d.take(np.concatenate([rows, rows]))
    doubled = doubled.replace(iv.variable, np.concatenate([z[interval - 1], z[interval]]))
    pred = np.asarray(p.predict(doubled), dtype=np.float64)
    diff = pred[n:] - pred[:n]
    sums = np.bincount(interval, weights=diff, minlength=k + 1)
    counts = np.bincount(interval, minlength=k + 1)
    local = np.zeros(k + 1)
    filled = counts > 0
    local[filled] = sums[filled] / counts[filled]
    local[0] = 0.0
    acc = np.cumsum(local)
    return AleCurve(iv.variable, NUMERIC, z, ale_n, _zero_center(acc, ale_n))


def compute_ale_categorical(p: Predictor, d: Dataset, iv: AleIntervals) -> AleCurve:
    if iv.kind != CATEGORICAL:
        raise ValueError(f"{iv.variable!r}: categorical intervals required")
    col = d.column(iv.variable)
    if col.is_numeric:
        raise ValueError(f"{iv.variable!r} is numeric")
    n = d.n_rows
    levels = iv.levels
    # Express dataset codes in the interval level list.
    lookup = {lvl: i for i, lvl in enumerate(levels)}
    codes = np.array([lookup.get(lvl, -1) for lvl in col.levels], dtype=np.int64)[col.values]
    ale_n = np.bincount(codes[codes >= 0], minlength=len(levels))
    n_levels = len(levels)
    tiled = d.take(np.tile(np.arange(n), n_levels))
    forced = np.repeat(np.arange(n_levels), n)
    if col.levels != levels:
        back = np.array([col.levels.index(lvl) if lvl in col.levels else -1 for lvl in levels])
        if np.any(back < 0):
            raise DataError(f"{iv.variable!r}: interval levels missing from dataset level list")
        forced = back[forced]
    pred = np.asarray(p.predict(tiled.replace(iv.variable, forced)), dtype=np.float64)
    raw = pred.reshape(n_levels, n).mean(axis=1)
    # centre relative to the first level so equal raw values give exact zeros
    rel = raw - raw[0]
    ale_y = rel - float(ale_n @ rel) / n
    return AleCurve(iv.variable, CATEGORICAL, tuple(levels), ale_n, ale_y)


def compute_ale(p: Predictor, d: Dataset, iv: AleIntervals) -> AleCurve:
    """Zero-centered ALE curve for either kind of variable."""
    if iv.kind == NUMERIC:
        return compute_ale_numeric(p, d, iv)
    return compute_ale_categorical(p, d, iv)


def center_value(y: np.ndarray, kind: str) -> float:
    if kind == "median":
        return float(median(y))
    if kind == "mean":
        return float(np.mean(y))
    if kind == "zero":
        return 0.0
    raise ValueError(f"center kind must be one of {CENTER_KINDS}, got {kind!r}")


def center(curve: AleCurve, d: Dataset, kind: str) -> AleCurve:
    """Shift a zero-centered curve onto the outcome's median, mean or zero."""
    value = center_value(d.y, kind)
    return replace(curve, ale_y=curve.ale_y0 + value, center_kind=kind, center_value=value)

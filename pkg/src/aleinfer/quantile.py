"""Type-7 (linear interpolation) empirical quantiles.

This is the single quantile convention used throughout the package: medians
for centering, bootstrap percentile intervals and random-variable bands.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def _as_fraction(p: float) -> Fraction:
    # Probabilities such as (1 - 0.95) / 2 carry float noise; recover the decimal.
    return Fraction(float(p)).limit_denominator(1 << 32)


def tail_probabilities(ci_level: float) -> tuple[Fraction, Fraction]:
    """Lower and upper probabilities of a central ``ci_level`` interval."""
    if not 0.0 < ci_level < 1.0:
        raise ValueError(f"ci_level must be in (0, 1), got {ci_level}")
    alpha = (1 - _as_fraction(ci_level)) / 2
    return alpha, 1 - alpha


def quantile7(values, p: float | Fraction, axis: int = 0) -> np.ndarray | float:
    """Type-7 quantile of ``values`` along ``axis`` at probability ``p``.

    Index ``h = (n - 1) * p`` is computed in exact rational arithmetic, so for
    example the 0.025 quantile of ``1..5`` is exactly ``1.1``.
    """
    arr = np.sort(np.asarray(values, dtype=np.float64), axis=axis)
    n = arr.shape[axis]
    if n == 0:
        raise ValueError("quantile of an empty sample")
    frac = p if isinstance(p, Fraction) else _as_fraction(p)
    if not 0 <= frac <= 1:
        raise ValueError(f"probability must be in [0, 1], got {p}")
    h = (n - 1) * frac
    j = int(h)
    g = float(h - j)
    low = np.take(arr, j, axis=axis)
    if g == 0.0:
        out = low
    else:
        high = np.take(arr, j + 1, axis=axis)
        out = np.clip(low + g * (high - low), low, high)
    return float(out) if np.ndim(out) == 0 else out


def median(values, axis: int = 0) -> np.ndarray | float:
    return quantile7(values, Fraction(1, 2), axis=axis)

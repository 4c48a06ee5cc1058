"""ALE effect sizes, random-variable reference distributions and p-values.

All statistics work on zero-centered ALE values.

* ALER: ``(min, max)`` of the curve.
* ALED: ``ale_n``-weighted mean absolute value.
* NALER / NALED: the same on ECDF-normalised values, in percentile points
  of the outcome on a -50..+50 scale centred on the median.

Bootstrapped curves yield one value per iteration; the estimate is the mean
across iterations and the interval uses type-7 percentiles.
"""

from __future__ import annotations

from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bootstrap import DEFAULT_CI_LEVEL, BootAleCurve, aggregate, bootstrap_ales
from .data import Dataset, append_random_column
from .model import SERIAL_ONLY, Trainer
from .quantile import median, quantile7
from .rng import stream_seed

STATISTICS = ("aled", "aler_min", "aler_max", "naled", "naler_min", "naler_max")
LOWER_TAIL = frozenset({"aler_min", "naler_min"})


def aler(ale_y0) -> tuple[float, float]:
    v = np.asarray(ale_y0, dtype=np.float64)
    if v.size == 0:
        raise ValueError("ALER of an empty curve")
    return float(v.min()), float(v.max())


def aled(ale_y0, ale_n) -> float:
    v = np.asarray(ale_y0, dtype=np.float64)
    n = np.asarray(ale_n, dtype=np.float64)
    if v.shape != n.shape:
        raise ValueError(f"length mismatch: {v.shape} vs {n.shape}")
    total = n.sum()
    if total <= 0:
        raise ValueError("ALED needs positive total weight")
    return float(np.abs(v * n).sum() / total)


@dataclass(frozen=True)
class _Halves:
    """Sorted halves of the median-centred outcome, and the zero band."""

    neg: np.ndarray  # negated negative values, ascending
    pos: np.ndarray  # nonnegative values, ascending
    zero_low: float
    zero_high: float

    @classmethod
    def from_outcome(cls, y) -> _Halves:
        y = np.asarray(y, dtype=np.float64)
        if y.size == 0:
            raise ValueError("outcome vector is empty")
        centred = y - median(y)
        negatives = centred[centred < 0]
        positives = centred[centred > 0]
        return cls(
            neg=np.sort(-negatives),
            pos=np.sort(centred[centred >= 0]),
            zero_low=float(negatives.max()) if negatives.size else -np.inf,
            zero_high=float(positives.min()) if positives.size else np.inf,
        )

    def normalize(self, v: np.ndarray) -> np.ndarray:
        out = np.zeros(v.shape)
        outside = ~((v > self.zero_low) & (v < self.zero_high))
        up = outside & (v > 0)
        down = outside & (v < 0)
        if up.any():
            out[up] = 50.0 * np.searchsorted(self.pos, v[up], side="right") / self.pos.size
        if down.any():
            out[down] = -(50.0 * np.searchsorted(self.neg, -v[down], side="right") / self.neg.size)
        return out


def normalize_ale_y(y, ale_y0) -> np.ndarray:
    """Map zero-centered ALE values to percentile points of the outcome.

    Positive values are scored with the ECDF of the nonnegative median-centred
    outcomes, negative values with the ECDF of the negated negative ones, each
    scaled to 0..50.  Values strictly between the nearest centred outcomes
    below and above the median count as no effect (0).
    """
    return _Halves.from_outcome(y).normalize(np.asarray(ale_y0, dtype=np.float64))


def naler(y, ale_y0) -> tuple[float, float]:
    return aler(normalize_ale_y(y, ale_y0))


def naled(y, ale_y0, ale_n) -> float:
    return aled(normalize_ale_y(y, ale_y0), ale_n)


def statistics_matrix(y, curves, ale_n) -> dict[str, np.ndarray]:
    """All six statistics for each row of ``curves`` (rows = iterations)."""
    curves = np.atleast_2d(np.asarray(curves, dtype=np.float64))
    weights = np.asarray(ale_n, dtype=np.float64)
    if weights.sum() <= 0:
        raise ValueError("ALED needs positive total weight")
    norm = _Halves.from_outcome(y).normalize(curves)
    total = weights.sum()
    return {
        "aled": np.abs(curves * weights).sum(axis=1) / total,
        "aler_min": curves.min(axis=1),
        "aler_max": curves.max(axis=1),
        "naled": np.abs(norm * weights).sum(axis=1) / total,
        "naler_min": norm.min(axis=1),
        "naler_max": norm.max(axis=1),
    }


def p_value(ref, observed: float, direction: str = "upper") -> float:
    """Empirical p-value with the +1 correction.

    ``upper``: share of reference values >= observed; ``lower``: share <=.
    """
    ref = np.asarray(ref, dtype=np.float64)
    if ref.size == 0:
        raise ValueError("empty reference distribution")
    if direction == "upper":
        hits = int(np.count_nonzero(ref >= observed))
    elif direction == "lower":
        hits = int(np.count_nonzero(ref <= observed))
    else:
        raise ValueError(f"direction must be 'upper' or 'lower', got {direction!r}")
    return (hits + 1) / (ref.size + 1)


def direction_of(statistic: str) -> str:
    return "lower" if statistic in LOWER_TAIL else "upper"


@dataclass(frozen=True)
class StatSummary:
    estimate: float
    conf_low: float
    median: float
    mean: float
    conf_high: float
    full: float  # statistic of the single full-data curve
    p_value: float | None = None


@dataclass(frozen=True)
class AleStats:
    variable: str
    rows: Mapping[str, StatSummary]

    def __getitem__(self, statistic: str) -> StatSummary:
        return self.rows[statistic]

    def __iter__(self):
        return iter(STATISTICS)


@dataclass(frozen=True)
class RandomRefDistributions:
    """Sorted statistics of ``n_rand`` injected pure-noise variables."""

    values: Mapping[str, np.ndarray]
    n_rand: int
    seed: int
    boot_mode: str = "none"
    n_it: int = 0

    def __getitem__(self, statistic: str) -> np.ndarray:
        return self.values[statistic]


def ale_stats(
    curve: BootAleCurve,
    y,
    ci_level: float | None = None,
    ref: RandomRefDistributions | None = None,
) -> AleStats:
    """Effect-size summary of one bootstrapped curve.

    With a reference distribution, p-values compare the reference against the
    statistic produced the same way: the single full-data curve when the
    reference was built without bootstrapping, the bootstrap mean otherwise.
    """
    ci_level = curve.ci_level if ci_level is None else ci_level
    per_it = statistics_matrix(y, curve.iteration_matrix(), curve.ale_n)
    full = statistics_matrix(y, curve.ale_y_full - curve.center_value, curve.ale_n)
    rows = {}
    for name in STATISTICS:
        mean, med, lo, hi = aggregate(per_it[name], ci_level)
        full_value = float(full[name][0])
        p = None
        if ref is not None:
            observed = full_value if ref.n_it == 0 else float(mean)
            p = p_value(ref[name], observed, direction_of(name))
        rows[name] = StatSummary(
            estimate=float(mean), conf_low=float(lo), median=float(med), mean=float(mean),
            conf_high=float(hi), full=full_value, p_value=p,
        )
    return AleStats(curve.variable, rows)


def random_column_name(d: Dataset, base: str = "rand_norm") -> str:
    name = base
    while name in d:
        name = f"{name}_"
    return name


def random_stat_distributions(
    t: Trainer,
    d: Dataset,
    boot_mode: str = "none",
    n_rand: int = 100,
    n_it: int = 0,
    seed: int = 0,
    ci_level: float = DEFAULT_CI_LEVEL,
    workers: int = 1,
    max_bins: int = 100,
) -> RandomRefDistributions:
    """Statistics of ``n_rand`` injected standard-normal variables.

    For each ``r`` a fresh normal column (seed ``stream_seed(seed, r)``) is
    appended, the trainer is refit on the augmented data and the column's
    (optionally bootstrapped) ALE statistics are recorded.
    """
    if n_rand < 1:
        raise ValueError("n_rand must be >= 1")
    if not hasattr(t, "fit"):
        raise ValueError("random-variable distributions need a trainer")
    name = random_column_name(d)
    y = d.y

    def one(r: int) -> dict[str, float]:
        s = stream_seed(seed, r)
        try:
            aug = append_random_column(d, name, s)
            fitted = t.fit(aug)
            curve = bootstrap_ales(
                t, aug, [name], mode=boot_mode, n_it=n_it, ci_level=ci_level, seed=s,
                max_bins=max_bins, full_predictor=fitted,
            )[name]
        except Exception as exc:
            raise RuntimeError(f"random variable {r}: {exc}") from exc
        per_it = statistics_matrix(y, curve.iteration_matrix(), curve.ale_n)
        return {k: float(v.mean()) for k, v in per_it.items()}

    if workers > 1 and getattr(t, "concurrency_class", SERIAL_ONLY) != SERIAL_ONLY:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            draws = list(pool.map(one, range(n_rand)))
    else:
        draws = [one(r) for r in range(n_rand)]
    values = {k: np.sort(np.array([row[k] for row in draws])) for k in STATISTICS}
    n_it_used = 0 if boot_mode == "none" else n_it
    return RandomRefDistributions(values, n_rand, seed, boot_mode, n_it_used)


@dataclass(frozen=True)
class AlerBand:
    lower: float
    upper: float
    outer_lower: float
    outer_upper: float
    center: float
    level: float = 0.95
    outer_level: float = 0.99


def aler_band(
    ref: RandomRefDistributions, level: float = 0.95, center: float = 0.0, outer_level: float = 0.99
) -> AlerBand:
    """Band around ``center`` holding the ALER excursions of random variables.

    The lower edge is the ``1 - level`` quantile of the reference ``aler_min``
    values, the upper edge the ``level`` quantile of ``aler_max``.
    """
    for lv in (level, outer_level):
        if not 0.0 < lv < 1.0:
            raise ValueError(f"band level must be in (0, 1), got {lv}")
    lo_ref, hi_ref = ref["aler_min"], ref["aler_max"]
    return AlerBand(
        lower=center + quantile7(lo_ref, 1 - level),
        upper=center + quantile7(hi_ref, level),
        outer_lower=center + quantile7(lo_ref, 1 - outer_level),
        outer_upper=center + quantile7(hi_ref, outer_level),
        center=center,
        level=level,
        outer_level=outer_level,
    )


def flat_band(center: float) -> AlerBand:
    """Zero-width band at ``center``, used when no reference distribution exists."""
    return AlerBand(center, center, center, center, center)

"""Bootstrapped ALE over fixed intervals.

Intervals are computed once from the full dataset and reused for every
bootstrap sample, so iterations can be aggregated entry by entry.

Two regimes:

``data_only``
    One fitted predictor is evaluated on every resample.
``model``
    The trainer is refit on every resample and the refit is evaluated.

Iteration ``i`` resamples with seed ``stream_seed(seed, i)``, so results do
not depend on execution order or the number of worker threads.  Each
iteration's curve is zero-centered with the full-data ``ale_n`` weights and
display-centered on the full-data center value (the outcome median by
default).
"""

from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ale import (
    DEFAULT_MAX_BINS,
    AleCurve,
    AleIntervals,
    center_value,
    compute_ale,
    compute_intervals,
)
from .data import Dataset, resample_indices
from .model import SERIAL_ONLY, Predictor, Trainer
from .quantile import median, quantile7, tail_probabilities
from .rng import stream_seed

MODES = ("none", "data_only", "model")
DEFAULT_N_IT = 100
DEFAULT_CI_LEVEL = 0.95


class BootstrapError(RuntimeError):
    """A bootstrap iteration failed; the message names the iteration."""


@dataclass(frozen=True)
class BootAleCurve:
    variable: str
    kind: str
    ale_x: np.ndarray | tuple[str, ...]
    ale_n: np.ndarray
    ale_y_full: np.ndarray
    ale_y_mean: np.ndarray
    ale_y_median: np.ndarray
    ale_y_lo: np.ndarray
    ale_y_hi: np.ndarray
    center_kind: str
    center_value: float
    ci_level: float
    n_it: int
    mode: str
    per_iteration: np.ndarray | None = None  # n_it x len(ale_x), zero-centered

    @property
    def ale_y(self) -> np.ndarray:
        """The reported curve: the bootstrap mean (the full-data curve when n_it = 0)."""
        return self.ale_y_mean

    def full_curve(self) -> AleCurve:
        return AleCurve(
            self.variable, self.kind, self.ale_x, self.ale_n, self.ale_y_full,
            self.center_kind, self.center_value,
        )

    def iteration_matrix(self) -> np.ndarray:
        """Zero-centered curves, one row per iteration (the full-data curve if n_it = 0)."""
        if self.n_it == 0:
            return (self.ale_y_full - self.center_value)[None, :]
        if self.per_iteration is None:
            raise ValueError(f"{self.variable!r}: per-iteration values were not retained")
        return self.per_iteration


def aggregate(values, ci_level: float = DEFAULT_CI_LEVEL):
    """Mean, median and type-7 percentile interval along the first axis.

    Returns ``(mean, median, lo, hi)``.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0 or arr.shape[0] == 0:
        raise ValueError("cannot aggregate an empty sample")
    p_lo, p_hi = tail_probabilities(ci_level)
    return (
        arr.mean(axis=0),
        median(arr, axis=0),
        quantile7(arr, p_lo, axis=0),
        quantile7(arr, p_hi, axis=0),
    )


def _is_trainer(source) -> bool:
    return hasattr(source, "fit")


def _normalise_mode(mode: str) -> str:
    aliases = {"data": "data_only", "data-only": "data_only", "full": "model"}
    mode = aliases.get(mode, mode)
    if mode not in MODES:
        raise ValueError(f"bootstrap mode must be one of {MODES}, got {mode!r}")
    return mode


def _recenter(curve: AleCurve, weights: np.ndarray) -> np.ndarray:
    y0 = curve.ale_y0
    return y0 - float(weights @ y0) / weights.sum()


def bootstrap_iterations(
    source: Trainer | Predictor,
    d: Dataset,
    intervals: Sequence[AleIntervals],
    mode: str,
    n_it: int,
    seed: int,
    workers: int = 1,
) -> list[dict[str, AleCurve]]:
    """Raw per-iteration curves (zero-centered on each resample's own counts).

    Element ``i`` maps variable name to the curve of iteration ``i``.
    """
    mode = _normalise_mode(mode)
    if mode == "none" or n_it == 0:
        return []
    if mode == "model":
        if not _is_trainer(source):
            raise ValueError("model bootstrap needs a trainer; external models cannot be retrained")
        trainer, fixed = source, None
    else:
        trainer, fixed = None, (source.fit(d) if _is_trainer(source) else source)

    def one(i: int) -> dict[str, AleCurve]:
        try:
            sample = d.take(resample_indices(d.n_rows, stream_seed(seed, i)))
            predictor = trainer.fit(sample) if trainer is not None else fixed
            return {iv.variable: compute_ale(predictor, sample, iv) for iv in intervals}
        except Exception as exc:
            raise BootstrapError(f"bootstrap iteration {i}: {exc}") from exc

    serial = getattr(trainer if trainer is not None else fixed, "concurrency_class", SERIAL_ONLY) == SERIAL_ONLY
    if workers <= 1 or serial:
        return [one(i) for i in range(n_it)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(n_it)))


def bootstrap_ales(
    source: Trainer | Predictor,
    d: Dataset,
    variables: Sequence[str] | None = None,
    mode: str = "data_only",
    n_it: int = DEFAULT_N_IT,
    ci_level: float = DEFAULT_CI_LEVEL,
    seed: int = 0,
    center_kind: str = "median",
    max_bins: int = DEFAULT_MAX_BINS,
    workers: int = 1,
    keep_iterations: bool = True,
    full_predictor: Predictor | None = None,
) -> dict[str, BootAleCurve]:
    """Bootstrapped ALE curves for several variables sharing the same resamples.

    Sharing the resamples means a model bootstrap refits the trainer once per
    iteration, not once per iteration and variable.  ``full_predictor``
    skips the full-data fit when the caller already has it.
    """
    mode = _normalise_mode(mode)
    if n_it < 0:
        raise ValueError("n_it must be >= 0")
    tail_probabilities(ci_level)
    if mode == "none":
        n_it = 0
    if mode == "model" and not _is_trainer(source):
        raise ValueError("model bootstrap needs a trainer; external models cannot be retrained")
    variables = list(d.predictors if variables is None else variables)
    intervals = [compute_intervals(d, v, max_bins) for v in variables]
    if full_predictor is None:
        full_predictor = source.fit(d) if _is_trainer(source) else source
    center = center_value(d.y, center_kind)

    full = {iv.variable: compute_ale(full_predictor, d, iv) for iv in intervals}
    iter_source = source if mode == "model" else full_predictor
    iterations = bootstrap_iterations(iter_source, d, intervals, mode, n_it, seed, workers)

    out = {}
    for iv in intervals:
        base = full[iv.variable]
        weights = base.ale_n
        y_full = base.ale_y0 + center
        if iterations:
            mat = np.vstack([_recenter(it[iv.variable], weights) for it in iterations])
            mean, med, lo, hi = aggregate(mat + center, ci_level)
        else:
            mat = None
            mean = med = lo = hi = y_full
        out[iv.variable] = BootAleCurve(
            variable=iv.variable,
            kind=base.kind,
            ale_x=base.ale_x,
            ale_n=base.ale_n,
            ale_y_full=y_full,
            ale_y_mean=np.array(mean),
            ale_y_median=np.array(med),
            ale_y_lo=np.array(lo),
            ale_y_hi=np.array(hi),
            center_kind=center_kind,
            center_value=center,
            ci_level=ci_level,
            n_it=len(iterations),
            mode=mode,
            per_iteration=mat if keep_iterations else None,
        )
    return out


def bootstrap_ale(
    source: Trainer | Predictor,
    d: Dataset,
    variable: str,
    mode: str = "data_only",
    n_it: int = DEFAULT_N_IT,
    ci_level: float = DEFAULT_CI_LEVEL,
    seed: int = 0,
    **kwargs,
) -> BootAleCurve:
    return bootstrap_ales(source, d, [variable], mode, n_it, ci_level, seed, **kwargs)[variable]

"""Model-agnostic accumulated local effects with bootstrap inference.

Typical use::

    from aleinfer import load_csv, OlsTrainer, bootstrap_ales, ale_stats

    d = load_csv("data.csv", outcome="y")
    curves = bootstrap_ales(OlsTrainer(), d, mode="model", n_it=100, seed=6)
    stats = {v: ale_stats(c, d.y) for v, c in curves.items()}
"""

__version__ = "0.1.0"

from .ale import AleCurve, AleIntervals, center, compute_ale, compute_intervals
from .bootstrap import BootAleCurve, aggregate, bootstrap_ale, bootstrap_ales
from .data import Column, Dataset, append_random_column, load_csv, resample
from .model import ExecPredictor, OlsTrainer, TreeTrainer, exec_predictor, fit_ols, fit_tree
from .regions import regions_categorical, regions_numeric
from .stats import (
    AlerBand,
    AleStats,
    ale_stats,
    aled,
    aler,
    aler_band,
    naled,
    naler,
    normalize_ale_y,
    p_value,
    random_stat_distributions,
)

__all__ = [
    "AleCurve", "AleIntervals", "AleStats", "AlerBand", "BootAleCurve", "Column", "Dataset",
    "ExecPredictor", "OlsTrainer", "TreeTrainer", "aggregate", "ale_stats", "aled", "aler",
    "aler_band", "append_random_column", "bootstrap_ale", "bootstrap_ales", "center",
    "compute_ale", "compute_intervals", "exec_predictor", "fit_ols", "fit_tree", "load_csv",
    "naled", "naler", "normalize_ale_y", "p_value", "random_stat_distributions",
    "regions_categorical", "regions_numeric", "resample",
]

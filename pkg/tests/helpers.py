from __future__ import annotations

import numpy as np

from aleinfer.bootstrap import BootAleCurve


def make_curve(ale_x, ale_n, mean, lo=None, hi=None, kind="numeric", center=0.0, n_it=10):
    mean = np.asarray(mean, dtype=float)
    lo = mean if lo is None else np.asarray(lo, dtype=float)
    hi = mean if hi is None else np.asarray(hi, dtype=float)
    x = tuple(ale_x) if kind == "categorical" else np.asarray(ale_x, dtype=float)
    return BootAleCurve(
        variable="v", kind=kind, ale_x=x, ale_n=np.asarray(ale_n), ale_y_full=mean,
        ale_y_mean=mean, ale_y_median=mean, ale_y_lo=lo, ale_y_hi=hi, center_kind="median",
        center_value=center, ci_level=0.95, n_it=n_it, mode="model",
    )

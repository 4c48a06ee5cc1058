"""Bundled synthetic datasets.

``linear.csv``
    300 rows, noiseless linear ground truth::

        y = 5 + 1.5*x1 - 2*x2 + 0.25*x3 + {north: 0, south: 1, east: -0.5}[group] + 0.8*flag

``nonlinear.csv``
    160 rows, step/curved ground truth with Gaussian noise and a pure-noise
    column ``noise`` that does not enter the outcome::

        y = 12 + 3*[x1 > 0] + 2*x1**2 + sin(2*pi*x2) + 0.7*public + N(0, 1.5**2)

Regenerate with ``python -m aleinfer.fixtures``.
"""

from __future__ import annotations

import csv
from importlib import resources
from pathlib import Path

import numpy as np

from ..rng import Pcg32

LINEAR_COEFS = {"intercept": 5.0, "x1": 1.5, "x2": -2.0, "x3": 0.25, "flag": 0.8}
GROUP_EFFECTS = {"north": 0.0, "south": 1.0, "east": -0.5}


def fixture_path(name: str) -> Path:
    """Path of a bundled CSV, e.g. ``fixture_path("linear")``."""
    return Path(str(resources.files(__package__).joinpath(f"{name}.csv")))


def _round(values: np.ndarray, digits: int = 6) -> np.ndarray:
    return np.round(values, digits)


def make_linear(seed: int = 20240101, n: int = 300) -> dict[str, list]:
    x1 = _round(10.0 * Pcg32(seed, 11).uniform(n))
    x2 = _round(2.0 * Pcg32(seed, 12).normal(n))
    x3 = Pcg32(seed, 13).integers(20, n) + 1
    groups = list(GROUP_EFFECTS)
    group = [groups[i] for i in Pcg32(seed, 14).integers(len(groups), n)]
    flag = Pcg32(seed, 15).integers(2, n).astype(bool)
    c = LINEAR_COEFS
    y = (
        c["intercept"] + c["x1"] * x1 + c["x2"] * x2 + c["x3"] * x3
        + np.array([GROUP_EFFECTS[g] for g in group]) + c["flag"] * flag
    )
    return {
        "y": list(_round(y, 9)),
        "x1": list(x1),
        "x2": list(x2),
        "x3": [int(v) for v in x3],
        "group": group,
        "flag": ["TRUE" if f else "FALSE" for f in flag],
    }


def make_nonlinear(seed: int = 20240102, n: int = 160) -> dict[str, list]:
    x1 = _round(2.0 * Pcg32(seed, 21).uniform(n) - 1.0)
    x2 = _round(Pcg32(seed, 22).uniform(n))
    public = Pcg32(seed, 23).integers(2, n).astype(bool)
    noise = _round(Pcg32(seed, 24).normal(n))
    eps = 1.5 * Pcg32(seed, 25).normal(n)
    y = 12.0 + 3.0 * (x1 > 0) + 2.0 * x1**2 + np.sin(2 * np.pi * x2) + 0.7 * public + eps
    return {
        "y": list(_round(y)),
        "x1": list(x1),
        "x2": list(x2),
        "public": ["TRUE" if p else "FALSE" for p in public],
        "noise": list(noise),
    }


def _write(path: Path, table: dict[str, list]) -> None:
    names = list(table)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in zip(*(table[k] for k in names)):
            writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])


def main() -> None:
    here = Path(__file__).parent
    _write(here / "linear.csv", make_linear())
    _write(here / "nonlinear.csv", make_nonlinear())

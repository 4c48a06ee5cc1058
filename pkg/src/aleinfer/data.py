"""Typed tabular datasets, CSV loading, resampling and random-column injection."""

from __future__ import annotations

import csv
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .rng import STREAM_NORMAL, STREAM_RESAMPLE, Pcg32

NUMERIC = "numeric"
CATEGORICAL = "categorical"
LOGICAL = "logical"
KINDS = (NUMERIC, CATEGORICAL, LOGICAL)

LOGICAL_LEVELS = ("FALSE", "TRUE")
_LOGICAL_TOKENS = {"TRUE": "TRUE", "true": "TRUE", "FALSE": "FALSE", "false": "FALSE"}


class DataError(ValueError):
    """Raised for malformed input data."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Column:
    """One typed column.

    Numeric columns hold float64 values.  Categorical and logical columns hold
    int64 codes into ``levels``.
    """

    name: str
    kind: str
    values: np.ndarray
    levels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DataError(f"unknown column kind {self.kind!r}")
        if self.kind == NUMERIC:
            object.__setattr__(self, "values", _frozen(np.asarray(self.values, dtype=np.float64)))
        else:
            if not self.levels:
                raise DataError(f"column {self.name!r}: categorical columns need levels")
            if len(set(self.levels)) != len(self.levels):
                raise DataError(f"column {self.name!r}: duplicate levels")
            codes = np.asarray(self.values, dtype=np.int64)
            if codes.size and (codes.min() < 0 or codes.max() >= len(self.levels)):
                raise DataError(f"column {self.name!r}: code outside level list")
            object.__setattr__(self, "values", _frozen(codes))
            object.__setattr__(self, "levels", tuple(self.levels))

    @property
    def is_numeric(self) -> bool:
        return self.kind == NUMERIC

    def labels(self) -> list[str]:
        """Values as text, the way they would be written to CSV."""
        if self.is_numeric:
            return [repr(float(v)) for v in self.values]
        return [self.levels[c] for c in self.values]

    def with_values(self, values) -> Column:
        return Column(self.name, self.kind, values, self.levels)

    def __eq__(self, other):
        if not isinstance(other, Column):
            return NotImplemented
        return (
            self.name == other.name
            and self.kind == other.kind
            and self.levels == other.levels
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None


def column_from_text(name: str, texts: Sequence[str]) -> Column:
    """Infer a column's kind from its text cells.

    All cells parse as finite numbers -> numeric; all cells in
    ``{TRUE, FALSE, true, false}`` -> logical; otherwise categorical with
    levels in order of first appearance.
    """
    try:
        nums = [float(t) for t in texts]
        if all(math.isfinite(v) for v in nums):
            return Column(name, NUMERIC, np.array(nums, dtype=np.float64))
    except ValueError:
        pass
    if all(t in _LOGICAL_TOKENS for t in texts):
        codes = [LOGICAL_LEVELS.index(_LOGICAL_TOKENS[t]) for t in texts]
        return Column(name, LOGICAL, codes, LOGICAL_LEVELS)
    levels: dict[str, int] = {}
    codes = [levels.setdefault(t, len(levels)) for t in texts]
    return Column(name, CATEGORICAL, codes, tuple(levels))


def column_from_values(name: str, values: Iterable) -> Column:
    values = list(values)
    if values and all(isinstance(v, (bool, np.bool_)) for v in values):
        return Column(name, LOGICAL, [int(bool(v)) for v in values], LOGICAL_LEVELS)
    if all(isinstance(v, (int, float, np.integer, np.floating)) for v in values):
        return Column(name, NUMERIC, np.asarray(values, dtype=np.float64))
    return column_from_text(name, [str(v) for v in values])


class Dataset:
    """Immutable table of typed columns with one numeric outcome column."""

    def __init__(self, columns: Sequence[Column], outcome: str):
        columns = tuple(columns)
        if not columns:
            raise DataError("dataset has no columns")
        names = [c.name for c in columns]
        if len(set(names)) != len(names):
            raise DataError("duplicate column names")
        lengths = {c.values.shape[0] for c in columns}
        if len(lengths) != 1:
            raise DataError("columns have different lengths")
        n_rows = lengths.pop()
        if n_rows < 1:
            raise DataError("dataset has no rows")
        if outcome not in names:
            raise DataError(f"outcome column {outcome!r} not found")
        by_name = dict(zip(names, columns))
        if not by_name[outcome].is_numeric:
            raise DataError(f"outcome column {outcome!r} is not numeric")
        self._columns = columns
        self._by_name = by_name
        self.outcome = outcome
        self.n_rows = int(n_rows)

    @classmethod
    def from_dict(cls, data: Mapping[str, Iterable], outcome: str) -> Dataset:
        """Build a dataset from ``{name: values}``, inferring column kinds."""
        return cls([column_from_values(k, v) for k, v in data.items()], outcome)

    @property
    def columns(self) -> tuple[Column, ...]:
        return self._columns

    @property
    def names(self) -> list[str]:
        return [c.name for c in self._columns]

    @property
    def predictors(self) -> list[str]:
        return [c.name for c in self._columns if c.name != self.outcome]

    @property
    def n_cols(self) -> int:
        return len(self._columns)

    @property
    def y(self) -> np.ndarray:
        return self._by_name[self.outcome].values

    def column(self, name: str) -> Column:
        try:
            return self._by_name[name]
        except KeyError:
            raise DataError(f"column {name!r} not found") from None

    __getitem__ = column

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def take(self, indices) -> Dataset:
        """Rows at ``indices`` (repeats allowed); kinds and level lists are kept."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset([c.with_values(c.values[idx]) for c in self._columns], self.outcome)

    def replace(self, name: str, values) -> Dataset:
        """Copy with column ``name`` holding ``values`` (codes for categorical)."""
        self.column(name)
        cols = [c.with_values(values) if c.name == name else c for c in self._columns]
        return Dataset(cols, self.outcome)

    def append(self, column: Column) -> Dataset:
        if column.name in self._by_name:
            raise DataError(f"column {column.name!r} already exists")
        return Dataset(self._columns + (column,), self.outcome)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.outcome == other.outcome and self._columns == other._columns

    __hash__ = None

    def __repr__(self):
        kinds = ", ".join(f"{c.name}:{c.kind}" for c in self._columns)
        return f"Dataset(n_rows={self.n_rows}, outcome={self.outcome!r}, columns=[{kinds}])"


def load_csv(path: str | Path, outcome: str) -> Dataset:
    """Load a headed CSV file (RFC 4180, UTF-8) into a typed :class:`Dataset`."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path}: missing header row")
    header, body = rows[0], rows[1:]
    if not body:
        raise DataError(f"{path}: no data rows")
    width = len(header)
    for i, row in enumerate(body, start=1):
        if len(row) != width:
            raise DataError(f"{path}: ragged row {i}: expected {width} fields, got {len(row)}")
        for name, cell in zip(header, row):
            if cell.strip() == "":
                raise DataError(f"{path}: missing value in row {i}, column {name!r}")
    cells = list(zip(*body))
    columns = [column_from_text(name, [t.strip() for t in cells[j]]) for j, name in enumerate(header)]
    if outcome not in header:
        raise DataError(f"{path}: outcome column {outcome!r} not found")
    return Dataset(columns, outcome)


def resample_indices(n_rows: int, seed: int) -> np.ndarray:
    """Row indices of a bootstrap sample: ``n_rows`` uniform draws with replacement."""
    return Pcg32(seed, STREAM_RESAMPLE).integers(n_rows, n_rows)


def resample(d: Dataset, seed: int) -> Dataset:
    return d.take(resample_indices(d.n_rows, seed))


def append_random_column(d: Dataset, name: str, seed: int) -> Dataset:
    """Append a numeric column of i.i.d. standard-normal draws."""
    if name in d:
        raise DataError(f"column {name!r} already exists")
    values = Pcg32(seed, STREAM_NORMAL).normal(d.n_rows)
    return d.append(Column(name, NUMERIC, values))

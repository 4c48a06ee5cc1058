"""Black-box model boundary.

A *predictor* maps the predictor columns of a :class:`~aleinfer.data.Dataset`
to one real number per row.  A *trainer* fits a predictor on a dataset.  The
ALE engine only ever talks to these two interfaces, so built-in models and
external processes are interchangeable.

Built-ins:

* :func:`fit_ols` / :class:`OlsTrainer` - least squares with intercept and
  one-hot encoded factors (first level dropped), ridge fallback when the
  normal equations are singular.
* :func:`fit_tree` / :class:`TreeTrainer` - CART variance-reduction tree.
* :func:`exec_predictor` - runs an external command once per predict call,
  CSV on stdin, one number per line on stdout.
"""

from __future__ import annotations

import csv
import io
import math
import shlex
import subprocess
from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

import numpy as np

from .data import Column, Dataset

PARALLEL_SAFE = "parallel-safe"
SERIAL_ONLY = "serial-only"

DEFAULT_RIDGE_EPSILON = 1e-8


class ModelError(ValueError):
    """Raised when a model cannot be fit."""


class PredictorError(RuntimeError):
    """Raised when a predictor fails to produce valid predictions."""


@runtime_checkable
class Predictor(Protocol):
    concurrency_class: str

    def predict(self, d: Dataset) -> np.ndarray: ...


@runtime_checkable
class Trainer(Protocol):
    description: str
    concurrency_class: str

    def fit(self, d: Dataset) -> Predictor: ...


# ------------------------------------------------------------------ #
# Feature handling shared by the built-in models
# ------------------------------------------------------------------ #


@dataclass(frozen=True)
class _Feature:
    name: str
    numeric: bool
    levels: tuple[str, ...]


def _features(d: Dataset) -> list[_Feature]:
    out = []
    for name in d.predictors:
        col = d.column(name)
        out.append(_Feature(name, col.is_numeric, col.levels))
    return out


def _codes(col: Column, feature: _Feature) -> np.ndarray:
    """Category codes of ``col`` expressed in the fitted level list."""
    if col.levels == feature.levels:
        return col.values
    lookup = {lvl: i for i, lvl in enumerate(feature.levels)}
    try:
        remap = np.array([lookup[lvl] for lvl in col.levels], dtype=np.int64)
    except KeyError as exc:
        raise PredictorError(f"column {feature.name!r}: unknown level {exc.args[0]!r}") from None
    return remap[col.values]


def _design_matrix(d: Dataset, features: list[_Feature]) -> np.ndarray:
    blocks = [np.ones((d.n_rows, 1))]
    for f in features:
        col = d.column(f.name)
        if f.numeric:
            blocks.append(col.values.reshape(-1, 1))
        else:
            codes = _codes(col, f)
            onehot = (codes[:, None] == np.arange(1, len(f.levels))[None, :]).astype(np.float64)
            blocks.append(onehot)
    return np.hstack(blocks)


def _check_predictions(pred: np.ndarray, n: int) -> np.ndarray:
    if pred.shape != (n,):
        raise PredictorError(f"expected {n} predictions, got shape {pred.shape}")
    if not np.all(np.isfinite(pred)):
        raise PredictorError("predictor returned non-finite values")
    return pred


# ------------------------------------------------------------------ #
# Ordinary least squares
# ------------------------------------------------------------------ #


@dataclass(frozen=True)
class OlsPredictor:
    features: list[_Feature]
    coefficients: np.ndarray
    ridge: bool = False
    concurrency_class: str = PARALLEL_SAFE

    @property
    def intercept(self) -> float:
        return float(self.coefficients[0])

    def coefficient(self, name: str) -> float:
        """Slope of a numeric feature."""
        pos = 1
        for f in self.features:
            if f.name == name:
                if not f.numeric:
                    raise KeyError(f"{name!r} is categorical")
                return float(self.coefficients[pos])
            pos += 1 if f.numeric else len(f.levels) - 1
        raise KeyError(name)

    def predict(self, d: Dataset) -> np.ndarray:
        # Column-wise accumulation: each output depends only on its own row.
        # A BLAS matrix-vector product may sum rows in position-dependent
        # order, which breaks exact batch invariance.
        X = _design_matrix(d, self.features)
        pred = np.full(d.n_rows, self.coefficients[0])
        for j in range(1, X.shape[1]):
            pred += X[:, j] * self.coefficients[j]
        return _check_predictions(pred, d.n_rows)


def fit_ols(d: Dataset, ridge_epsilon: float = DEFAULT_RIDGE_EPSILON) -> OlsPredictor:
    """Least-squares fit with intercept.

    Solves the normal equations when the design has full column rank and
    otherwise falls back to ridge regression with ``ridge_epsilon`` added to
    the diagonal of ``X'X`` (solved as an augmented least-squares problem).
    """
    if ridge_epsilon < 0:
        raise ModelError("ridge_epsilon must be nonnegative")
    features = _features(d)
    if not features:
        raise ModelError("OLS needs at least one predictor column")
    X = _design_matrix(d, features)
    y = d.y
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ModelError("non-finite values in training data")
    p = X.shape[1]
    beta = None
    if np.linalg.matrix_rank(X) == p:
        try:
            beta = np.linalg.solve(X.T @ X, X.T @ y)
        except np.linalg.LinAlgError:
            beta = None
    if beta is not None:
        return OlsPredictor(features, beta)
    # (X'X + eps I) b = X'y  <=>  min |[X; sqrt(eps) I] b - [y; 0]|
    aug_X = np.vstack([X, math.sqrt(ridge_epsilon) * np.eye(p)])
    aug_y = np.concatenate([y, np.zeros(p)])
    beta = np.linalg.lstsq(aug_X, aug_y, rcond=None)[0]
    return OlsPredictor(features, beta, ridge=True)


@dataclass(frozen=True)
class OlsTrainer:
    ridge_epsilon: float = DEFAULT_RIDGE_EPSILON
    concurrency_class: str = PARALLEL_SAFE

    @property
    def description(self) -> str:
        return "ols"

    def fit(self, d: Dataset) -> OlsPredictor:
        return fit_ols(d, self.ridge_epsilon)


# ------------------------------------------------------------------ #
# Regression tree
# ------------------------------------------------------------------ #


@dataclass
class TreeNode:
    value: float
    n: int
    feature: int | None = None
    threshold: float | None = None  # numeric split: x <= threshold goes left
    left_levels: frozenset[int] | None = None  # categorical split: codes going left
    left: TreeNode | None = None
    right: TreeNode | None = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def structure(self):
        """Nested tuple describing the tree, for equality checks."""
        if self.is_leaf:
            return ("leaf", self.value, self.n)
        split = self.threshold if self.left_levels is None else tuple(sorted(self.left_levels))
        return ("split", self.feature, split, self.left.structure(), self.right.structure())

    def leaves(self) -> list[TreeNode]:
        if self.is_leaf:
            return [self]
        return self.left.leaves() + self.right.leaves()


def _best_split_sorted(keys: np.ndarray, y: np.ndarray, min_leaf: int):
    """Best SSE split of ``y`` ordered by ``keys``.

    Returns ``(sse, position, order, sorted_keys)`` where the left part is the
    first ``position`` rows of ``order``, or None when no admissible split
    exists.  Ties go to the lowest position.
    """
    m = y.size
    order = np.argsort(keys, kind="stable")
    ks, ys = keys[order], y[order]
    ys = ys - ys.mean()
    csum = np.cumsum(ys)
    csum2 = np.cumsum(ys * ys)
    pos = np.arange(min_leaf, m - min_leaf + 1)
    if pos.size == 0:
        return None
    pos = pos[ks[pos - 1] < ks[pos]]
    if pos.size == 0:
        return None
    n_left = pos.astype(np.float64)
    n_right = m - n_left
    s_left = csum[pos - 1]
    s_right = csum[-1] - s_left
    sse_left = csum2[pos - 1] - s_left * s_left / n_left
    sse_right = (csum2[-1] - csum2[pos - 1]) - s_right * s_right / n_right
    total = sse_left + sse_right
    best = int(np.argmin(total))
    return float(total[best]), int(pos[best]), order, ks


@dataclass
class TreePredictor:
    root: TreeNode
    features: list[_Feature]
    concurrency_class: str = PARALLEL_SAFE

    def _matrix(self, d: Dataset) -> list[np.ndarray]:
        cols = []
        for f in self.features:
            col = d.column(f.name)
            cols.append(col.values if f.numeric else _codes(col, f))
        return cols

    def predict(self, d: Dataset) -> np.ndarray:
        cols = self._matrix(d)
        out = np.empty(d.n_rows)
        stack = [(self.root, np.arange(d.n_rows))]
        while stack:
            node, idx = stack.pop()
            if node.is_leaf:
                out[idx] = node.value
                continue
            x = cols[node.feature][idx]
            if node.left_levels is None:
                go_left = x <= node.threshold
            else:
                go_left = np.isin(x, list(node.left_levels))
            stack.append((node.left, idx[go_left]))
            stack.append((node.right, idx[~go_left]))
        return _check_predictions(out, d.n_rows)


def fit_tree(d: Dataset, max_depth: int = 3, min_leaf: int = 5) -> TreePredictor:
    """Grow a CART regression tree by greedy variance reduction.

    Numeric splits use midpoints between adjacent distinct values.  Categorical
    levels are ordered by their mean outcome within the node and split like an
    ordinal.  Ties go to the lowest column index, then the lowest threshold.
    """
    if max_depth < 0:
        raise ModelError("max_depth must be >= 0")
    if min_leaf < 1:
        raise ModelError("min_leaf must be >= 1")
    if d.n_rows < 1:
        raise ModelError("cannot fit a tree on an empty dataset")
    features = _features(d)
    cols = [d.column(f.name).values for f in features]
    y = d.y

    def grow(idx: np.ndarray, depth: int) -> TreeNode:
        ys = y[idx]
        node = TreeNode(value=float(ys.mean()), n=int(idx.size))
        if depth >= max_depth or idx.size < 2 * min_leaf:
            return node
        centred = ys - ys.mean()
        parent_sse = float(centred @ centred)
        best = None
        for j, f in enumerate(features):
            x = cols[j][idx]
            if f.numeric:
                keys = x
            else:
                present = np.unique(x)
                means = np.array([ys[x == c].mean() for c in present])
                rank_order = np.lexsort((present, means))
                rank = np.empty(len(f.levels), dtype=np.int64)
                rank[present[rank_order]] = np.arange(present.size)
                keys = rank[x].astype(np.float64)
            found = _best_split_sorted(keys, ys, min_leaf)
            if found is None:
                continue
            sse, pos, order, ks = found
            if best is None or sse < best[0]:
                best = (sse, j, pos, order, ks, x)
        if best is None or parent_sse - best[0] <= 1e-12 * (1.0 + parent_sse):
            return node
        _, j, pos, order, ks, x = best
        if features[j].numeric:
            thr = 0.5 * (ks[pos - 1] + ks[pos])
            if not ks[pos - 1] <= thr < ks[pos]:
                thr = float(ks[pos - 1])
            node.threshold = float(thr)
            go_left = x <= thr
        else:
            left_codes = frozenset(int(c) for c in x[order[:pos]])
            node.left_levels = left_codes
            go_left = np.isin(x, list(left_codes))
        node.feature = j
        node.left = grow(idx[go_left], depth + 1)
        node.right = grow(idx[~go_left], depth + 1)
        return node

    return TreePredictor(grow(np.arange(d.n_rows), 0), features)


@dataclass(frozen=True)
class TreeTrainer:
    max_depth: int = 3
    min_leaf: int = 5
    concurrency_class: str = PARALLEL_SAFE

    @property
    def description(self) -> str:
        return f"tree:{self.max_depth},{self.min_leaf}"

    def fit(self, d: Dataset) -> TreePredictor:
        return fit_tree(d, self.max_depth, self.min_leaf)


# ------------------------------------------------------------------ #
# External process
# ------------------------------------------------------------------ #


def predictor_csv(d: Dataset) -> str:
    """Predictor columns of ``d`` as CSV text (header first, '\\n' line ends)."""
    cols = [d.column(n) for n in d.predictors]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([c.name for c in cols])
    writer.writerows(zip(*(c.labels() for c in cols)))
    return buf.getvalue()


def parse_predictions(text: str, n: int) -> np.ndarray:
    """Parse newline-separated decimals, checking the count against ``n``."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    values = []
    for lineno, line in enumerate(lines, start=1):
        token = line.strip()
        try:
            v = float(token)
        except ValueError:
            raise PredictorError(f"line {lineno}: cannot parse {token!r} as a number") from None
        if not math.isfinite(v):
            raise PredictorError(f"line {lineno}: non-finite prediction {token!r}")
        values.append(v)
    if len(values) != n:
        raise PredictorError(f"expected {n} predictions, got {len(values)}")
    return np.array(values, dtype=np.float64)


@dataclass(frozen=True)
class ExecPredictor:
    """Predictor backed by an external command, invoked once per call."""

    command: str
    argv: tuple[str, ...] = field(init=False)
    concurrency_class: str = SERIAL_ONLY

    def __post_init__(self):
        argv = tuple(shlex.split(self.command))
        if not argv:
            raise PredictorError("empty command")
        object.__setattr__(self, "argv", argv)

    def predict(self, d: Dataset) -> np.ndarray:
        try:
            proc = subprocess.run(
                self.argv, input=predictor_csv(d), capture_output=True, text=True, check=False
            )
        except OSError as exc:
            raise PredictorError(f"cannot launch {self.command!r}: {exc}") from None
        if proc.returncode != 0:
            tail = proc.stderr.strip().splitlines()[-1:] or [""]
            raise PredictorError(f"{self.command!r} exited with status {proc.returncode}: {tail[0]}")
        return parse_predictions(proc.stdout, d.n_rows)


def exec_predictor(command: str) -> ExecPredictor:
    return ExecPredictor(command)

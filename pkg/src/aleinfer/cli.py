"""Command-line driver: data -> model -> bootstrapped ALE -> statistics -> files.

Outputs written to ``--out``:

``ale.json``    curves, aggregates, band and outcome median
``stats.csv``   one row per variable and statistic
``regions.csv`` confidence regions, numeric and categorical
``plots/``      one SVG per variable (unless ``--no-plots``)

Exit status: 0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bootstrap import BootAleCurve, bootstrap_ales
from .data import Dataset, load_csv
from .model import ExecPredictor, OlsTrainer, Predictor, Trainer, TreeTrainer
from .output import REGIONS_HEADER, STATS_HEADER, csv_text, dumps, write_text
from .plot import plot_svg
from .quantile import median
from .regions import RegionRowNumeric, regions
from .stats import (
    STATISTICS,
    AlerBand,
    AleStats,
    RandomRefDistributions,
    ale_stats,
    aler_band,
    flat_band,
    random_stat_distributions,
)

log = logging.getLogger("aleinfer")

BOOT_MODES = {"none": "none", "data": "data_only", "model": "model"}


class UsageError(ValueError):
    """Invalid or conflicting configuration (exit status 1)."""


@dataclass(frozen=True)
class ModelSpec:
    kind: str  # "ols" | "tree" | "exec"
    max_depth: int = 3
    min_leaf: int = 5
    command: str = ""

    @classmethod
    def parse(cls, text: str) -> ModelSpec:
        """Parse ``ols``, ``tree`` / ``tree:DEPTH,MIN_LEAF`` or ``exec:COMMAND``."""
        if text == "ols":
            return cls("ols")
        if text == "tree":
            return cls("tree")
        if text.startswith("tree:"):
            try:
                depth, leaf = (int(v) for v in text[5:].split(","))
            except ValueError:
                raise UsageError(f"bad tree spec {text!r}; expected tree:DEPTH,MIN_LEAF") from None
            return cls("tree", max_depth=depth, min_leaf=leaf)
        if text.startswith("exec:") and text[5:].strip():
            return cls("exec", command=text[5:])
        raise UsageError(f"unknown model spec {text!r}")

    @property
    def trainable(self) -> bool:
        return self.kind != "exec"

    def build(self) -> Trainer | Predictor:
        if self.kind == "ols":
            return OlsTrainer()
        if self.kind == "tree":
            return TreeTrainer(self.max_depth, self.min_leaf)
        return ExecPredictor(self.command)

    def __str__(self):
        if self.kind == "tree":
            return f"tree:{self.max_depth},{self.min_leaf}"
        if self.kind == "exec":
            return f"exec:{self.command}"
        return self.kind


@dataclass(frozen=True)
class AnalysisConfig:
    data: Path
    outcome: str
    out_dir: Path = Path("ale_out")
    model: ModelSpec = field(default_factory=lambda: ModelSpec("ols"))
    boot: str = "none"
    n_it: int = 100
    ci_level: float = 0.95
    rand_it: int = 0
    rand_boot_it: int = 0
    seed: int = 0
    variables: tuple[str, ...] | None = None
    max_bins: int = 100
    workers: int = 1
    plots: bool = True

    def validate(self) -> None:
        if self.boot not in BOOT_MODES:
            raise UsageError(f"--boot must be one of {sorted(BOOT_MODES)}")
        if not self.model.trainable and self.boot == "model":
            raise UsageError("external models cannot be retrained (--boot model with exec model)")
        if not self.model.trainable and self.rand_it > 0:
            raise UsageError("external models cannot be retrained (--rand-it needs a trainable model)")
        if self.n_it < 0 or self.rand_it < 0 or self.rand_boot_it < 0:
            raise UsageError("iteration counts must be >= 0")
        if not 0.0 < self.ci_level < 1.0:
            raise UsageError("--ci must be in (0, 1)")
        if self.max_bins < 1 or self.workers < 1:
            raise UsageError("--max-bins and --workers must be >= 1")


@dataclass
class AnalysisResult:
    config: AnalysisConfig
    dataset: Dataset
    curves: dict[str, BootAleCurve]
    stats: dict[str, AleStats]
    regions: dict[str, list]
    band: AlerBand
    reference: RandomRefDistributions | None
    outcome_median: float
    y_range: float


def analyze(cfg: AnalysisConfig) -> AnalysisResult:
    cfg.validate()
    d = load_csv(cfg.data, cfg.outcome)
    variables = list(cfg.variables) if cfg.variables is not None else d.predictors
    for v in variables:
        if v == d.outcome:
            raise UsageError(f"{v!r} is the outcome, not a predictor")
        if v not in d:
            raise UsageError(f"unknown variable {v!r}")
    source = cfg.model.build()
    mode = BOOT_MODES[cfg.boot]
    n_it = 0 if mode == "none" else cfg.n_it
    curves = bootstrap_ales(
        source, d, variables, mode=mode, n_it=n_it, ci_level=cfg.ci_level, seed=cfg.seed,
        max_bins=cfg.max_bins, workers=cfg.workers,
    )
    y = d.y
    center = float(median(y))
    reference = None
    if cfg.rand_it > 0:
        ref_mode = mode if cfg.rand_boot_it > 0 else "none"
        reference = random_stat_distributions(
            source, d, boot_mode=ref_mode, n_rand=cfg.rand_it, n_it=cfg.rand_boot_it,
            seed=cfg.seed, ci_level=cfg.ci_level, workers=cfg.workers, max_bins=cfg.max_bins,
        )
        band = aler_band(reference, 0.95, center, 0.99)
    else:
        log.warning("--rand-it is 0: no p-values; regions use a zero-width band at the median")
        band = flat_band(center)
    y_range = float(y.max() - y.min())
    if y_range <= 0:
        y_range = 1.0
    stats = {v: ale_stats(c, y, cfg.ci_level, reference) for v, c in curves.items()}
    region_rows = {v: regions(c, band, y_range) for v, c in curves.items()}
    return AnalysisResult(cfg, d, curves, stats, region_rows, band, reference, center, y_range)


def _curve_json(c: BootAleCurve) -> dict:
    ale_x = list(c.ale_x) if c.kind == "categorical" else np.asarray(c.ale_x, dtype=float).tolist()
    return {
        "kind": c.kind,
        "ale_x": ale_x,
        "ale_n": [int(v) for v in c.ale_n],
        "ale_y": c.ale_y_mean.tolist(),
        "ale_y_full": c.ale_y_full.tolist(),
        "ale_y_median": c.ale_y_median.tolist(),
        "ale_y_lo": c.ale_y_lo.tolist(),
        "ale_y_hi": c.ale_y_hi.tolist(),
        "center_kind": c.center_kind,
        "center_value": c.center_value,
        "mode": c.mode,
        "n_it": c.n_it,
        "ci_level": c.ci_level,
    }


def ale_document(res: AnalysisResult) -> dict:
    cfg = res.config
    band = res.band
    return {
        "outcome": res.dataset.outcome,
        "n_rows": res.dataset.n_rows,
        "median": res.outcome_median,
        "y_range": res.y_range,
        "config": {
            "model": str(cfg.model),
            "boot": cfg.boot,
            "n_it": cfg.n_it,
            "ci_level": cfg.ci_level,
            "rand_it": cfg.rand_it,
            "rand_boot_it": cfg.rand_boot_it,
            "seed": cfg.seed,
            "max_bins": cfg.max_bins,
        },
        "band": {
            "source": "random_variables" if res.reference is not None else "none",
            "center": band.center,
            "lower": band.lower,
            "upper": band.upper,
            "outer_lower": band.outer_lower,
            "outer_upper": band.outer_upper,
            "level": band.level,
            "outer_level": band.outer_level,
        },
        "variables": {v: _curve_json(c) for v, c in res.curves.items()},
    }


def stats_rows(res: AnalysisResult):
    for v, st in res.stats.items():
        for name in STATISTICS:
            s = st[name]
            yield [v, name, s.estimate, s.p_value, s.conf_low, s.median, s.mean, s.conf_high]


def region_rows(res: AnalysisResult):
    for v, rows in res.regions.items():
        for r in rows:
            if isinstance(r, RegionRowNumeric):
                yield [v, "numeric", r.start_x, r.end_x, r.x_span, r.n, r.n_pct,
                       r.start_y, r.end_y, r.trend, None, None, r.relative_to_mid]
            else:
                yield [v, "categorical", None, None, None, r.n, r.n_pct,
                       None, None, None, r.x, r.y, r.relative_to_mid]


def emit_outputs(res: AnalysisResult, out_dir: Path, plots: bool = True) -> list[Path]:
    """Write all result files to ``out_dir``; returns the paths written."""
    out_dir = Path(out_dir)
    files = {
        out_dir / "ale.json": dumps(ale_document(res)),
        out_dir / "stats.csv": csv_text(STATS_HEADER, stats_rows(res)),
        out_dir / "regions.csv": csv_text(REGIONS_HEADER, region_rows(res)),
    }
    if plots:
        for v, c in res.curves.items():
            rug = res.dataset.column(v).values if c.kind == "numeric" else None
            files[out_dir / "plots" / f"{v}.svg"] = plot_svg(c, res.band, rug)
    for path, text in files.items():
        write_text(path, text)
    return list(files)


def run_analysis(cfg: AnalysisConfig) -> AnalysisResult:
    res = analyze(cfg)
    emit_outputs(res, cfg.out_dir, cfg.plots)
    return res


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="aleinfer", description="Bootstrapped ALE with effect sizes and confidence regions.")
    p.add_argument("data", type=Path, help="input CSV with a header row")
    p.add_argument("--outcome", required=True, help="numeric outcome column")
    p.add_argument("--model", default="ols", help="ols | tree[:DEPTH,MIN_LEAF] | exec:COMMAND (default: ols)")
    p.add_argument("--boot", default="none", choices=sorted(BOOT_MODES), help="bootstrap mode (default: none)")
    p.add_argument("--n-it", type=int, default=100, help="bootstrap iterations (default: 100)")
    p.add_argument("--ci", type=float, default=0.95, dest="ci_level", help="confidence level (default: 0.95)")
    p.add_argument("--rand-it", type=int, default=0,
                   help="random variables for p-values and the ALER band; 0 disables (default: 0)")
    p.add_argument("--rand-boot-it", type=int, default=0,
                   help="bootstrap iterations per random variable (default: 0)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("ale_out"), dest="out_dir")
    p.add_argument("--vars", default=None, help="comma-separated predictors (default: all)")
    p.add_argument("--max-bins", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-plots", action="store_false", dest="plots")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def config_from_args(argv: Sequence[str] | None = None) -> AnalysisConfig:
    ns = build_parser().parse_args(argv)
    variables = None
    if ns.vars is not None:
        variables = tuple(v.strip() for v in ns.vars.split(",") if v.strip())
    return AnalysisConfig(
        data=ns.data, outcome=ns.outcome, out_dir=ns.out_dir, model=ModelSpec.parse(ns.model),
        boot=ns.boot, n_it=ns.n_it, ci_level=ns.ci_level, rand_it=ns.rand_it,
        rand_boot_it=ns.rand_boot_it, seed=ns.seed, variables=variables,
        max_bins=ns.max_bins, workers=ns.workers, plots=ns.plots,
    )


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(levelname)s: %(message)s")
    try:
        cfg = config_from_args(argv)
        cfg.validate()
    except SystemExit as exc:  # argparse: --help, --version or a usage error
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"aleinfer: error: {exc}", file=sys.stderr)
        return 1
    try:
        run_analysis(cfg)
    except UsageError as exc:
        print(f"aleinfer: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - one-line cause, status 2
        print(f"aleinfer: error: {' '.join(str(exc).split())}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

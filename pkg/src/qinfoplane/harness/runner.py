"""Alpha x seed sweeps: build data and models, train every cell, aggregate, write files."""
import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from ..data import (
    Dataset,
    PreprocessPipeline,
    gen_clouds,
    gen_regression,
    load_csv,
    split,
    to_01,
    to_pm1,
)
from ..errors import InvalidArgumentError, InvalidStateError
from ..infoplane import InfoPlaneTrace
from ..models import DenseNet, HybridModel, PqcModel
from ..qsim import CircuitSpec, backend
from ..train import AlphaSchedule, Splits, fit, steps_to_converge
from .config import ALPHA_WARN

log = logging.getLogger(__name__)

SUMMARY_HEADER = [
    "alpha", "mean_metric", "std_metric", "min_metric", "max_metric",
    "mean_steps", "std_steps", "mean_ratio",
]
EPOCH_HEADER = ["epoch", "alpha", "train_loss", "comp_loss", "train_metric", "test_metric"]


# -- data and models ----------------------------------------------------------


def build_splits(cfg):
    """Train/test(/val) splits after train-fitted preprocessing and angle scaling."""
    d = cfg.data
    kind = cfg.model_kind
    if d.source == "clouds":
        ds = gen_clouds(d.seed, n_per_cloud=d.n_per_cloud, sigma=d.sigma,
                        positive_offsets=d.positive_offsets)
    elif d.source == "regression":
        ds = gen_regression(d.seed, n=d.n_samples, n_features=d.n_features, noise=d.noise)
    else:
        schema = {"categorical": d.categorical, "drop": d.drop}
        ds = load_csv(d.path, d.label_column, schema)
        if ds.dropped_rows:
            log.info("%s: dropped %d incomplete rows", d.path, ds.dropped_rows)
    if cfg.train.task.value == "classification":
        ds = Dataset(ds.features, to_01(ds.labels) if kind == "dense" else to_pm1(ds.labels),
                     ds.feature_names, ds.dropped_rows)

    parts = split(ds, d.fractions, d.seed)
    if len(parts) == 3:
        train, val, test = parts
    else:
        (train, test), val = parts, None
    pipe = PreprocessPipeline(list(d.preprocess))
    xtr = pipe.fit_transform(train.features)
    scale = d.feature_scale if kind == "pqc" else 1.0

    def prep(part, x=None):
        if part is None:
            return None
        x = pipe.transform(part.features) if x is None else x
        return Dataset(x * scale, part.labels, None, ds.dropped_rows)

    return Splits(prep(train, xtr), prep(test), prep(val))


def build_model(cfg, n_features, seed):
    m = cfg.model
    rng = np.random.Generator(np.random.PCG64(seed))
    kind = cfg.model_kind
    if kind == "pqc":
        assign = m.feature_assignment or list(range(1, n_features + 1))
        if len(assign) != n_features:
            raise InvalidArgumentError(
                f"feature_assignment has {len(assign)} entries for {n_features} features"
            )
        spec = CircuitSpec(m.n_qubits, m.reupload_layers, m.variational_layers, assign)
        return PqcModel.init(spec, rng, m.init_low, m.init_high, m.readout_qubit)
    if kind == "hybrid":
        hidden = m.hidden[0] if m.hidden else 42
        return HybridModel.init(n_features, rng, hidden=hidden, n_layers=m.vqc_layers,
                                basis_change=m.basis_change)
    return DenseNet.init([n_features, *m.hidden, 1], rng, dropout_rate=m.dropout,
                         output_activation="sigmoid")


# -- cells --------------------------------------------------------------------


@dataclass
class CellResult:
    alpha: float
    seed: int
    status: str = "ok"
    error: Optional[str] = None
    records: list = field(default_factory=list)
    trace: Optional[InfoPlaneTrace] = None
    steps_per_epoch: int = 0

    @property
    def ok(self):
        return self.status == "ok"

    @property
    def warning(self):
        return self.alpha > ALPHA_WARN

    @property
    def steps(self):
        return steps_to_converge(self.records)

    @property
    def best_metric(self):
        return self.records[self.steps - 1].test_metric

    @property
    def final_metric(self):
        return self.records[-1].test_metric

    @property
    def ratio(self):
        """Train over test metric at the best epoch."""
        rec = self.records[self.steps - 1]
        return rec.train_metric / rec.test_metric if rec.test_metric > 0 else math.nan


@dataclass
class SweepResult:
    config: object
    cells: list

    def cell(self, alpha, seed):
        for c in self.cells:
            if c.alpha == alpha and c.seed == seed:
                return c
        raise KeyError((alpha, seed))

    @property
    def failed(self):
        return [c for c in self.cells if not c.ok]


def train_config(cfg, alpha, seed):
    sched = AlphaSchedule(cfg.alpha_mode, alpha, cfg.s_max)
    return replace(cfg.train, alpha=sched, seed=seed)


def run_cell(cfg, alpha, seed, splits=None):
    """Train one (alpha, seed) cell; failures become a marked result, never an exception."""
    try:
        splits = splits if splits is not None else build_splits(cfg)
        model = build_model(cfg, splits.train.features.shape[1], seed)
        res = fit(model, splits, train_config(cfg, alpha, seed), cfg.binning)
        cell = CellResult(alpha, seed, records=res.records, trace=res.trace,
                          steps_per_epoch=res.optimizer_steps_per_epoch)
        log.info("alpha=%g seed=%d best=%.4f steps=%d", alpha, seed, cell.best_metric, cell.steps)
        return cell
    except Exception as exc:  # noqa: BLE001 - a cell must not abort the sweep
        log.error("alpha=%g seed=%d failed: %s", alpha, seed, exc)
        return CellResult(alpha, seed, status="failed", error=f"{type(exc).__name__}: {exc}")


def _worker(args):
    cfg, alpha, seed = args
    backend.set_num_threads(1)
    return run_cell(cfg, alpha, seed)


def run(cfg, threads=1):
    """Run the full grid. With ``threads > 1`` cells run in worker processes."""
    grid = [(a, s) for a in cfg.alphas for s in cfg.seeds]
    for a in sorted(set(cfg.alphas)):
        if a > ALPHA_WARN:
            log.warning("alpha=%g exceeds %g; results there are known to be unstable",
                        a, ALPHA_WARN)
    if threads <= 1 or len(grid) == 1:
        try:
            splits = build_splits(cfg)
        except Exception:  # noqa: BLE001 - reported per cell below
            splits = None
        cells = [run_cell(cfg, a, s, splits) for a, s in grid]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            cells = list(pool.map(_worker, [(cfg, a, s) for a, s in grid]))
    return SweepResult(cfg, cells)


# -- aggregation and output ---------------------------------------------------


def _stats(values):
    v = np.asarray(values, dtype=np.float64)
    std = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
    return float(v.mean()), std, float(v.min()), float(v.max())


def aggregate(result):
    """One row per alpha, in config order, over the completed cells."""
    rows = []
    for alpha in dict.fromkeys(c.alpha for c in result.cells):
        done = [c for c in result.cells if c.alpha == alpha and c.ok]
        if not done:
            continue
        mean, std, lo, hi = _stats([c.best_metric for c in done])
        msteps, ssteps, _, _ = _stats([c.steps for c in done])
        ratios = [c.ratio for c in done if not math.isnan(c.ratio)]
        rows.append({
            "alpha": alpha,
            "mean_metric": mean,
            "std_metric": std,
            "min_metric": lo,
            "max_metric": hi,
            "mean_steps": msteps,
            "std_steps": ssteps,
            "mean_ratio": float(np.mean(ratios)) if ratios else math.nan,
            "n_cells": len(done),
            "mean_final_metric": float(np.mean([c.final_metric for c in done])),
        })
    if not rows:
        raise InvalidStateError("no completed cells to aggregate")
    return rows


def fmt_alpha(alpha):
    return f"{alpha:g}"


def _num(x):
    return "nan" if isinstance(x, float) and math.isnan(x) else repr(float(x))


def _json_num(x):
    return None if isinstance(x, float) and math.isnan(x) else x


def _open(path):
    try:
        return open(path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def emit(result, outdir=None):
    """Write the summary CSV, per-cell epoch and information-plane CSVs and summary.json."""
    if not any(c.ok for c in result.cells):
        raise InvalidStateError("refusing to emit: no cell completed")
    out = Path(outdir or result.config.outdir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {out}: {exc.strerror}") from exc
    rows = aggregate(result)
    written = []

    path = out / "sweep_summary.csv"
    with _open(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for r in rows:
            w.writerow([fmt_alpha(r["alpha"])] + [_num(r[k]) for k in SUMMARY_HEADER[1:]])
    written.append(path)

    for c in result.cells:
        if not c.ok:
            continue
        tag = f"{fmt_alpha(c.alpha)}_{c.seed}"
        path = out / f"epochs_{tag}.csv"
        with _open(path) as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(EPOCH_HEADER)
            for r in c.records:
                w.writerow([r.epoch, _num(r.alpha), _num(r.train_loss), _num(r.comp_loss),
                            _num(r.train_metric), _num(r.test_metric)])
        written.append(path)
        path = out / f"infoplane_{tag}.csv"
        c.trace.write_csv(path)
        written.append(path)

    cfg = result.config
    summary = {
        "experiment": cfg.experiment.value,
        "name": cfg.name,
        "metric": cfg.train.metric,
        "alpha_mode": cfg.alpha_mode.value,
        "s_max": cfg.s_max,
        "alphas": list(cfg.alphas),
        "seeds": list(cfg.seeds),
        "alpha_warning_threshold": ALPHA_WARN,
        "aggregate": [{k: _json_num(v) for k, v in r.items()} for r in rows],
        "cells": [_cell_json(c) for c in result.cells],
    }
    path = out / "summary.json"
    with _open(path) as fh:
        json.dump(summary, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
    written.append(path)
    return written


def _cell_json(c):
    base = {"alpha": c.alpha, "seed": c.seed, "status": c.status, "warning": c.warning}
    if not c.ok:
        base["error"] = c.error
        return base
    base.update({
        "best_metric": c.best_metric,
        "final_metric": c.final_metric,
        "steps_to_converge_epochs": c.steps,
        "steps_to_converge_optimizer_steps": c.steps * c.steps_per_epoch,
        "optimizer_steps_per_epoch": c.steps_per_epoch,
        "train_test_ratio": _json_num(c.ratio),
        "epochs_run": len(c.records),
    })
    return base


def load_summary(result_dir):
    result_dir = Path(result_dir)
    with open(result_dir / "summary.json", encoding="utf-8") as fh:
        summary = json.load(fh)
    with open(result_dir / "sweep_summary.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return summary, rows


def report(result_dir):
    """Human-readable comparison of every alpha against the alpha = 0 column."""
    summary, rows = load_summary(result_dir)
    lines = [f"{summary['name']} ({summary['experiment']}, metric {summary['metric']})"]
    lines.append(f"{'alpha':>7} {'mean':>8} {'std':>8} {'min':>8} {'max':>8} "
                 f"{'steps':>8} {'ratio':>7}")
    base = None
    for r in rows:
        a = float(r["alpha"])
        mean, steps = float(r["mean_metric"]), float(r["mean_steps"])
        if a == 0:
            base = (mean, steps)
        lines.append(f"{a:7g} {mean:8.4f} {float(r['std_metric']):8.4f} "
                     f"{float(r['min_metric']):8.4f} {float(r['max_metric']):8.4f} "
                     f"{steps:8.1f} {float(r['mean_ratio']):7.3f}")
    if base is not None and len(rows) > 1:
        others = [r for r in rows if float(r["alpha"]) != 0]
        best = max(others, key=lambda r: float(r["mean_metric"]))
        lines.append(
            f"best alpha {float(best['alpha']):g}: metric {float(best['mean_metric']) - base[0]:+.4f}"
            f" vs alpha=0, steps x{float(best['mean_steps']) / base[1]:.2f}"
        )
    failed = [c for c in summary["cells"] if c["status"] != "ok"]
    if failed:
        lines.append(f"{len(failed)} failed cell(s):")
        lines.extend(f"  alpha={c['alpha']:g} seed={c['seed']}: {c['error']}" for c in failed)
    return "\n".join(lines)

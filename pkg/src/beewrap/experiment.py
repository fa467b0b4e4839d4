"""Experiment harness: config parsing, runs, sweeps, the exhaustive oracle,
and report / plot emission.

report.json is canonical (sorted keys, no volatile fields) so reruns with the
same seed are byte-identical; wall clock and timestamp go to run_meta.json.
"""

from __future__ import annotations

import csv
import itertools
import json
import logging
import math
import time
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from beewrap import __version__ as _tool_version
from beewrap.anfis import AnfisTrainConfig
from beewrap.ann import AnnTrainConfig
from beewrap.colony import (
    AbcConfig,
    CardinalityMode,
    FeatureSubset,
    ObjectiveValue,
    TraceRecord,
    abc_run,
    cv_objective,
)
from beewrap.dataset import Dataset, FeatureKind, FoldAssignment, kfold_split, load_dataset, select_wavenumber_range
from beewrap.regressors import AnfisRegressor, AnnRegressor

__all__ = [
    "ExperimentConfig",
    "ExperimentReport",
    "SweepCell",
    "SweepReport",
    "STRUCTURE_CASES",
    "config_from_dict",
    "config_to_dict",
    "load_config",
    "prepare_dataset",
    "resolve_features",
    "run_experiment",
    "fixed_subset_experiment",
    "cardinality_sweep",
    "brute_force_oracle",
    "emit_report",
    "emit_sweep",
    "audit_report",
]

log = logging.getLogger("beewrap")

# the eight swept model structures: four fuzzy rule banks, four hidden widths
STRUCTURE_CASES: dict[int, dict] = {
    1: {"kind": "anfis", "n_rules": 7, "consequent": "constant"},
    2: {"kind": "anfis", "n_rules": 7, "consequent": "linear"},
    3: {"kind": "anfis", "n_rules": 13, "consequent": "constant"},
    4: {"kind": "anfis", "n_rules": 13, "consequent": "linear"},
    5: {"kind": "ann", "hidden": 10},
    6: {"kind": "ann", "hidden": 20},
    7: {"kind": "ann", "hidden": 30},
    8: {"kind": "ann", "hidden": 40},
}


@dataclass(frozen=True)
class ExperimentConfig:
    dataset_path: str
    regressor: AnfisRegressor | AnnRegressor
    abc: AbcConfig = field(default_factory=AbcConfig)
    target_column: str = "Mn"
    wavenumber_lo: float = 6101.0
    wavenumber_hi: float = 6599.0
    k_folds: int = 5
    fold_seed: int = 0
    out_dir: str = "out"
    n_jobs: int = 1

    def __post_init__(self):
        if self.k_folds < 2:
            raise ValueError("k_folds must be >= 2")
        if self.n_jobs < 1:
            raise ValueError("n_jobs must be >= 1")


# ---------------------------------------------------------------------------
# config (de)serialization; flags override file values, see cli


def _regressor_to_dict(regressor) -> dict:
    if isinstance(regressor, AnfisRegressor):
        c = regressor.config
        return {
            "kind": "anfis",
            "n_rules": c.n_rules,
            "consequent": c.consequent,
            "fuzzifier": c.fuzzifier,
            "fcm_tol": c.fcm_tol,
            "fcm_max_iter": c.fcm_max_iter,
            "ridge": c.ridge,
            "premise_epochs": c.premise_epochs,
            "premise_lr": c.premise_lr,
            "seed": c.seed,
        }
    c = regressor.config
    return {
        "kind": "ann",
        "hidden": regressor.hidden,
        "epochs": c.epochs,
        "learning_rate": c.learning_rate,
        "momentum": c.momentum,
        "plateau_patience": c.plateau_patience,
        "plateau_rtol": c.plateau_rtol,
        "seed": c.seed,
    }


def regressor_from_dict(doc: dict):
    doc = dict(doc)
    kind = doc.pop("kind", None)
    if kind == "anfis":
        return AnfisRegressor(AnfisTrainConfig(**doc))
    if kind == "ann":
        hidden = doc.pop("hidden")
        return AnnRegressor(hidden, AnnTrainConfig(**doc))
    raise ValueError(f"unknown regressor kind {kind!r}")


def _cardinality_to_dict(mode: CardinalityMode) -> dict:
    if mode.kind == "fixed":
        return {"mode": "fixed", "k": mode.k}
    return {"mode": "free", "max_k": mode.max_k}


def _cardinality_from_dict(doc: dict) -> CardinalityMode:
    if doc["mode"] == "fixed":
        return CardinalityMode.fixed(doc["k"])
    if doc["mode"] == "free":
        return CardinalityMode.free(doc.get("max_k", 16))
    raise ValueError(f"unknown cardinality mode {doc['mode']!r}")


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Result-determining fields only: out_dir and n_jobs are execution knobs
    and live in run_meta.json, so the echoed config is byte-stable."""
    return {
        "dataset": cfg.dataset_path,
        "target_column": cfg.target_column,
        "wavenumber_range": [cfg.wavenumber_lo, cfg.wavenumber_hi],
        "regressor": _regressor_to_dict(cfg.regressor),
        "abc": {
            "population": cfg.abc.population,
            "iterations": cfg.abc.iterations,
            "limit": cfg.abc.effective_limit,
            "feature_penalty": cfg.abc.feature_penalty,
            "cardinality": _cardinality_to_dict(cfg.abc.cardinality),
            "seed": cfg.abc.seed,
        },
        "k_folds": cfg.k_folds,
        "fold_seed": cfg.fold_seed,
    }


def config_from_dict(doc: dict) -> ExperimentConfig:
    abc_doc = dict(doc.get("abc", {}))
    cardinality = abc_doc.pop("cardinality", None)
    mode = _cardinality_from_dict(cardinality) if cardinality else CardinalityMode.free()
    lo, hi = doc.get("wavenumber_range", [6101.0, 6599.0])
    return ExperimentConfig(
        dataset_path=doc["dataset"],
        target_column=doc.get("target_column", "Mn"),
        wavenumber_lo=float(lo),
        wavenumber_hi=float(hi),
        regressor=regressor_from_dict(doc["regressor"]),
        abc=AbcConfig(cardinality=mode, **abc_doc),
        k_folds=doc.get("k_folds", 5),
        fold_seed=doc.get("fold_seed", 0),
        out_dir=doc.get("out_dir", "out"),
        n_jobs=doc.get("n_jobs", 1),
    )


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class ExperimentReport:
    """Everything a run produced; to_dict() is the canonical report.json body."""

    config: dict
    seed: int
    best_subset: tuple[int, ...]
    feature_names: tuple[str, ...]
    process_features_selected: tuple[str, ...]
    objective: ObjectiveValue
    rmse_std_across_folds: float
    trace: tuple[TraceRecord, ...]
    fold_rows: tuple[tuple[int, int, float, float], ...]  # (fold, row, actual, predicted)
    wall_clock_s: float
    timestamp: str
    n_jobs: int = 1
    tool_version: str = _tool_version

    def to_dict(self) -> dict:
        cv = self.objective.cv
        return {
            "config": self.config,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "best": {
                "subset_indices": list(self.best_subset),
                "feature_names": list(self.feature_names),
                "n_features": self.objective.n_features,
                "process_features_selected": list(self.process_features_selected),
                "cost": self.objective.cost,
                "cv": {
                    "mean_rmse": cv.mean_rmse,
                    "mean_r2": cv.mean_r2,
                    "pooled_error_std": cv.error_std,
                    "rmse_std_across_folds": self.rmse_std_across_folds,
                    "per_fold": [
                        {
                            "fold": i,
                            "rmse": fm.rmse,
                            "r2": fm.r2,
                            "n_test": int(fm.residuals.size),
                        }
                        for i, fm in enumerate(cv.per_fold)
                    ],
                },
            },
            "trace": [
                {
                    "iteration": r.iteration,
                    "best_cost": r.best_cost,
                    "best_subset": list(r.best_subset),
                    "evaluations": r.evaluations,
                }
                for r in self.trace
            ],
            "evaluations_total": self.trace[-1].evaluations if self.trace else 0,
        }


def prepare_dataset(cfg: ExperimentConfig) -> Dataset:
    """Load the configured CSV and apply the wavenumber range filter."""
    ds = load_dataset(cfg.dataset_path, cfg.target_column)
    return select_wavenumber_range(ds, cfg.wavenumber_lo, cfg.wavenumber_hi)


def _fold_rows(folds: FoldAssignment, y: np.ndarray, objective: ObjectiveValue):
    rows = []
    for f, fm in enumerate(objective.cv.per_fold):
        test = folds.test_rows(f)
        actual = y[test]
        predicted = actual + fm.residuals
        for row, a, pr in zip(test, actual, predicted):
            rows.append((f, int(row), float(a), float(pr)))
    return tuple(rows)


def _build_report(cfg, ds, folds, subset, objective, trace, wall_clock):
    names = tuple(ds.descriptors[i].name for i in subset.indices)
    process = tuple(
        ds.descriptors[i].name
        for i in subset.indices
        if ds.descriptors[i].kind is FeatureKind.PROCESS
    )
    per_fold_rmse = [fm.rmse for fm in objective.cv.per_fold]
    return ExperimentReport(
        config=config_to_dict(cfg),
        seed=cfg.abc.seed,
        best_subset=subset.indices,
        feature_names=names,
        process_features_selected=process,
        objective=objective,
        rmse_std_across_folds=float(np.std(per_fold_rmse, ddof=1)),
        trace=tuple(trace),
        fold_rows=_fold_rows(folds, ds.y, objective),
        wall_clock_s=wall_clock,
        timestamp=datetime.now(timezone.utc).isoformat(),
        n_jobs=cfg.n_jobs,
    )


def run_experiment(cfg: ExperimentConfig, progress=None) -> ExperimentReport:
    """Load, filter, split, search, and summarize; see emit_report for files."""
    started = time.perf_counter()
    ds = prepare_dataset(cfg)
    folds = kfold_split(ds.n_samples, cfg.k_folds, cfg.fold_seed)
    log.info(
        "run: %d samples, %d features, %d folds, regressor=%s",
        ds.n_samples,
        ds.n_features,
        folds.k,
        cfg.regressor.label,
    )
    best, trace = abc_run(cfg.abc, ds, cfg.regressor, folds, progress=progress, n_jobs=cfg.n_jobs)
    return _build_report(
        cfg, ds, folds, best.subset, best.objective, trace, time.perf_counter() - started
    )


def resolve_features(ds: Dataset, tokens) -> FeatureSubset:
    """Map feature names (or bare wavenumber values) to column indices."""
    by_name = {d.name: i for i, d in enumerate(ds.descriptors)}
    indices = []
    for token in tokens:
        token = str(token).strip()
        if token in by_name:
            indices.append(by_name[token])
            continue
        try:
            value = float(token)
        except ValueError:
            raise ValueError(f"unknown feature {token!r}") from None
        matches = [
            i
            for i, d in enumerate(ds.descriptors)
            if d.kind is FeatureKind.NIR_WAVENUMBER and d.wavenumber == value
        ]
        if not matches:
            raise ValueError(f"no NIR feature at wavenumber {token}")
        indices.extend(matches)
    return FeatureSubset.of(indices, ds.n_features)


def fixed_subset_experiment(cfg: ExperimentConfig, feature_tokens) -> ExperimentReport:
    """Cross-validated fit of one named subset, no search (the `fit` command)."""
    started = time.perf_counter()
    ds = prepare_dataset(cfg)
    folds = kfold_split(ds.n_samples, cfg.k_folds, cfg.fold_seed)
    subset = resolve_features(ds, feature_tokens)
    objective = cv_objective(subset, ds, cfg.regressor, folds, cfg.abc.feature_penalty)
    return _build_report(cfg, ds, folds, subset, objective, (), time.perf_counter() - started)


# ---------------------------------------------------------------------------
# sweep


@dataclass(frozen=True)
class SweepCell:
    case: int
    regressor_label: str
    family: str  # "anfis" | "ann"
    k: int
    mean_rmse: float | None
    cost: float | None
    error: str | None = None


@dataclass(frozen=True)
class SweepReport:
    config: dict
    cells: tuple[SweepCell, ...]

    def observations(self) -> dict:
        """Family comparison recorded for the record, not asserted anywhere."""
        by_family: dict[str, dict[int, float]] = {"anfis": {}, "ann": {}}
        for cell in self.cells:
            if cell.mean_rmse is None:
                continue
            best = by_family[cell.family].get(cell.k)
            if best is None or cell.mean_rmse < best:
                by_family[cell.family][cell.k] = cell.mean_rmse
        shared = sorted(set(by_family["anfis"]) & set(by_family["ann"]))
        comparison = {
            str(k): {"anfis_best_rmse": by_family["anfis"][k], "ann_best_rmse": by_family["ann"][k]}
            for k in shared
        }
        lower_everywhere = bool(shared) and all(
            by_family["anfis"][k] < by_family["ann"][k] for k in shared
        )
        return {
            "per_k_family_best": comparison,
            "anfis_below_ann_at_every_k": lower_everywhere,
            "note": "observational comparison of best-per-family mean CV RMSE by subset size",
        }


def _case_regressor(case: int, base: ExperimentConfig, overrides: dict | None):
    spec = dict(STRUCTURE_CASES[case])
    kind = spec.pop("kind")
    overrides = dict(overrides or {}).get(kind, {}) if overrides else {}
    if kind == "anfis":
        base_cfg = (
            base.regressor.config
            if isinstance(base.regressor, AnfisRegressor)
            else AnfisTrainConfig(n_rules=spec["n_rules"])
        )
        # the case registry owns the structure; overrides may only touch training knobs
        cfg = replace(base_cfg, **{**overrides, **spec})
        return AnfisRegressor(cfg), "anfis"
    base_cfg = base.regressor.config if isinstance(base.regressor, AnnRegressor) else AnnTrainConfig()
    cfg = replace(base_cfg, **overrides)
    return AnnRegressor(spec["hidden"], cfg), "ann"


def cardinality_sweep(
    cfg: ExperimentConfig,
    k_range,
    cases,
    regressor_overrides: dict | None = None,
    progress=None,
) -> SweepReport:
    """One fixed-k search per (case, k); failures are recorded, not raised."""
    ds = prepare_dataset(cfg)
    folds = kfold_split(ds.n_samples, cfg.k_folds, cfg.fold_seed)
    k_range = list(k_range)
    if any(k < 1 or k > ds.n_features for k in k_range):
        raise ValueError(f"subset sizes must be within [1, {ds.n_features}]")
    cells = []
    for case in cases:
        regressor, family = _case_regressor(case, cfg, regressor_overrides)
        for k in k_range:
            abc_cfg = replace(cfg.abc, cardinality=CardinalityMode.fixed(k))
            try:
                best, _ = abc_run(abc_cfg, ds, regressor, folds, n_jobs=cfg.n_jobs)
                cell = SweepCell(
                    case, regressor.label, family, k, best.objective.cv.mean_rmse, best.cost
                )
            except Exception as exc:  # record and continue with the remaining cells
                log.warning("sweep cell (case=%d, k=%d) failed: %s", case, k, exc)
                cell = SweepCell(case, regressor.label, family, k, None, None, error=str(exc))
            cells.append(cell)
            if progress is not None:
                progress(cell)
    return SweepReport(config=config_to_dict(cfg), cells=tuple(cells))


# ---------------------------------------------------------------------------
# exhaustive oracle


def brute_force_oracle(
    dataset: Dataset,
    k: int,
    regressor,
    folds: FoldAssignment,
    feature_penalty: float = 0.0,
    cap: int = 100_000,
) -> list[tuple[FeatureSubset, ObjectiveValue]]:
    """Evaluate every k-subset with the exact search objective; rank by cost."""
    p = dataset.n_features
    count = math.comb(p, k)
    if count > cap:
        raise ValueError(
            f"C({p},{k}) = {count} exceeds cap {cap}; shrink the feature set or k, or raise cap"
        )
    ranked = []
    for combo in itertools.combinations(range(p), k):
        subset = FeatureSubset(combo)
        ranked.append((subset, cv_objective(subset, dataset, regressor, folds, feature_penalty)))
    ranked.sort(key=lambda pair: pair[1].cost)
    return ranked


# ---------------------------------------------------------------------------
# emission


def _canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


def _plot_r2_per_fold(report: ExperimentReport, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "beewrap"
    r2s = [fm.r2 for fm in report.objective.cv.per_fold]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(range(len(r2s)), r2s, color="#4878a8")
    ax.set_xlabel("fold")
    ax.set_ylabel("R$^2$")
    ax.set_xticks(range(len(r2s)))
    ax.set_ylim(min(0.0, min(r2s)), 1.0)
    ax.set_title("Held-out R$^2$ per fold")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _plot_sweep(sweep: SweepReport, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "beewrap"
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.4), sharey=True)
    for ax, family in zip(axes, ("anfis", "ann")):
        drew = False
        for case in sorted({c.case for c in sweep.cells if c.family == family}):
            pts = sorted(
                (c.k, c.mean_rmse)
                for c in sweep.cells
                if c.case == case and c.mean_rmse is not None
            )
            if not pts:
                continue
            label = next(c.regressor_label for c in sweep.cells if c.case == case)
            ax.plot([k for k, _ in pts], [v for _, v in pts], marker="o", label=label)
            drew = True
        ax.set_xlabel("number of features")
        ax.set_title(family)
        if drew:
            ax.legend(fontsize=8)
    axes[0].set_ylabel("mean CV RMSE (Da)")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def emit_report(report: ExperimentReport, out_dir) -> list[Path]:
    """Write report.json, run_meta.json, folds.csv (one row per fold),
    predictions.csv (one row per sample), trace.csv, and r2_per_fold.svg.

    Overwrites idempotently; everything except run_meta.json is byte-stable
    for identical reports.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []

    report_path = out / "report.json"
    _write(report_path, _canonical_json(report.to_dict()))
    paths.append(report_path)

    meta_path = out / "run_meta.json"
    _write(
        meta_path,
        _canonical_json(
            {
                "timestamp": report.timestamp,
                "wall_clock_s": report.wall_clock_s,
                "tool_version": report.tool_version,
                "out_dir": str(out),
                "n_jobs": report.n_jobs,
            }
        ),
    )
    paths.append(meta_path)

    folds_path = out / "folds.csv"
    with folds_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["fold", "n_test", "rmse", "r2"])
        for f, fm in enumerate(report.objective.cv.per_fold):
            writer.writerow([f, fm.residuals.size, repr(fm.rmse), repr(fm.r2)])
    paths.append(folds_path)

    predictions_path = out / "predictions.csv"
    with predictions_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["fold", "row", "actual", "predicted"])
        for fold, row, actual, predicted in report.fold_rows:
            writer.writerow([fold, row, repr(actual), repr(predicted)])
    paths.append(predictions_path)

    trace_path = out / "trace.csv"
    with trace_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "best_cost", "evaluations", "best_subset"])
        for r in report.trace:
            writer.writerow([r.iteration, repr(r.best_cost), r.evaluations, ";".join(map(str, r.best_subset))])
    paths.append(trace_path)

    svg_path = out / "r2_per_fold.svg"
    _plot_r2_per_fold(report, svg_path)
    paths.append(svg_path)
    return paths


def emit_sweep(sweep: SweepReport, out_dir) -> list[Path]:
    """Write sweep.csv (long format), sweep.json, and rmse_vs_k.svg."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []

    csv_path = out / "sweep.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["case", "regressor", "family", "k", "mean_rmse", "cost", "error"])
        for c in sweep.cells:
            writer.writerow(
                [
                    c.case,
                    c.regressor_label,
                    c.family,
                    c.k,
                    "" if c.mean_rmse is None else repr(c.mean_rmse),
                    "" if c.cost is None else repr(c.cost),
                    c.error or "",
                ]
            )
    paths.append(csv_path)

    json_path = out / "sweep.json"
    _write(
        json_path,
        _canonical_json(
            {
                "config": sweep.config,
                "cells": [
                    {
                        "case": c.case,
                        "regressor": c.regressor_label,
                        "family": c.family,
                        "k": c.k,
                        "mean_rmse": c.mean_rmse,
                        "cost": c.cost,
                        "error": c.error,
                    }
                    for c in sweep.cells
                ],
                "observations": sweep.observations(),
            }
        ),
    )
    paths.append(json_path)

    svg_path = out / "rmse_vs_k.svg"
    _plot_sweep(sweep, svg_path)
    paths.append(svg_path)
    return paths


# ---------------------------------------------------------------------------
# audit


def audit_report(report_dir, atol: float = 1e-9) -> list[str]:
    """Recompute every metric in report.json and folds.csv from the persisted
    per-sample predictions; list any discrepancies (empty means consistent)."""
    out = Path(report_dir)
    with (out / "report.json").open(encoding="utf-8") as fh:
        doc = json.load(fh)

    by_fold: dict[int, list[tuple[float, float]]] = {}
    with (out / "predictions.csv").open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            by_fold.setdefault(int(row["fold"]), []).append(
                (float(row["actual"]), float(row["predicted"]))
            )
    with (out / "folds.csv").open(newline="", encoding="utf-8") as fh:
        fold_rows = list(csv.DictReader(fh))

    from beewrap.metrics import fold_metrics as _fold_metrics, summarize_folds as _summarize

    problems = []
    expected = doc["best"]["cv"]
    per_fold = []
    for f in sorted(by_fold):
        actual = np.array([a for a, _ in by_fold[f]])
        predicted = np.array([p for _, p in by_fold[f]])
        per_fold.append(_fold_metrics(actual, predicted))
    recomputed = _summarize(per_fold)

    def check(name, got, want):
        if not math.isclose(got, want, rel_tol=0.0, abs_tol=atol):
            problems.append(f"{name}: report has {want!r}, recomputed {got!r}")

    check("mean_rmse", recomputed.mean_rmse, expected["mean_rmse"])
    check("mean_r2", recomputed.mean_r2, expected["mean_r2"])
    check("pooled_error_std", recomputed.error_std, expected["pooled_error_std"])
    if len(fold_rows) != len(recomputed.per_fold):
        problems.append(f"folds.csv has {len(fold_rows)} rows, expected {len(recomputed.per_fold)}")
    for i, fm in enumerate(recomputed.per_fold):
        check(f"fold[{i}].rmse", fm.rmse, expected["per_fold"][i]["rmse"])
        check(f"fold[{i}].r2", fm.r2, expected["per_fold"][i]["r2"])
        if i < len(fold_rows):
            check(f"folds.csv[{i}].rmse", fm.rmse, float(fold_rows[i]["rmse"]))
            check(f"folds.csv[{i}].r2", fm.r2, float(fold_rows[i]["r2"]))
    rmse_std = float(np.std([fm.rmse for fm in recomputed.per_fold], ddof=1))
    check("rmse_std_across_folds", rmse_std, expected["rmse_std_across_folds"])

    penalty = doc["config"]["abc"]["feature_penalty"]
    cost = recomputed.mean_rmse + penalty * doc["best"]["n_features"]
    check("cost", cost, doc["best"]["cost"])
    return problems

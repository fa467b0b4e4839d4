"""Command-line entry point: run, sweep, fit, bruteforce, audit.

Set BEEWRAP_LOG=debug|info|warning|error to control stderr verbosity.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from beewrap import __version__
from beewrap.dataset import kfold_split
from beewrap.experiment import (
    STRUCTURE_CASES,
    audit_report,
    brute_force_oracle,
    cardinality_sweep,
    emit_report,
    emit_sweep,
    fixed_subset_experiment,
    load_config,
    run_experiment,
    prepare_dataset,
)

log = logging.getLogger("beewrap")


def _setup_logging() -> None:
    level_name = os.environ.get("BEEWRAP_LOG", "warning").upper()
    level = getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")


def _parse_k_range(text: str) -> list[int]:
    """Accept '1..8', '4', or '1,2,5'."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in text.split(",") if tok]


def _parse_cases(text: str) -> list[int]:
    cases = [int(tok) for tok in text.split(",") if tok]
    unknown = [c for c in cases if c not in STRUCTURE_CASES]
    if unknown:
        raise ValueError(f"unknown structure cases {unknown}; known: {sorted(STRUCTURE_CASES)}")
    return cases


def _load_config_with_overrides(args):
    cfg = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, abc=replace(cfg.abc, seed=args.seed))
    if getattr(args, "out", None) is not None:
        cfg = replace(cfg, out_dir=args.out)
    if getattr(args, "jobs", None) is not None:
        cfg = replace(cfg, n_jobs=args.jobs)
    return cfg


def _progress_printer(record):
    log.info(
        "iteration %d: best cost %.4f (%d evaluations)",
        record.iteration,
        record.best_cost,
        record.evaluations,
    )


def cmd_run(args) -> int:
    cfg = _load_config_with_overrides(args)
    report = run_experiment(cfg, progress=_progress_printer)
    paths = emit_report(report, cfg.out_dir)
    cv = report.objective.cv
    print(f"best subset: {list(report.feature_names)}")
    print(f"mean CV RMSE: {cv.mean_rmse:.2f} Da   mean R2: {cv.mean_r2:.4f}   cost: {report.objective.cost:.2f}")
    print(f"wrote {len(paths)} files to {cfg.out_dir}")
    return 0


def cmd_fit(args) -> int:
    cfg = _load_config_with_overrides(args)
    tokens = [tok for tok in args.features.split(",") if tok]
    report = fixed_subset_experiment(cfg, tokens)
    paths = emit_report(report, cfg.out_dir)
    cv = report.objective.cv
    print(f"subset: {list(report.feature_names)}")
    print(f"mean CV RMSE: {cv.mean_rmse:.2f} Da   mean R2: {cv.mean_r2:.4f}")
    print(f"wrote {len(paths)} files to {cfg.out_dir}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _load_config_with_overrides(args)
    k_range = _parse_k_range(args.k)
    cases = _parse_cases(args.cases)
    sweep = cardinality_sweep(
        cfg,
        k_range,
        cases,
        progress=lambda cell: log.info(
            "case %d k=%d -> %s", cell.case, cell.k, cell.error or f"{cell.mean_rmse:.2f} Da"
        ),
    )
    paths = emit_sweep(sweep, cfg.out_dir)
    failures = [c for c in sweep.cells if c.error]
    print(f"swept {len(sweep.cells)} cells ({len(failures)} failed); wrote {len(paths)} files to {cfg.out_dir}")
    return 0


def cmd_bruteforce(args) -> int:
    cfg = _load_config_with_overrides(args)
    ds = prepare_dataset(cfg)
    folds = kfold_split(ds.n_samples, cfg.k_folds, cfg.fold_seed)
    ranked = brute_force_oracle(
        ds, args.k, cfg.regressor, folds, cfg.abc.feature_penalty, cap=args.cap
    )
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"bruteforce_k{args.k}.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "subset", "feature_names", "mean_rmse", "cost"])
        for rank, (subset, value) in enumerate(ranked, start=1):
            names = ";".join(ds.descriptors[i].name for i in subset.indices)
            writer.writerow(
                [rank, ";".join(map(str, subset.indices)), names, repr(value.cv.mean_rmse), repr(value.cost)]
            )
    top_subset, top_value = ranked[0]
    top_names = [ds.descriptors[i].name for i in top_subset.indices]
    print(f"evaluated {len(ranked)} subsets; best {top_names} at {top_value.cv.mean_rmse:.4f} Da")
    print(f"wrote {path}")
    return 0


def cmd_audit(args) -> int:
    problems = audit_report(args.report)
    if problems:
        for p in problems:
            print(f"MISMATCH {p}", file=sys.stderr)
        return 1
    print("audit ok: report.json matches metrics recomputed from predictions.csv")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beewrap",
        description="Bee-colony wrapper feature selection over cross-validated regressors.",
    )
    parser.add_argument("--version", action="version", version=f"beewrap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="full feature-selection experiment from a config file")
    run.add_argument("--config", required=True)
    run.add_argument("--seed", type=int, help="override the search seed")
    run.add_argument("--out", help="override the output directory")
    run.add_argument("--jobs", type=int, help="objective evaluation threads")
    run.set_defaults(func=cmd_run)

    sweep = sub.add_parser("sweep", help="fixed-size searches over structure cases 1..8")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--k", required=True, help="subset sizes, e.g. 1..8 or 2,4,6")
    sweep.add_argument("--cases", required=True, help="comma-separated case ids, e.g. 1,2,3,4")
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--out")
    sweep.add_argument("--jobs", type=int)
    sweep.set_defaults(func=cmd_sweep)

    fit = sub.add_parser("fit", help="cross-validate one fixed feature subset (no search)")
    fit.add_argument("--config", required=True)
    fit.add_argument("--features", required=True, help="comma-separated names, e.g. 6158,melt_temperature")
    fit.add_argument("--out")
    fit.set_defaults(func=cmd_fit)

    brute = sub.add_parser("bruteforce", help="exhaustively rank every k-subset")
    brute.add_argument("--config", required=True)
    brute.add_argument("--k", type=int, required=True)
    brute.add_argument("--cap", type=int, default=100_000, help="max subsets to enumerate")
    brute.add_argument("--out")
    brute.set_defaults(func=cmd_bruteforce)

    audit = sub.add_parser("audit", help="recompute a report's metrics from its folds.csv")
    audit.add_argument("--report", required=True, help="report directory")
    audit.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 1
    except Exception as exc:
        print(f"beewrap: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        log.debug("traceback", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())

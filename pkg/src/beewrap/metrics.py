"""Regression error metrics and cross-validation summaries (units: Da)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "rmse",
    "r2",
    "pooled_error_std",
    "FoldMetrics",
    "CvSummary",
    "fold_metrics",
    "summarize_folds",
]


def _paired(actual, predicted):
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.shape != p.shape or a.ndim != 1:
        raise ValueError(f"length mismatch: actual {a.shape}, predicted {p.shape}")
    if a.size == 0:
        raise ValueError("empty vectors")
    return a, p


def rmse(actual, predicted) -> float:
    """Root mean square error, sqrt(mean((predicted - actual)^2))."""
    a, p = _paired(actual, predicted)
    return float(np.sqrt(np.mean((p - a) ** 2)))


def r2(actual, predicted) -> float:
    """Coefficient of determination, 1 - SS_res / SS_tot."""
    a, p = _paired(actual, predicted)
    if a.size < 2:
        raise ValueError("r2 needs at least 2 samples")
    ss_tot = float(np.sum((a - a.mean()) ** 2))
    if ss_tot == 0.0:
        raise ValueError("r2 undefined for constant actual values")
    ss_res = float(np.sum((p - a) ** 2))
    return 1.0 - ss_res / ss_tot


@dataclass(frozen=True)
class FoldMetrics:
    """Test-fold error summary; residuals are predicted - actual."""

    rmse: float
    r2: float
    residuals: np.ndarray

    def __post_init__(self):
        res = np.array(self.residuals, dtype=float)
        res.setflags(write=False)
        object.__setattr__(self, "residuals", res)
        if self.rmse < 0:
            raise ValueError("rmse must be nonnegative")
        if self.r2 > 1.0:
            raise ValueError("r2 cannot exceed 1")


@dataclass(frozen=True)
class CvSummary:
    """Aggregate over folds: mean RMSE/R2 plus pooled residual spread."""

    per_fold: tuple[FoldMetrics, ...]
    mean_rmse: float
    mean_r2: float
    error_std: float  # sample std of residuals pooled across folds


def fold_metrics(actual, predicted) -> FoldMetrics:
    a, p = _paired(actual, predicted)
    return FoldMetrics(rmse=rmse(a, p), r2=r2(a, p), residuals=p - a)


def pooled_error_std(per_fold) -> float:
    """Sample standard deviation of all residuals concatenated across folds."""
    per_fold = list(per_fold)
    if not per_fold:
        raise ValueError("no folds")
    for i, fm in enumerate(per_fold):
        if fm.residuals.size == 0:
            raise ValueError(f"fold {i} has no residuals")
    pooled = np.concatenate([fm.residuals for fm in per_fold])
    if pooled.size < 2:
        raise ValueError("need at least 2 pooled residuals")
    return float(np.std(pooled, ddof=1))


def summarize_folds(per_fold) -> CvSummary:
    per_fold = tuple(per_fold)
    if not per_fold:
        raise ValueError("no folds")
    return CvSummary(
        per_fold=per_fold,
        mean_rmse=float(np.mean([fm.rmse for fm in per_fold])),
        mean_r2=float(np.mean([fm.r2 for fm in per_fold])),
        error_std=pooled_error_std(per_fold),
    )

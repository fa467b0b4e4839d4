"""Uniform fit() adapters so the subset search can drive either regressor."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from beewrap.anfis import AnfisModel, AnfisTrainConfig, anfis_train
from beewrap.ann import AnnModel, AnnTrainConfig, ann_train

__all__ = ["AnfisRegressor", "AnnRegressor"]


@dataclass(frozen=True)
class AnfisRegressor:
    """Fuzzy-rule regressor spec: structure lives in the train config."""

    config: AnfisTrainConfig

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def label(self) -> str:
        return f"anfis_rules{self.config.n_rules}_{self.config.consequent}"

    def fit(self, X, y, seed: int) -> AnfisModel:
        return anfis_train(X, y, replace(self.config, seed=seed))


@dataclass(frozen=True)
class AnnRegressor:
    """Neural regressor spec: hidden width plus training knobs."""

    hidden: int
    config: AnnTrainConfig = field(default_factory=AnnTrainConfig)

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def label(self) -> str:
        return f"ann_h{self.hidden}"

    def fit(self, X, y, seed: int) -> AnnModel:
        return ann_train(X, y, self.hidden, replace(self.config, seed=seed))

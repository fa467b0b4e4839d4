"""Wrapper feature selection: a bee-colony search over feature subsets scored by
cross-validated neuro-fuzzy or neural regression error."""

__version__ = "0.1.0"

from beewrap.dataset import (
    Dataset,
    DatasetError,
    FeatureDescriptor,
    FeatureKind,
    FoldAssignment,
    Scaler,
    kfold_split,
    load_dataset,
    save_dataset,
    select_wavenumber_range,
    standardize,
)
from beewrap.metrics import CvSummary, FoldMetrics, fold_metrics, pooled_error_std, r2, rmse, summarize_folds
from beewrap.anfis import (
    AnfisModel,
    AnfisTrainConfig,
    ClusteringError,
    ConsequentParams,
    FuzzyRule,
    GaussianMf,
    anfis_deserialize,
    anfis_fit_consequents,
    anfis_predict,
    anfis_refine_premise,
    anfis_serialize,
    anfis_train,
    fcm_cluster,
)
from beewrap.ann import (
    AnnModel,
    AnnTrainConfig,
    AnnTrainingError,
    ann_deserialize,
    ann_gradient,
    ann_init,
    ann_predict,
    ann_serialize,
    ann_train,
)
from beewrap.colony import (
    AbcConfig,
    CardinalityMode,
    FeatureSubset,
    FoodSource,
    ObjectiveValue,
    abc_run,
    cv_objective,
    init_population,
    neighbor,
    selection_probabilities,
)
from beewrap.regressors import AnfisRegressor, AnnRegressor
from beewrap.experiment import (
    ExperimentConfig,
    ExperimentReport,
    SweepReport,
    audit_report,
    brute_force_oracle,
    cardinality_sweep,
    emit_report,
    emit_sweep,
    run_experiment,
)

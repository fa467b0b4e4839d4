import numpy as np
import pytest

from beewrap.anfis import AnfisTrainConfig
from beewrap.colony import AbcConfig, CardinalityMode
from beewrap.dataset import save_dataset
from beewrap.experiment import ExperimentConfig
from beewrap.regressors import AnfisRegressor
from beewrap.synthetic import planted_linear_dataset


def write_csv(path, header, rows):
    lines = [",".join(header)] + [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def planted_ds():
    return planted_linear_dataset(seed=123)


@pytest.fixture
def fast_anfis_regressor():
    # one linear rule, no premise refinement: effectively a ridge-free affine fit
    return AnfisRegressor(
        AnfisTrainConfig(n_rules=1, consequent="linear", ridge=0.0, premise_epochs=0, seed=0)
    )


@pytest.fixture
def small_experiment_config(tmp_path):
    """A fast end-to-end config over a tiny planted dataset."""
    csv_path = tmp_path / "data.csv"
    save_dataset(planted_linear_dataset(n=40, p=12, seed=5), csv_path, target_column="Mn")
    regressor = AnfisRegressor(
        AnfisTrainConfig(n_rules=2, consequent="linear", premise_epochs=3, seed=0)
    )
    return ExperimentConfig(
        dataset_path=str(csv_path),
        regressor=regressor,
        abc=AbcConfig(
            population=8,
            iterations=4,
            feature_penalty=10.0,
            cardinality=CardinalityMode.fixed(2),
            seed=11,
        ),
        wavenumber_lo=0.0,
        wavenumber_hi=1e6,
        k_folds=4,
        fold_seed=2,
        out_dir=str(tmp_path / "out"),
        n_jobs=1,
    )


def assert_close(got, want, tol=1e-9):
    assert abs(got - want) <= tol, f"got {got!r}, wanted {want!r} within {tol}"


def max_rel_gradient_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """Max componentwise difference scaled by the larger gradient magnitude."""
    scale = max(np.abs(analytic).max(), np.abs(numeric).max(), 1e-300)
    return float(np.abs(analytic - numeric).max() / scale)

import json

import pytest

from beewrap.cli import _parse_cases, _parse_k_range, main
from beewrap.dataset import save_dataset
from beewrap.synthetic import planted_linear_dataset


@pytest.fixture
def workspace(tmp_path):
    data = tmp_path / "data.csv"
    save_dataset(planted_linear_dataset(n=40, p=10, seed=5), data, target_column="Mn")
    config = tmp_path / "config.json"
    config.write_text(
        json.dumps(
            {
                "dataset": str(data),
                "target_column": "Mn",
                "wavenumber_range": [0, 1e6],
                "regressor": {
                    "kind": "anfis",
                    "n_rules": 2,
                    "consequent": "linear",
                    "premise_epochs": 0,
                    "seed": 0,
                },
                "abc": {
                    "population": 5,
                    "iterations": 3,
                    "feature_penalty": 10.0,
                    "cardinality": {"mode": "fixed", "k": 2},
                    "seed": 7,
                },
                "k_folds": 4,
                "fold_seed": 1,
                "out_dir": str(tmp_path / "out"),
            }
        )
    )
    return tmp_path, config


def test_parse_helpers():
    assert _parse_k_range("1..4") == [1, 2, 3, 4]
    assert _parse_k_range("3") == [3]
    assert _parse_k_range("1,5,7") == [1, 5, 7]
    assert _parse_cases("1,2") == [1, 2]
    with pytest.raises(ValueError, match="unknown structure cases"):
        _parse_cases("1,99")


def test_run_then_audit(workspace, capsys):
    tmp_path, config = workspace
    assert main(["run", "--config", str(config)]) == 0
    out = capsys.readouterr().out
    assert "mean CV RMSE" in out
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["seed"] == 7
    assert main(["audit", "--report", str(tmp_path / "out")]) == 0
    assert "audit ok" in capsys.readouterr().out


def test_run_seed_and_out_flags_win(workspace):
    tmp_path, config = workspace
    assert main(["run", "--config", str(config), "--seed", "9", "--out", str(tmp_path / "alt")]) == 0
    report = json.loads((tmp_path / "alt" / "report.json").read_text())
    assert report["seed"] == 9
    assert report["config"]["abc"]["seed"] == 9


def test_fit_command(workspace, capsys):
    tmp_path, config = workspace
    code = main(
        ["fit", "--config", str(config), "--features", "x01,x07", "--out", str(tmp_path / "fit")]
    )
    assert code == 0
    report = json.loads((tmp_path / "fit" / "report.json").read_text())
    assert report["best"]["feature_names"] == ["x01", "x07"]
    assert report["trace"] == []


def test_bruteforce_command(workspace, capsys):
    tmp_path, config = workspace
    code = main(["bruteforce", "--config", str(config), "--k", "1", "--out", str(tmp_path / "bf")])
    assert code == 0
    lines = (tmp_path / "bf" / "bruteforce_k1.csv").read_text().strip().splitlines()
    assert len(lines) == 1 + 10  # header + one row per single-feature subset


def test_sweep_command(workspace):
    tmp_path, config = workspace
    code = main(
        ["sweep", "--config", str(config), "--k", "1..2", "--cases", "1,2",
         "--out", str(tmp_path / "sw")]
    )
    assert code == 0
    for name in ("sweep.csv", "sweep.json", "rmse_vs_k.svg"):
        assert (tmp_path / "sw" / name).exists()


def test_cli_error_is_structured(workspace, capsys):
    _, config = workspace
    code = main(["fit", "--config", str(config), "--features", "bogus"])
    assert code == 1
    err = capsys.readouterr().err
    assert err.startswith("beewrap: error: ValueError:")


def test_cli_missing_config(tmp_path, capsys):
    code = main(["run", "--config", str(tmp_path / "missing.json")])
    assert code == 1
    assert "error" in capsys.readouterr().err

import glob
import json
import os

import pytest

import config
from core.errors import ConfigError
from core.experiments import ARDatasetSpec, TrainConfig
from core.run_config import (LossRunConfig, TrainRunConfig, VerifyRunConfig, WindowRunConfig, as_dict,
                             load_run_config, parse_run_config)

RECORDS = {"uncertainty_principle": LossRunConfig, "loss_bounds": LossRunConfig, "window": WindowRunConfig,
           "compare_init": TrainRunConfig, "k_init_robustness": TrainRunConfig, "train_single": TrainRunConfig,
           "verify": VerifyRunConfig}


def write_config(tmp_path, data) -> str:
    path = tmp_path / "run.json"
    path.write_text(json.dumps(data))
    return str(path)


def test_defaults_without_a_file():
    assert load_run_config(LossRunConfig) == LossRunConfig()
    assert load_run_config(TrainRunConfig).train == TrainConfig()


@pytest.mark.parametrize("name", sorted(RECORDS))
def test_shipped_configs_parse(name):
    record = load_run_config(RECORDS[name], os.path.join(config.CONFIGS_DIR, f"{name}.json"))
    assert isinstance(record, RECORDS[name])


def test_every_shipped_config_is_covered():
    shipped = {os.path.basename(p)[:-5] for p in glob.glob(os.path.join(config.CONFIGS_DIR, "*.json"))}
    assert shipped - {"verify_report.schema"} == set(RECORDS)


def test_nested_records_are_built(tmp_path):
    path = write_config(tmp_path, {"mode": "compare", "train": {"S": 9, "epochs": 2},
                                   "data": {"N": 40, "t_star": 10, "rho": 0.5, "num_samples": 8}})
    record = load_run_config(TrainRunConfig, path)
    assert record.train == TrainConfig(S=9, epochs=2)
    assert record.data == ARDatasetSpec(40, 10, 0.5, 8)


@pytest.mark.parametrize("data", [{"S": [51], "typo": 1},
                                  {"S": []},
                                  {"rho": [1.0]},
                                  {"K": 500}])
def test_invalid_loss_configs(data):
    with pytest.raises(ConfigError):
        parse_run_config(LossRunConfig, data)


@pytest.mark.parametrize("data", [{"mode": "sweep"},
                                  {"train": {"S": 4}},
                                  {"train": {"learning_rate": 0.1, "momentum": 0.9}},
                                  {"data": {"N": 10}},
                                  {"rhos": [0.5, 1.0]}])
def test_invalid_train_configs(data):
    with pytest.raises(ConfigError):
        parse_run_config(TrainRunConfig, data)


def test_window_range_must_be_increasing():
    with pytest.raises(ConfigError):
        parse_run_config(WindowRunConfig, {"omega_min": 10.0, "omega_max": -10.0})
    assert parse_run_config(WindowRunConfig, {"omegas": [1.0], "points": 0}).omegas == [1.0]


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_run_config(VerifyRunConfig, str(tmp_path / "absent.json"))


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{seed: 1")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_run_config(VerifyRunConfig, str(path))


def test_top_level_must_be_an_object(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(VerifyRunConfig, write_config(tmp_path, [1, 2]))


def test_as_dict_round_trips_through_json():
    record = TrainRunConfig()
    data = json.loads(json.dumps(as_dict(record)))
    assert data["train"]["S"] == 33
    assert parse_run_config(TrainRunConfig, data) == record


def test_k_init_grid_brackets_the_target_shift():
    run = load_run_config(TrainRunConfig, os.path.join(config.CONFIGS_DIR, "k_init_robustness.json"))
    assert run.data.K_star in run.k_inits
    assert min(run.k_inits) < run.data.K_star < max(run.k_inits)
    assert TrainRunConfig().k_inits == run.k_inits

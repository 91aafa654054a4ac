import json

import pytest

from qrac_entropy.config import (
    CertifierConfig,
    SeesawConfig,
    load_certifier_config,
    load_seesaw_config,
    read_config_file,
)
from qrac_entropy.exceptions import ConfigurationError


def test_defaults():
    seesaw = SeesawConfig()
    assert (seesaw.starts, seesaw.max_sweeps, seesaw.convergence_tol, seesaw.seed) == (
        100,
        500,
        1e-12,
        0,
    )
    certifier = CertifierConfig()
    assert certifier.starts == 200
    assert certifier.constraint_tol == 1e-6
    assert certifier.penalty_schedule == (1e1, 1e2, 1e3, 1e4, 1e5)
    assert certifier.exploit_symmetry is True


@pytest.mark.parametrize(
    "kwargs",
    [
        {"starts": 0},
        {"starts": 2.0},
        {"max_sweeps": -1},
        {"convergence_tol": 0.0},
        {"convergence_tol": float("inf")},
        {"seed": -1},
        {"seed": 2**64},
        {"seed": True},
    ],
)
def test_invalid_seesaw_config(kwargs):
    with pytest.raises(ConfigurationError):
        SeesawConfig(**kwargs)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"constraint_tol": 1e-5},
        {"penalty_schedule": ()},
        {"penalty_schedule": (10.0, 10.0)},
        {"penalty_schedule": (100.0, 10.0)},
        {"penalty_schedule": (-1.0, 10.0)},
        {"local_step_tol": 0},
        {"max_iters_per_weight": 0},
        {"exploit_symmetry": 1},
    ],
)
def test_invalid_certifier_config(kwargs):
    with pytest.raises(ConfigurationError):
        CertifierConfig(**kwargs)


def test_penalty_schedule_list_becomes_tuple():
    config = CertifierConfig(penalty_schedule=[1.0, 10.0])
    assert config.penalty_schedule == (1.0, 10.0)
    hash(config)


def test_overrides_take_precedence_over_file_values():
    config = load_certifier_config({"starts": 30, "seed": 4}, starts=12, seed=None)
    assert config.starts == 12
    assert config.seed == 4
    assert config.max_iters_per_weight == 200


def test_loader_without_sources():
    assert load_seesaw_config() == SeesawConfig()


def test_unknown_config_key():
    with pytest.raises(ConfigurationError):
        load_seesaw_config({"penalty_schedule": [1.0]})
    with pytest.raises(ConfigurationError):
        load_certifier_config(sweeps=3)


def test_read_config_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"starts": 7}), encoding="utf-8")
    assert load_seesaw_config(read_config_file(path)).starts == 7


@pytest.mark.parametrize("text", ["{not json", "[1, 2]"])
def test_unreadable_config_file(tmp_path, text):
    path = tmp_path / "config.json"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigurationError):
        read_config_file(path)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigurationError):
        read_config_file(tmp_path / "absent.json")


def test_stall_starts():
    assert CertifierConfig().stall_starts == 60
    assert load_certifier_config({"stall_starts": 5}).stall_starts == 5
    with pytest.raises(ConfigurationError):
        CertifierConfig(stall_starts=0)

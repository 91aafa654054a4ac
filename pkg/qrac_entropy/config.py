"""Configuration types for the see-saw optimizer and the entropy certifier."""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Tuple, Union

from .base import (
    make_config_checker,
    make_config_loader,
    make_config_validator_registrar,
)
from .exceptions import ConfigurationError


UINT64_MAX = 2**64 - 1


def _check_positive_int(config: str, value: Any) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigurationError(f"'{config}' should be a positive integer")
    return None


def _check_positive_real(config: str, value: Any) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"'{config}' should be a real number")
    if not math.isfinite(value) or value <= 0:
        raise ConfigurationError(f"'{config}' should be positive and finite")
    return None


def _check_seed(value: Any) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError("'seed' should be an integer")
    if not 0 <= value <= UINT64_MAX:
        raise ConfigurationError("'seed' should be a 64-bit unsigned integer")
    return None


##########
# SEESAW #
##########

SEESAW_CONFIG_VALIDATORS = {}
seesaw_config_validator = make_config_validator_registrar(SEESAW_CONFIG_VALIDATORS)
check_seesaw_config = make_config_checker(SEESAW_CONFIG_VALIDATORS)


@seesaw_config_validator
def validate_starts(value: Any) -> None:
    _check_positive_int("starts", value)


@seesaw_config_validator
def validate_max_sweeps(value: Any) -> None:
    _check_positive_int("max_sweeps", value)


@seesaw_config_validator
def validate_convergence_tol(value: Any) -> None:
    _check_positive_real("convergence_tol", value)


seesaw_config_validator(_check_seed, config="seed")


@dataclass(frozen=True)
class SeesawConfig:
    """
    Settings of the multi-start see-saw optimizer.

    :param starts: Number of random initializations.
    :param max_sweeps: Upper bound on state+measurement sweeps per start.
    :param convergence_tol: A start stops once a sweep improves T by less than this.
    :param seed: Master seed; per-start streams are derived from it.
    """

    starts: int = 100
    max_sweeps: int = 500
    convergence_tol: float = 1e-12
    seed: int = 0

    def __post_init__(self) -> None:
        check_seesaw_config(self)


#############
# CERTIFIER #
#############

CERTIFIER_CONFIG_VALIDATORS = {}
certifier_config_validator = make_config_validator_registrar(
    CERTIFIER_CONFIG_VALIDATORS
)
check_certifier_config = make_config_checker(CERTIFIER_CONFIG_VALIDATORS)

certifier_config_validator(validate_starts)
certifier_config_validator(_check_seed, config="seed")


@certifier_config_validator
def validate_constraint_tol(value: Any) -> None:
    _check_positive_real("constraint_tol", value)
    if value > 1e-6:
        raise ConfigurationError("'constraint_tol' should not exceed 1e-6")


@certifier_config_validator
def validate_penalty_schedule(value: Any) -> None:
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigurationError("'penalty_schedule' should be a non-empty sequence")
    for weight in value:
        _check_positive_real("penalty_schedule", weight)
    if any(later <= earlier for earlier, later in zip(value, value[1:])):
        raise ConfigurationError("'penalty_schedule' should be strictly increasing")


@certifier_config_validator
def validate_local_step_tol(value: Any) -> None:
    _check_positive_real("local_step_tol", value)


@certifier_config_validator
def validate_max_iters_per_weight(value: Any) -> None:
    _check_positive_int("max_iters_per_weight", value)


@certifier_config_validator
def validate_stall_starts(value: Any) -> None:
    _check_positive_int("stall_starts", value)


@certifier_config_validator
def validate_exploit_symmetry(value: Any) -> None:
    if not isinstance(value, bool):
        raise ConfigurationError("'exploit_symmetry' should be of type bool")


@dataclass(frozen=True)
class CertifierConfig:
    """
    Settings of the guessing-probability search.

    :param starts: Random initializations per candidate position.
    :param constraint_tol: Largest accepted |T - t_target| at a reported optimum.
    :param penalty_schedule: Strictly increasing quadratic penalty weights.
    :param local_step_tol: Termination tolerance of each local solve.
    :param max_iters_per_weight: Iteration cap of each local solve.
    :param seed: Master seed for the random initializations.
    :param exploit_symmetry: Restrict candidate positions to relabeling orbit representatives.
    :param stall_starts: A candidate position is abandoned after this many consecutive
        starts that do not raise its best probability.
    """

    starts: int = 200
    constraint_tol: float = 1e-6
    penalty_schedule: Tuple[float, ...] = (1e1, 1e2, 1e3, 1e4, 1e5)
    local_step_tol: float = 1e-9
    max_iters_per_weight: int = 200
    seed: int = 0
    exploit_symmetry: bool = True
    stall_starts: int = 60

    def __post_init__(self) -> None:
        if isinstance(self.penalty_schedule, list):
            object.__setattr__(self, "penalty_schedule", tuple(self.penalty_schedule))
        check_certifier_config(self)


load_seesaw_config = make_config_loader(SeesawConfig)
load_certifier_config = make_config_loader(CertifierConfig)


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a JSON config file holding a flat object of config fields.

    :param path: Path to the file.
    :return: The decoded mapping.
    """
    try:
        with open(path, encoding="utf-8") as file:
            mapping = json.load(file)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"Could not read config file {path}: {exc}") from exc

    if not isinstance(mapping, dict):
        raise ConfigurationError("Config file should hold a JSON object")
    return mapping

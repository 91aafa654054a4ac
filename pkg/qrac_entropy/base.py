import dataclasses
from typing import Any, Callable, Dict, Mapping, Optional, Type, TypeVar

from .exceptions import ConfigurationError


Validator = Callable[[Any], None]
C = TypeVar("C")


def make_config_validator_registrar(registry: Dict[str, Validator]):
    """
    Create a function for registering a configuration validator in the registry.

    :param registry: The registry to register the validator in.
    """

    def register_validator(
        validator: Validator, *, config: Optional[str] = None
    ) -> Validator:
        """
        Register a configuration validator in the registry.

        :param validator: The validator to register.
        :param config: The configuration to register the validator for.
            Defaults to the validator's name without the `validate_` prefix.
        """
        if config is None:
            config = validator.__name__.removeprefix("validate_")

        registry[config] = validator
        return validator

    return register_validator


def make_config_checker(validators: Dict[str, Validator]):
    """
    Create a function that runs every registered validator against a config instance.

    :param validators: The registry holding the validators for the config type.
    """

    def check(config: object) -> None:
        """
        Validate each field of a config dataclass instance.

        :param config: The config instance to check.
        :raises ConfigurationError: If any value is invalid.
        """
        for field in dataclasses.fields(config):
            validator = validators.get(field.name)
            if validator:
                validator(getattr(config, field.name))
        return None

    return check


def make_config_loader(config_cls: Type[C]):
    """
    Create a loader that builds `config_cls` instances from a mapping and overrides.

    Precedence is overrides > mapping > the dataclass defaults.
    Overrides whose value is `None` are treated as not given.

    :param config_cls: The frozen config dataclass to build.
    """
    allowed_configs = tuple(field.name for field in dataclasses.fields(config_cls))

    def load(mapping: Optional[Mapping[str, Any]] = None, **overrides: Any) -> C:
        """
        Build a config instance.

        :param mapping: Values read from a config file, keyed by field name.
        :param overrides: Values given explicitly, e.g. from command-line flags.
        :return: The validated config instance.
        """
        values: Dict[str, Any] = {}
        for source in (mapping or {}, overrides):
            for config, value in source.items():
                if config not in allowed_configs:
                    raise ConfigurationError(
                        f"Invalid config for {config_cls.__name__}: {config}"
                    )
                if value is not None:
                    values[config] = value
        return config_cls(**values)

    return load

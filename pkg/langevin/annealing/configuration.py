"""Module for loading, validating, and accessing the toolkit's
configuration.

"""
import copy
import logging
import os
import pathlib
import typing

import cerberus  # type: ignore
import yaml
from pantos.common.configuration import Config
from pantos.common.configuration import ConfigError

from langevin.annealing.constants import OUTPUT_ROOT_ENV_VAR

_logger = logging.getLogger(__name__)


def parse_override(assignment: str) -> typing.Tuple[str, typing.Any]:
    """Parse a dotted ``key=value`` override.

    Parameters
    ----------
    assignment : str
        The override, e.g. ``schedule.A=2``. The value is parsed as a
        YAML scalar or flow collection.

    Returns
    -------
    tuple of str and object
        The dotted key and the parsed value.

    Raises
    ------
    ConfigError
        If the override is malformed.

    """
    key, separator, raw_value = assignment.partition('=')
    key = key.strip()
    if separator != '=' or len(key) == 0:
        raise ConfigError('override must have the form key=value',
                          assignment=assignment)
    try:
        return key, yaml.safe_load(raw_value)
    except yaml.YAMLError:
        raise ConfigError('unparsable override value', assignment=assignment)


def apply_overrides(config_dict: typing.Dict[str, typing.Any],
                    overrides: typing.Mapping[str, typing.Any]) \
        -> typing.Dict[str, typing.Any]:
    """Apply dotted-key overrides to a (nested) configuration
    dictionary.

    Parameters
    ----------
    config_dict : dict
        The configuration dictionary (not modified).
    overrides : mapping
        Dotted keys mapped to their new values.

    Returns
    -------
    dict
        A copy of the configuration dictionary with the overrides
        applied.

    Raises
    ------
    ConfigError
        If an override descends into a non-dictionary value.

    """
    result = copy.deepcopy(config_dict)
    for dotted_key, value in overrides.items():
        *parents, leaf = dotted_key.split('.')
        node = result
        for parent in parents:
            child = node.setdefault(parent, {})
            if child is None:
                child = node[parent] = {}
            if not isinstance(child, dict):
                raise ConfigError('override descends into a non-mapping',
                                  key=dotted_key)
            node = child
        node[leaf] = value
    return result


def _validate(config_dict: typing.Dict[str, typing.Any],
              validation_schema: typing.Dict[str, typing.Any]) \
        -> typing.Dict[str, typing.Any]:
    validator = cerberus.Validator(validation_schema)
    if not validator.validate(config_dict):
        raise ConfigError('invalid configuration', errors=validator.errors)
    return validator.document


class OverridableConfig(Config):
    """Configuration whose file values can be replaced by dotted-key
    overrides. The file is validated on its own first, the overridden
    values are validated again.

    """
    def __init__(self, default_file_name: str):
        super().__init__(default_file_name)
        self.__section_names: typing.List[str] = []
        self.__overridden: typing.Optional[typing.Dict[str,
                                                       typing.Any]] = None

    def __getitem__(self, key: str) -> typing.Any:
        if self.__overridden is not None:
            return self.__overridden[key]
        return super().__getitem__(key)

    def as_dict(self) -> typing.Dict[str, typing.Any]:
        """Get a deep copy of the effective configuration.

        Returns
        -------
        dict
            The validated and normalized configuration values.

        Raises
        ------
        ConfigError
            If the configuration has not been loaded yet.

        """
        if not self.is_loaded():
            raise ConfigError('configuration not yet loaded')
        config_dict = {}
        for name in self.__section_names:
            try:
                config_dict[name] = copy.deepcopy(self[name])
            except KeyError:
                continue
        return config_dict

    def load(self, validation_schema: typing.Dict[str, typing.Any],
             file_path: typing.Optional[str] = None,
             overrides: typing.Optional[typing.Mapping[str,
                                                       typing.Any]] = None) \
            -> None:
        """Load and validate the configuration, then apply and
        validate the overrides.

        Parameters
        ----------
        validation_schema : dict
            The Cerberus schema the configuration must adhere to.
        file_path : str or None
            The path to the configuration file (typical locations are
            searched for the default file name if none is specified).
        overrides : mapping or None
            Dotted keys mapped to values replacing those of the file.

        Raises
        ------
        ConfigError
            If the file cannot be found or parsed, or if the
            configuration is invalid.

        """
        if file_path is not None and not pathlib.Path(file_path).is_file():
            raise ConfigError('configuration file not found',
                              file_path=file_path)
        self.__overridden = None
        super().load(validation_schema, file_path)
        self.__section_names = list(validation_schema)
        if overrides:
            self.__overridden = _validate(
                apply_overrides(self.as_dict(), overrides),
                validation_schema)
            _logger.info('configuration overrides applied: %s',
                         sorted(overrides))



_DEFAULT_FILE_NAME: typing.Final[str] = 'langevin-annealing.yml'
"""Default configuration file name."""

_DEFAULT_OUTPUT_ROOT: typing.Final[str] = 'runs'
"""Output root used if neither the configuration nor the environment
names one."""

config = OverridableConfig(_DEFAULT_FILE_NAME)
"""Singleton object holding the configuration values."""

_VALIDATION_SCHEMA_NAMED_COMPONENT = {
    'type': 'dict',
    'required': True,
    'schema': {
        'name': {
            'type': 'string',
            'required': True
        },
        'params': {
            'type': 'dict',
            'default': {}
        }
    }
}
"""Schema for validating a potential or diffusion selection."""

_VALIDATION_SCHEMA = {
    'problem': {
        'type': 'dict',
        'required': True,
        'schema': {
            'potential': _VALIDATION_SCHEMA_NAMED_COMPONENT,
            'diffusion': _VALIDATION_SCHEMA_NAMED_COMPONENT
        }
    },
    'schedule': {
        'type': 'dict',
        'required': True,
        'schema': {
            'A': {
                'type': 'number',
                'required': True,
                'min': 0,
            },
            'gamma1': {
                'type': 'number',
                'default': 0.05
            },
            'eta': {
                'type': 'number',
                'default': 0.55
            },
            'c_T': {
                'type': 'number',
                'default': 1.0
            },
            'beta': {
                'type': 'number',
                'default': 1.0
            },
            'frozen_a': {
                'type': 'number',
                'nullable': True,
                'min': 0,
                'default': None
            }
        }
    },
    'noise': {
        'type': 'dict',
        'default': {},
        'schema': {
            'kind': {
                'type': 'string',
                'allowed': ['none', 'gaussian_scaled'],
                'default': 'none'
            },
            'c_zeta': {
                'type': 'number',
                'min': 0,
                'default': 0.0
            }
        }
    },
    'simulation': {
        'type': 'dict',
        'required': True,
        'schema': {
            'scheme': {
                'type': 'string',
                'allowed': ['euler', 'continuous', 'plateau'],
                'default': 'euler'
            },
            'x0': {
                'type': 'list',
                'required': True,
                'minlength': 1,
                'schema': {
                    'type': 'number'
                }
            },
            'horizon': {
                'type': 'number',
                'required': True
            },
            'fine_dt': {
                'type': 'number',
                'default': 1e-3
            },
            'n_traj': {
                'type': 'integer',
                'min': 1,
                'default': 1000
            },
            'workers': {
                'type': 'integer',
                'min': 1,
                'default': 1
            },
            'drift': {
                'type': 'boolean',
                'default': True
            },
            'record_times': {
                'type': 'dict',
                'default': {},
                'schema': {
                    'kind': {
                        'type': 'string',
                        'allowed': ['geometric', 'explicit'],
                        'default': 'geometric'
                    },
                    't0': {
                        'type': 'number',
                        'default': 1.0
                    },
                    'values': {
                        'type': 'list',
                        'default': [],
                        'schema': {
                            'type': 'number'
                        }
                    }
                }
            }
        }
    },
    'metrics': {
        'type': 'dict',
        'default': {},
        'schema': {
            'bandwidth': {
                'type': ['number', 'string'],
                'default': 'auto'
            },
            'tol': {
                'type': 'number',
                'default': 1e-6
            },
            'n_bootstrap': {
                'type': 'integer',
                'min': 0,
                'default': 50
            },
            'n_slices': {
                'type': 'integer',
                'min': 1,
                'default': 64
            }
        }
    },
    'compare': {
        'type': 'dict',
        'default': {},
        'schema': {
            'etas': {
                'type': 'list',
                'default': [0.55, 0.6],
                'schema': {
                    'type': 'number'
                }
            }
        }
    },
    'output': {
        'type': 'dict',
        'default': {},
        'schema': {
            'root': {
                'type': 'string',
                'default_setter': lambda _: os.environ.get(
                    OUTPUT_ROOT_ENV_VAR, _DEFAULT_OUTPUT_ROOT)
            }
        }
    },
    'seed': {
        'type': 'integer',
        'min': 0,
        'default': 0
    }
}
"""Schema for validating the configuration file."""


def load_config(file_path: typing.Optional[str] = None, reload: bool = True,
                overrides: typing.Optional[typing.Mapping[str, typing.Any]]
                = None) -> None:
    """Load the configuration from a configuration file.

    Parameters
    ----------
    file_path : str or None
        The path to the configuration file (typical configuration file
        locations are searched if none is specified).
    reload : bool
        If True, the configuration is also loaded if it was already
        loaded before.
    overrides : mapping or None
        Dotted keys (e.g. ``schedule.A``) mapped to values replacing
        those of the configuration file.

    Raises
    ------
    pantos.common.configuration.ConfigError
        If the configuration cannot be loaded (e.g. due to an invalid
        configuration file).

    See Also
    --------
    OverridableConfig.load

    """
    if reload or not config.is_loaded():
        config.load(_VALIDATION_SCHEMA, file_path, overrides)


def validate_config(config_dict: typing.Dict[str, typing.Any]) \
        -> typing.Dict[str, typing.Any]:
    """Validate and normalize a configuration dictionary without
    loading it into the singleton.

    Parameters
    ----------
    config_dict : dict
        The raw configuration values.

    Returns
    -------
    dict
        The normalized configuration values.

    Raises
    ------
    pantos.common.configuration.ConfigError
        If the configuration is invalid.

    """
    return _validate(config_dict, _VALIDATION_SCHEMA)

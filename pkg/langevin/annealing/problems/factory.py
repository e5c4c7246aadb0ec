"""Factory for potentials and diffusion fields selected by name.

"""
import json
import threading
import typing

from langevin.annealing.problems.base import DiffusionField
from langevin.annealing.problems.base import Potential
from langevin.annealing.problems.base import ProblemError
# Builtins register themselves as subclasses on import
from langevin.annealing.problems import diffusions  # noqa: F401
from langevin.annealing.problems import potentials  # noqa: F401

_potentials: typing.Dict[str, Potential] = {}
"""Potential objects by name and parameters."""

_diffusions: typing.Dict[str, DiffusionField] = {}
"""Diffusion field objects by name and parameters."""

_cache_lock = threading.Lock()

_potential_classes = Potential.find_subclasses()
"""Builtin potential classes."""

_diffusion_classes = DiffusionField.find_subclasses()
"""Builtin diffusion field classes."""


def get_potential_names() -> typing.List[str]:
    """Get the names of all builtin potentials.

    Returns
    -------
    list of str
        The sorted potential names.

    """
    return sorted(_potential_classes)


def get_diffusion_names() -> typing.List[str]:
    """Get the names of all builtin diffusion fields.

    Returns
    -------
    list of str
        The sorted diffusion field names.

    """
    return sorted(_diffusion_classes)


def get_potential(name: str, **params: typing.Any) -> Potential:
    """Factory for builtin potential objects.

    Parameters
    ----------
    name : str
        The registry name of the potential.
    **params : dict
        The constructor parameters of the potential.

    Returns
    -------
    Potential
        A potential instance for the specified name and parameters.

    Raises
    ------
    ProblemError
        If the name is unknown or the parameters are invalid.

    """
    return _get_instance(_potentials, _potential_classes, name, params)


def get_diffusion(name: str, **params: typing.Any) -> DiffusionField:
    """Factory for builtin diffusion field objects.

    Parameters
    ----------
    name : str
        The registry name of the diffusion field.
    **params : dict
        The constructor parameters of the diffusion field.

    Returns
    -------
    DiffusionField
        A diffusion field instance for the specified name and
        parameters.

    Raises
    ------
    ProblemError
        If the name is unknown or the parameters are invalid.

    """
    return _get_instance(_diffusions, _diffusion_classes, name, params)


def _get_instance(instances: typing.Dict[str, typing.Any],
                  classes: typing.Dict[str, type], name: str,
                  params: typing.Dict[str, typing.Any]) -> typing.Any:
    if name not in classes:
        raise ProblemError('unknown builtin', name=name,
                           known_names=sorted(classes))
    key = json.dumps([name, params], sort_keys=True, default=str)
    with _cache_lock:
        instance = instances.get(key)
        if instance is None:
            try:
                instance = classes[name](**params)
            except TypeError:
                raise ProblemError('invalid builtin parameters', name=name,
                                   params=params)
            instances[key] = instance
    return instance

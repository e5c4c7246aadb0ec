"""Top-level package of the Langevin annealing toolkit.

"""
import ctypes as _ctypes
import multiprocessing as _multiprocessing
import typing as _typing

from pantos.common.configuration import ConfigError as _ConfigError

from langevin.annealing.configuration import load_config as _load_config
from langevin.annealing.exceptions import \
    AnnealingLibraryError as _AnnealingLibraryError

_initialized = _multiprocessing.Value(_ctypes.c_bool, False)


def initialize_library(file_path: _typing.Optional[str] = None) -> None:
    """Initialize the Langevin annealing toolkit. The function is
    thread-safe and performs the initialization only once at the first
    invocation.

    Parameters
    ----------
    file_path : str or None
        The path to the configuration file (typical configuration file
        locations are searched if none is specified).

    Raises
    ------
    AnnealingLibraryError
        If the library cannot be initialized.

    """
    with _initialized.get_lock():
        if not _initialized.value:  # type: ignore
            try:
                _load_config(file_path)
            except _ConfigError as error:
                raise _AnnealingLibraryError('error loading config',
                                             cause=str(error))
            _initialized.value = True  # type: ignore
    # _multiprocessing.Value type bug:
    # https://github.com/python/mypy/issues/12299

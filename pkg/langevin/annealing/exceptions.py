"""Common exceptions for the Langevin annealing toolkit.

"""
from pantos.common.exceptions import BaseError


class AnnealingError(BaseError):
    """Base exception class for all Langevin annealing errors.

    """
    pass


class AnnealingLibraryError(AnnealingError):
    """Base exception class for all Langevin annealing library errors.

    """
    pass

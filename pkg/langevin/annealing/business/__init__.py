"""Package for all business logic.

"""
__all__ = ['Interactor', 'InteractorError']

from langevin.annealing.business.base import Interactor
from langevin.annealing.business.base import InteractorError

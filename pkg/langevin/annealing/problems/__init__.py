"""Package for potentials, diffusion fields, and the annealed drift.

"""
__all__ = [
    'DiffusionField', 'Potential', 'ProblemError', 'get_diffusion',
    'get_potential'
]

from langevin.annealing.problems.base import DiffusionField
from langevin.annealing.problems.base import Potential
from langevin.annealing.problems.base import ProblemError
from langevin.annealing.problems.factory import get_diffusion
from langevin.annealing.problems.factory import get_potential

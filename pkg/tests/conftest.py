"""Shared fixtures for all langevin.annealing package tests.

"""
import numpy as np
import pytest

from langevin.annealing.problems.diffusions import ConstantDiffusion
from langevin.annealing.problems.diffusions import ShearedDiffusion
from langevin.annealing.problems.diffusions import SineDiagonalDiffusion
from langevin.annealing.problems.potentials import DoubleWellPotential
from langevin.annealing.problems.potentials import QuadraticPotential
from langevin.annealing.schedules import AnnealSchedule
from langevin.annealing.schedules import PlateauSchedule
from langevin.annealing.schedules import PowerLawStepSequence


@pytest.fixture(scope='module')
def quadratic_1d():
    return QuadraticPotential(dim=1)


@pytest.fixture(scope='module')
def quadratic_2d():
    return QuadraticPotential(dim=2, curvature=[1.0, 2.0])


@pytest.fixture(scope='module')
def double_well_1d():
    return DoubleWellPotential(dim=1, well_sep=1.0, hess_left=1.0,
                               hess_right=4.0)


@pytest.fixture(scope='module')
def double_well_2d():
    return DoubleWellPotential(dim=2, well_sep=1.0, hess_left=1.0,
                               hess_right=4.0)


@pytest.fixture(scope='module')
def unit_diffusion_1d():
    return ConstantDiffusion(dim=1)


@pytest.fixture(scope='module')
def unit_diffusion_2d():
    return ConstantDiffusion(dim=2)


@pytest.fixture(scope='module')
def sine_diffusion_1d():
    return SineDiagonalDiffusion(dim=1, base=2.0, amplitude=1.0)


@pytest.fixture(scope='module')
def sine_diffusion_2d():
    return SineDiagonalDiffusion(dim=2, base=2.0, amplitude=1.0)


@pytest.fixture(scope='module')
def sheared_diffusion():
    return ShearedDiffusion(dim=2)


@pytest.fixture(scope='module')
def anneal_schedule():
    return AnnealSchedule(2.0)


@pytest.fixture(scope='module')
def step_sequence():
    return PowerLawStepSequence(0.1, 1.0)


@pytest.fixture(scope='module')
def plateau_schedule():
    return PlateauSchedule(1.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

"""Shared fixtures for all langevin.annealing.business package tests.

"""
import numpy as np
import pytest

from langevin.annealing.business.dynamics import SimSpec
from langevin.annealing.business.dynamics import SimulationInteractor
from langevin.annealing.business.metrics import MetricInteractor
from langevin.annealing.schedules import PowerLawStepSequence

_RECORD_TIMES = [0.5, 1.0, 2.0]


@pytest.fixture(scope='module')
def simulation_interactor():
    return SimulationInteractor()


@pytest.fixture(scope='module')
def metric_interactor():
    return MetricInteractor()


@pytest.fixture
def euler_spec(double_well_1d, unit_diffusion_1d, anneal_schedule):
    return SimSpec(pot=double_well_1d, sigma=unit_diffusion_1d,
                   schedule=anneal_schedule, x0=np.array([3.0]),
                   horizon=_RECORD_TIMES[-1], seed=42,
                   record_times=list(_RECORD_TIMES),
                   steps=PowerLawStepSequence(0.05, 0.6), fine_dt=1e-2)

import dataclasses
import math

import numpy as np
import pytest
import scipy.integrate

from langevin.annealing.business.dynamics import DivergenceError
from langevin.annealing.business.dynamics import NoiseModel
from langevin.annealing.business.dynamics import SimSpec
from langevin.annealing.business.dynamics import SimulationInteractorError
from langevin.annealing.problems.potentials import QuadraticPotential
from langevin.annealing.schedules import AnnealSchedule
from langevin.annealing.schedules import FrozenSchedule
from langevin.annealing.schedules import PlateauSchedule
from langevin.annealing.schedules import PowerLawStepSequence

_MANY_TRAJECTORIES = 20000


def test_simulate_euler_scheme_correct(simulation_interactor, euler_spec):
    result = simulation_interactor.simulate_euler_scheme(euler_spec, 1500)
    np.testing.assert_array_equal(result.record_times, [0.5, 1.0, 2.0])
    assert result.n_traj == 1500
    assert result.dim == 1
    assert len(result.samples) == 3
    assert result.means.shape == (3, 1)
    assert result.covariances.shape == (3, 1, 1)
    assert np.all(result.min_V <= result.mean_V)
    assert np.all(np.diff(result.min_V) <= 0)


@pytest.mark.parametrize('workers', [2, 3])
def test_simulate_euler_scheme_independent_of_workers(
        simulation_interactor, euler_spec, workers):
    reference = simulation_interactor.simulate_euler_scheme(euler_spec, 2500)
    spec = dataclasses.replace(euler_spec, workers=workers)
    result = simulation_interactor.simulate_euler_scheme(spec, 2500)
    for expected, samples in zip(reference.samples, result.samples):
        np.testing.assert_array_equal(samples, expected)
    np.testing.assert_array_equal(result.min_V, reference.min_V)


def test_simulate_euler_scheme_seed_changes_samples(simulation_interactor,
                                                    euler_spec):
    first = simulation_interactor.simulate_euler_scheme(euler_spec, 100)
    second = simulation_interactor.simulate_euler_scheme(
        dataclasses.replace(euler_spec, seed=43), 100)
    assert not np.array_equal(first.samples[-1], second.samples[-1])


def test_simulate_euler_scheme_noise_free_steps_correct(
        simulation_interactor, quadratic_1d, unit_diffusion_1d,
        anneal_schedule):
    steps = PowerLawStepSequence(0.1, 1.0)
    record_time = steps.cumulative(3)
    spec = SimSpec(pot=quadratic_1d, sigma=unit_diffusion_1d,
                   schedule=anneal_schedule, x0=np.array([2.0]),
                   horizon=record_time, seed=0, record_times=[record_time],
                   steps=steps, frozen_a=0.0)
    result = simulation_interactor.simulate_euler_scheme(spec, 3)
    # x_{n+1} = (1 − γ_{n+1})·x_n
    expected = 2.0 * (1 - 0.1) * (1 - 0.05) * (1 - 0.1 / 3)
    np.testing.assert_allclose(result.samples[0], expected, rtol=1e-12)


def test_simulate_euler_scheme_driftless_variance(simulation_interactor,
                                                  quadratic_1d,
                                                  unit_diffusion_1d,
                                                  anneal_schedule):
    spec = SimSpec(pot=quadratic_1d, sigma=unit_diffusion_1d,
                   schedule=anneal_schedule, x0=np.array([0.0]),
                   horizon=1.0, seed=5, record_times=[1.0],
                   steps=PowerLawStepSequence(0.1, 0.6), frozen_a=0.5,
                   drift_enabled=False)
    result = simulation_interactor.simulate_euler_scheme(
        spec, _MANY_TRAJECTORIES)
    # off-grid records follow the Brownian bridge, so Var = a²·t exactly
    assert result.covariances[0, 0, 0] == pytest.approx(0.25, rel=0.05)
    assert result.means[0, 0] == pytest.approx(0.0, abs=0.02)


def test_simulate_euler_scheme_gradient_noise_changes_samples(
        simulation_interactor, euler_spec):
    noisy = dataclasses.replace(euler_spec,
                                noise=NoiseModel('gaussian_scaled', 0.5))
    exact = simulation_interactor.simulate_euler_scheme(euler_spec, 100)
    perturbed = simulation_interactor.simulate_euler_scheme(noisy, 100)
    assert not np.array_equal(exact.samples[-1], perturbed.samples[-1])


def test_simulate_euler_scheme_divergence_error(simulation_interactor,
                                                unit_diffusion_1d,
                                                anneal_schedule):
    spec = SimSpec(pot=QuadraticPotential(dim=1, curvature=100.0),
                   sigma=unit_diffusion_1d, schedule=anneal_schedule,
                   x0=np.array([1e5]), horizon=1.0, seed=0,
                   record_times=[1.0], steps=PowerLawStepSequence(0.1, 1.0),
                   frozen_a=0.0)
    with pytest.raises(DivergenceError):
        simulation_interactor.simulate_euler_scheme(spec, 10)


def test_simulate_euler_scheme_missing_steps_error(simulation_interactor,
                                                   euler_spec):
    with pytest.raises(SimulationInteractorError):
        simulation_interactor.simulate_euler_scheme(
            dataclasses.replace(euler_spec, steps=None), 10)


@pytest.mark.parametrize('changes', [{
    'record_times': []
}, {
    'record_times': [2.0, 1.0]
}, {
    'horizon': 1.0
}, {
    'x0': np.array([1.0, 2.0])
}, {
    'workers': 0
}])
def test_simulate_euler_scheme_invalid_spec_error(simulation_interactor,
                                                  euler_spec, changes):
    with pytest.raises(SimulationInteractorError):
        simulation_interactor.simulate_euler_scheme(
            dataclasses.replace(euler_spec, **changes), 10)


def test_simulate_euler_scheme_dimension_mismatch_error(
        simulation_interactor, euler_spec, unit_diffusion_2d):
    with pytest.raises(SimulationInteractorError):
        simulation_interactor.simulate_euler_scheme(
            dataclasses.replace(euler_spec, sigma=unit_diffusion_2d), 10)


def test_simulate_euler_scheme_no_trajectories_error(simulation_interactor,
                                                     euler_spec):
    with pytest.raises(SimulationInteractorError):
        simulation_interactor.simulate_euler_scheme(euler_spec, 0)


def test_simulate_continuous_driftless_time_change(simulation_interactor,
                                                   quadratic_1d,
                                                   unit_diffusion_1d,
                                                   anneal_schedule):
    spec = SimSpec(pot=quadratic_1d, sigma=unit_diffusion_1d,
                   schedule=anneal_schedule, x0=np.array([0.0]),
                   horizon=2.0, seed=9, record_times=[2.0], fine_dt=1e-2,
                   drift_enabled=False)
    result = simulation_interactor.simulate_continuous(
        spec, _MANY_TRAJECTORIES)
    expected = simulation_interactor.time_change_inverse(
        anneal_schedule, 2.0)
    assert result.covariances[0, 0, 0] == pytest.approx(expected, rel=0.05)


def test_simulate_continuous_snaps_record_times(simulation_interactor,
                                                euler_spec):
    spec = dataclasses.replace(euler_spec, record_times=[0.504, 1.0],
                               horizon=1.0)
    result = simulation_interactor.simulate_continuous(spec, 10)
    np.testing.assert_allclose(result.record_times, [0.5, 1.0])


def test_simulate_continuous_frozen_quadratic_stationary(
        simulation_interactor, quadratic_1d, unit_diffusion_1d,
        anneal_schedule):
    spec = SimSpec(pot=quadratic_1d, sigma=unit_diffusion_1d,
                   schedule=anneal_schedule, x0=np.array([0.0]),
                   horizon=10.0, seed=3, record_times=[10.0], fine_dt=1e-2,
                   frozen_a=1.0)
    result = simulation_interactor.simulate_continuous(spec, 10000)
    # Ornstein-Uhlenbeck dX = −X dt + dW has stationary variance 1/2
    assert result.covariances[0, 0, 0] == pytest.approx(0.5, rel=0.07)


@pytest.mark.parametrize('fine_dt', [None, 0.0, 0.1])
def test_simulate_continuous_invalid_fine_dt_error(simulation_interactor,
                                                   euler_spec, fine_dt):
    with pytest.raises(SimulationInteractorError):
        simulation_interactor.simulate_continuous(
            dataclasses.replace(euler_spec, fine_dt=fine_dt), 10)


def test_simulate_plateau_driftless_levels(simulation_interactor,
                                           quadratic_1d, unit_diffusion_1d):
    schedule = AnnealSchedule(1.0)
    spec = SimSpec(pot=quadratic_1d, sigma=unit_diffusion_1d,
                   schedule=schedule, x0=np.array([0.0]), horizon=4.0,
                   seed=1, record_times=[1.0, 4.0], fine_dt=1e-2,
                   plateau=PlateauSchedule(1.0, 1.0), drift_enabled=False)
    result = simulation_interactor.simulate_plateau(spec, _MANY_TRAJECTORIES)
    # level a(1) on [0, 1) and a(4) on [1, 4)
    first = schedule.a_of_t(1.0)**2
    second = first + 3 * schedule.a_of_t(4.0)**2
    assert result.covariances[0, 0, 0] == pytest.approx(first, rel=0.05)
    assert result.covariances[1, 0, 0] == pytest.approx(second, rel=0.05)


@pytest.mark.parametrize('frozen_schedule', [False, True])
def test_simulate_plateau_matches_continuous_on_first_plateau(
        simulation_interactor, double_well_1d, unit_diffusion_1d,
        anneal_schedule, plateau_schedule, frozen_schedule):
    _, first_level = plateau_schedule.plateau_times(anneal_schedule, 1)
    plateau_spec = SimSpec(pot=double_well_1d, sigma=unit_diffusion_1d,
                           schedule=anneal_schedule, x0=np.array([1.0]),
                           horizon=plateau_schedule.time(1), seed=7,
                           record_times=[0.25, 0.5, 1.0], fine_dt=1e-3,
                           plateau=plateau_schedule, workers=2)
    if frozen_schedule:
        continuous_spec = dataclasses.replace(
            plateau_spec, schedule=FrozenSchedule(first_level),
            plateau=None)
    else:
        continuous_spec = dataclasses.replace(plateau_spec, plateau=None,
                                              frozen_a=first_level)
    plateau_result = simulation_interactor.simulate_plateau(plateau_spec, 300)
    continuous_result = simulation_interactor.simulate_continuous(
        continuous_spec, 300)
    np.testing.assert_array_equal(plateau_result.record_times,
                                  continuous_result.record_times)
    for plateau_samples, continuous_samples in zip(
            plateau_result.samples, continuous_result.samples):
        assert np.allclose(plateau_samples, continuous_samples, rtol=0.0,
                           atol=1e-12)


def test_simulate_plateau_missing_plateau_error(simulation_interactor,
                                                euler_spec):
    with pytest.raises(SimulationInteractorError):
        simulation_interactor.simulate_plateau(euler_spec, 10)


def test_time_change_inverse_constant_correct(simulation_interactor):
    assert simulation_interactor.time_change_inverse(2.0, 3.0) == \
        pytest.approx(12.0)


@pytest.mark.parametrize('t', [0.5, 3.0, 50.0])
def test_time_change_inverse_schedule_correct(simulation_interactor, t):
    schedule = AnnealSchedule(1.5)
    grid = np.linspace(0.0, t, 2000001)
    expected = scipy.integrate.trapezoid(schedule.a_of_t(grid)**2, grid)
    value = simulation_interactor.time_change_inverse(schedule, t)
    assert abs(value - expected) < 1e-8
    assert schedule.a_of_t(t)**2 * t < value < 1.5**2 * t


def test_time_change_inverse_zero_time(simulation_interactor,
                                       anneal_schedule):
    assert simulation_interactor.time_change_inverse(anneal_schedule,
                                                     0.0) == 0.0


@pytest.mark.parametrize('u, t', [(1.0, -1.0), (0.0, 1.0)])
def test_time_change_inverse_error(simulation_interactor, u, t):
    with pytest.raises(SimulationInteractorError):
        simulation_interactor.time_change_inverse(u, t)


def test_noise_model_sample_correct(rng):
    model = NoiseModel('gaussian_scaled', 0.5)
    assert model.active
    noise = model.sample(np.full(50000, 4.0), rng, 2)
    assert noise.shape == (50000, 2)
    # ζ = c·√V·g has standard deviation 0.5·2 = 1
    assert float(np.std(noise)) == pytest.approx(1.0, rel=0.02)
    assert abs(float(np.mean(noise))) < 0.02


def test_noise_model_inactive():
    assert not NoiseModel().active
    assert not NoiseModel('gaussian_scaled', 0.0).active


@pytest.mark.parametrize('kind, c_zeta', [('cauchy', 1.0),
                                          ('gaussian_scaled', -1.0)])
def test_noise_model_invalid_error(kind, c_zeta):
    with pytest.raises(SimulationInteractorError):
        NoiseModel(kind, c_zeta)


def test_ensemble_result_means_match_samples(simulation_interactor,
                                             euler_spec):
    result = simulation_interactor.simulate_euler_scheme(euler_spec, 500)
    for mean, samples in zip(result.means, result.samples):
        assert mean[0] == pytest.approx(float(np.mean(samples)))
    assert math.isfinite(float(result.mean_V[-1]))
